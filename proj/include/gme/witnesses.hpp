// witnesses.hpp
// Nonlinear multipartite entanglement witnesses. Each functional is <= 0 on
// its separability class; a positive value certifies entanglement outside it.
//
//   I_GHZ  = |<010|rho|101>| - sum_i sqrt(<010 101|Pi_i rho(x)rho Pi_i|010 101>)
//   I_W    = sum_{i!=j} |<w_i|rho|w_j>| - sum_{i,j} sqrt(<w_i w_j|Pi_i rho(x)rho Pi_i|w_i w_j>)
//   I_ksep = |<phi1|rho|phi2>| - sum_{k-partitions} prod_parts (<Phi'|rho(x)rho|Phi'>)^(1/2k)
//
// The two-copy terms are evaluated in closed form as products of single-copy
// populations.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gme/states.hpp"
#include "gme/tensor_core.hpp"

namespace gme {

enum class WitnessName { GHZ, W_raw, W_scaled, KSEP };
enum class ElementSource { exact, measured };

std::string to_string(WitnessName name);
std::string to_string(ElementSource source);

struct WitnessReport {
  WitnessName name = WitnessName::GHZ;
  double value = 0.0;
  std::optional<int> k;  // set iff name == KSEP
  std::optional<std::pair<BasisLabel, BasisLabel>> phi;
  ElementSource element_source = ElementSource::exact;
  /// Populations the formula needed that were not supplied and taken as 0.
  std::vector<BasisLabel> assumed_zero;
};

/// A single sqrt-term <xy| Pi_subs rho(x)rho Pi_subs |xy>.
struct SwapTerm {
  BasisLabel x;
  BasisLabel y;
  SubsystemSet subs;
};

/// The three subtraction terms of I_GHZ.
std::vector<SwapTerm> ghz_swap_terms();
/// The nine subtraction terms of I_W (row-major over (i, j), Pi_i).
std::vector<SwapTerm> w_swap_terms();

double witness_ghz(const DensityMatrix& rho);

enum class WConvention { raw, scaled };
/// scaled = raw / 2, the normalization under which the ideal symmetric W gives 1/2.
double witness_w(const DensityMatrix& rho, WConvention convention = WConvention::scaled);

/// k in {2, 3}; phi1 and phi2 are fully separable.
double witness_ksep(const DensityMatrix& rho, int k, const ProductState& phi1, const ProductState& phi2);
double witness_ksep(const DensityMatrix& rho, int k, const BasisLabel& phi1, const BasisLabel& phi2);
/// Throws std::invalid_argument when either input does not factor.
double witness_ksep(const DensityMatrix& rho, int k, const PureState& phi1, const PureState& phi2);

/// Fixed set of 20 basis-label pairs used when no Phi is given.
const std::vector<std::pair<BasisLabel, BasisLabel>>& phi_dictionary();

/// Largest witness_ksep over phi_dictionary().
WitnessReport best_ksep(const DensityMatrix& rho, int k);

/// <target|rho|target> - 1/2.
double fidelity_witness(const DensityMatrix& rho, const PureState& target);

// ---------------------------------------------------------------------------
// Evaluation from a partial set of matrix elements.

/// Populations and cross-term magnitudes as an experiment would report them.
class ElementMap {
 public:
  void set_population(const BasisLabel& label, double value);
  /// Stored for the unordered pair {bra, ket}.
  void set_magnitude(const BasisLabel& bra, const BasisLabel& ket, double value);

  std::optional<double> population(const BasisLabel& label) const;
  std::optional<double> magnitude(const BasisLabel& bra, const BasisLabel& ket) const;

  const std::map<BasisLabel, double>& populations() const noexcept { return pops_; }
  const std::map<std::pair<BasisLabel, BasisLabel>, double>& magnitudes() const noexcept { return mags_; }

  /// Every population and cross magnitude read off an exact matrix.
  static ElementMap from_density(const DensityMatrix& rho);

 private:
  std::map<BasisLabel, double> pops_;
  std::map<std::pair<BasisLabel, BasisLabel>, double> mags_;
};

/// Raised when an element the witness needs was not measured.
class MissingElementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WitnessRequest {
  WitnessName name = WitnessName::GHZ;
  int k = 3;                              // KSEP only
  BasisLabel phi1{0, 1, 0};               // KSEP only
  BasisLabel phi2{1, 0, 1};               // KSEP only
};

/// Evaluates the requested witness from measured elements. Cross magnitudes
/// and the populations of the witness's own kets are required; populations of
/// other (swapped) kets default to 0 and are listed in assumed_zero.
WitnessReport witness_from_elements(const ElementMap& elements, const WitnessRequest& request);

}  // namespace gme
