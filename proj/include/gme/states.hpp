// states.hpp
// Target W / GHZ states, product states, separable samplers and the path
// dephasing channel.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gme/tensor_core.hpp"

namespace gme {

/// Real amplitudes of a|101> + i b|011> + c|002>.
struct WParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Throws std::invalid_argument unless a,b,c >= 0 and a^2+b^2+c^2 = 1 within 1e-12.
  void validate() const;
  static WParams symmetric();   // a = b = c = 1/sqrt(3)
  static WParams asymmetric();  // a = 1/sqrt(2), b = c = 1/2
};

/// Real amplitudes of i d|101> + e|010>.
struct GHZParams {
  double d = 0.0;
  double e = 0.0;

  void validate() const;
  static GHZParams balanced();  // d = e = 1/sqrt(2)
};

/// Path dephasing strength p in [0, 1].
class DephasingStrength {
 public:
  explicit DephasingStrength(double p);
  double value() const noexcept { return p_; }

 private:
  double p_;
};

/// The three W components |w1> = |101>, |w2> = |011>, |w3> = |002>.
std::array<BasisLabel, 3> w_labels();

PureState make_w(const WParams& params);
PureState make_ghz(const GHZParams& params);

/// Pure product state path (x) spin (x) energy; factors need not be normalized.
struct ProductState {
  Eigen::Vector2cd path;
  Eigen::Vector2cd spin;
  Eigen::Vector3cd energy;

  static ProductState from_label(const BasisLabel& label);
  PureState to_pure() const;
};

/// Returns the factors when psi is a product across all three subsystems.
std::optional<ProductState> factorize(const PureState& psi, double tol = 1e-10);

/// Builds the pure state that factors along partition; factors[i] spans the
/// members of parts()[i] in ascending subsystem order (energy fastest).
PureState product_state(const Partition& partition, const std::vector<Eigen::VectorXcd>& factors);

/// Convex mixture of 2-6 pure states, each a product across one of the three
/// bipartitions. When fixed is set every term uses it; otherwise the
/// bipartition is drawn independently per term.
DensityMatrix sample_biseparable(std::uint64_t seed, std::optional<Partition> fixed = std::nullopt);

/// Mixture of pure states that factor into k parts (k = 2 or 3).
DensityMatrix sample_ksep(int k, std::uint64_t seed);

/// rho -> (1-p) rho + p (D0 rho D0 + D1 rho D1), D_q projecting onto path q.
DensityMatrix path_dephase(const DensityMatrix& rho, const DephasingStrength& strength);

/// <target|rho|target>.
double fidelity(const DensityMatrix& rho, const PureState& target);

}  // namespace gme
