// tensor_core.hpp
// Linear algebra over H = H_path (2) x H_spin (2) x H_energy (3).
//
// Basis ordering is (path, spin, energy) with energy varying fastest, so the
// ket |p s e> sits at linear index (p*2 + s)*3 + e.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gme {

using Complex = std::complex<double>;

inline constexpr int kPathDim = 2;
inline constexpr int kSpinDim = 2;
inline constexpr int kEnergyDim = 3;
inline constexpr int kDim = kPathDim * kSpinDim * kEnergyDim;  // 12

using Vec12 = Eigen::Matrix<Complex, kDim, 1>;
using Mat12 = Eigen::Matrix<Complex, kDim, kDim>;

/// Raised when an amplitude would leave the truncated energy ladder {0,1,2}.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a matrix fails the Hermitian / unit-trace / PSD checks.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Subsystem numbering used throughout: 1 = path, 2 = spin, 3 = energy.
inline constexpr int kPath = 1;
inline constexpr int kSpin = 2;
inline constexpr int kEnergy = 3;

/// One of the 12 product basis kets. path: 0 = I, 1 = II; spin: 0 = down,
/// 1 = up; energy: index k means total energy E0 - k*hbar*omega.
struct BasisLabel {
  int path = 0;
  int spin = 0;
  int energy = 0;

  /// Component for subsystem 1, 2 or 3.
  int component(int subsystem) const;
  void set_component(int subsystem, int value);

  bool valid() const noexcept;
  /// Parses "101" style ket strings.
  static BasisLabel parse(std::string_view ket);
  static BasisLabel from_index(std::size_t index);
  std::string str() const;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

/// Throws std::domain_error for out-of-range fields.
std::size_t label_index(const BasisLabel& label);

/// Nonempty subset of {1,2,3}, stored sorted as a bitmask.
class SubsystemSet {
 public:
  SubsystemSet(std::initializer_list<int> members);
  static SubsystemSet from_mask(unsigned mask);

  bool contains(int subsystem) const noexcept { return (mask_ >> (subsystem - 1)) & 1U; }
  unsigned mask() const noexcept { return mask_; }
  std::vector<int> members() const;
  std::string str() const;

  /// The 7 nonempty subsets in mask order.
  static std::vector<SubsystemSet> all_nonempty();

  friend bool operator==(const SubsystemSet&, const SubsystemSet&) = default;

 private:
  explicit SubsystemSet(unsigned mask) : mask_(mask) {}
  unsigned mask_ = 0;
};

/// Exact cover of {1,2,3} by disjoint nonempty parts.
class Partition {
 public:
  explicit Partition(std::vector<SubsystemSet> parts);

  const std::vector<SubsystemSet>& parts() const noexcept { return parts_; }
  std::size_t size() const noexcept { return parts_.size(); }
  std::string str() const;

  /// All partitions of {1,2,3} into exactly k parts (k = 1, 2 or 3).
  static std::vector<Partition> all_with_parts(int k);

 private:
  std::vector<SubsystemSet> parts_;
};

/// Normalized 12-component ket.
class PureState {
 public:
  /// Throws std::invalid_argument unless |amplitudes|^2 = 1 within 1e-12.
  explicit PureState(const Vec12& amplitudes);
  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(const Vec12& amplitudes);
  static PureState basis(const BasisLabel& label);

  const Vec12& amplitudes() const noexcept { return amps_; }
  Complex amplitude(const BasisLabel& label) const { return amps_(static_cast<Eigen::Index>(label_index(label))); }

 private:
  Vec12 amps_;
};

/// Hermitian, unit-trace, positive semidefinite 12x12 matrix.
class DensityMatrix {
 public:
  /// Validates the invariants; throws InvariantError on failure.
  explicit DensityMatrix(const Mat12& entries);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed();

  const Mat12& matrix() const noexcept { return m_; }
  Complex entry(const BasisLabel& bra, const BasisLabel& ket) const;
  double population(const BasisLabel& label) const;

  /// Reports the first violated invariant, or an empty string.
  static std::string check(const Mat12& entries);

 private:
  Mat12 m_;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;

/// <bra|rho|ket>.
Complex matrix_element(const DensityMatrix& rho, const BasisLabel& bra, const BasisLabel& ket);

/// (x', y') with the components listed in subs exchanged between x and y.
std::pair<BasisLabel, BasisLabel> swap_components(const BasisLabel& x, const BasisLabel& y,
                                                  const SubsystemSet& subs);

/// <xy| Pi_subs (rho x rho) Pi_subs |xy> = <x'|rho|x'> <y'|rho|y'>.
double swapped_pair_population(const DensityMatrix& rho, const BasisLabel& x, const BasisLabel& y,
                               const SubsystemSet& subs);

/// Tensor product of path, spin and energy factors in label_index order.
/// Throws std::invalid_argument when factor sizes are not (2, 2, 3).
Vec12 kron(const Eigen::VectorXcd& path, const Eigen::VectorXcd& spin, const Eigen::VectorXcd& energy);
Mat12 kron_operator(const Eigen::MatrixXcd& path, const Eigen::MatrixXcd& spin, const Eigen::MatrixXcd& energy);

/// Projector onto path value q (0 or 1), identity on spin and energy.
Mat12 path_projector(int q);

}  // namespace gme
