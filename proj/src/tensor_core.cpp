#include "gme/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gme {

int BasisLabel::component(int subsystem) const {
  switch (subsystem) {
    case kPath: return path;
    case kSpin: return spin;
    case kEnergy: return energy;
    default: throw std::domain_error("subsystem must be 1, 2 or 3");
  }
}

void BasisLabel::set_component(int subsystem, int value) {
  switch (subsystem) {
    case kPath: path = value; break;
    case kSpin: spin = value; break;
    case kEnergy: energy = value; break;
    default: throw std::domain_error("subsystem must be 1, 2 or 3");
  }
}

bool BasisLabel::valid() const noexcept {
  return path >= 0 && path < kPathDim && spin >= 0 && spin < kSpinDim && energy >= 0 &&
         energy < kEnergyDim;
}

BasisLabel BasisLabel::parse(std::string_view ket) {
  if (ket.size() != 3) {
    throw std::domain_error("basis label must have three digits, got '" + std::string(ket) + "'");
  }
  BasisLabel label{ket[0] - '0', ket[1] - '0', ket[2] - '0'};
  if (!label.valid()) {
    throw std::domain_error("basis label out of range: '" + std::string(ket) + "'");
  }
  return label;
}

BasisLabel BasisLabel::from_index(std::size_t index) {
  if (index >= static_cast<std::size_t>(kDim)) {
    throw std::domain_error("basis index out of range: " + std::to_string(index));
  }
  const int i = static_cast<int>(index);
  return BasisLabel{i / (kSpinDim * kEnergyDim), (i / kEnergyDim) % kSpinDim, i % kEnergyDim};
}

std::string BasisLabel::str() const {
  return std::to_string(path) + std::to_string(spin) + std::to_string(energy);
}

std::size_t label_index(const BasisLabel& label) {
  if (!label.valid()) {
    throw std::domain_error("basis label out of range: (" + std::to_string(label.path) + "," +
                            std::to_string(label.spin) + "," + std::to_string(label.energy) + ")");
  }
  return static_cast<std::size_t>((label.path * kSpinDim + label.spin) * kEnergyDim + label.energy);
}

// ---------------------------------------------------------------------------

SubsystemSet::SubsystemSet(std::initializer_list<int> members) {
  for (int m : members) {
    if (m < 1 || m > 3) throw std::domain_error("subsystem must be 1, 2 or 3");
    mask_ |= 1U << (m - 1);
  }
  if (mask_ == 0) throw std::domain_error("subsystem set must be nonempty");
}

SubsystemSet SubsystemSet::from_mask(unsigned mask) {
  if (mask == 0 || mask > 7) throw std::domain_error("subsystem mask must be in 1..7");
  return SubsystemSet(mask);
}

std::vector<int> SubsystemSet::members() const {
  std::vector<int> out;
  for (int s = 1; s <= 3; ++s) {
    if (contains(s)) out.push_back(s);
  }
  return out;
}

std::string SubsystemSet::str() const {
  std::string s = "{";
  for (int m : members()) {
    if (s.size() > 1) s += ",";
    s += std::to_string(m);
  }
  return s + "}";
}

std::vector<SubsystemSet> SubsystemSet::all_nonempty() {
  std::vector<SubsystemSet> out;
  for (unsigned m = 1; m <= 7; ++m) out.push_back(SubsystemSet(m));
  return out;
}

// ---------------------------------------------------------------------------

Partition::Partition(std::vector<SubsystemSet> parts) : parts_(std::move(parts)) {
  if (parts_.empty() || parts_.size() > 3) {
    throw std::domain_error("partition must have between 1 and 3 parts");
  }
  unsigned seen = 0;
  for (const auto& p : parts_) {
    if (seen & p.mask()) throw std::domain_error("partition parts overlap");
    seen |= p.mask();
  }
  if (seen != 7U) throw std::domain_error("partition does not cover {1,2,3}");
  std::sort(parts_.begin(), parts_.end(),
            [](const SubsystemSet& a, const SubsystemSet& b) { return a.mask() < b.mask(); });
}

std::string Partition::str() const {
  std::string s;
  for (const auto& p : parts_) {
    if (!s.empty()) s += "|";
    for (int m : p.members()) s += std::to_string(m);
  }
  return s;
}

std::vector<Partition> Partition::all_with_parts(int k) {
  switch (k) {
    case 1: return {Partition({SubsystemSet{1, 2, 3}})};
    case 2:
      return {Partition({SubsystemSet{1}, SubsystemSet{2, 3}}),
              Partition({SubsystemSet{2}, SubsystemSet{1, 3}}),
              Partition({SubsystemSet{3}, SubsystemSet{1, 2}})};
    case 3: return {Partition({SubsystemSet{1}, SubsystemSet{2}, SubsystemSet{3}})};
    default: throw std::domain_error("k must be 1, 2 or 3");
  }
}

// ---------------------------------------------------------------------------

PureState::PureState(const Vec12& amplitudes) : amps_(amplitudes) {
  const double n2 = amps_.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "state is not normalized: squared norm " << n2;
    throw std::invalid_argument(os.str());
  }
}

PureState PureState::normalized(const Vec12& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero vector");
  return PureState(amplitudes / n);
}

PureState PureState::basis(const BasisLabel& label) {
  Vec12 v = Vec12::Zero();
  v(static_cast<Eigen::Index>(label_index(label))) = 1.0;
  return PureState(v);
}

// ---------------------------------------------------------------------------

std::string DensityMatrix::check(const Mat12& m) {
  if (!m.allFinite()) return "matrix has non-finite entries";
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max deviation " << herm << ")";
    return os.str();
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "trace is " << tr << ", expected 1";
    return os.str();
  }
  const Mat12 h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat12> es(h, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < kPsdTol) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite (min eigenvalue " << lo << ")";
    return os.str();
  }
  return {};
}

DensityMatrix::DensityMatrix(const Mat12& entries) : m_(entries) {
  if (auto err = check(m_); !err.empty()) throw InvariantError(err);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Mat12::Identity() / static_cast<double>(kDim));
}

Complex DensityMatrix::entry(const BasisLabel& bra, const BasisLabel& ket) const {
  return m_(static_cast<Eigen::Index>(label_index(bra)), static_cast<Eigen::Index>(label_index(ket)));
}

double DensityMatrix::population(const BasisLabel& label) const {
  return entry(label, label).real();
}

Complex matrix_element(const DensityMatrix& rho, const BasisLabel& bra, const BasisLabel& ket) {
  return rho.entry(bra, ket);
}

std::pair<BasisLabel, BasisLabel> swap_components(const BasisLabel& x, const BasisLabel& y,
                                                  const SubsystemSet& subs) {
  BasisLabel xs = x;
  BasisLabel ys = y;
  for (int s : subs.members()) {
    xs.set_component(s, y.component(s));
    ys.set_component(s, x.component(s));
  }
  return {xs, ys};
}

double swapped_pair_population(const DensityMatrix& rho, const BasisLabel& x, const BasisLabel& y,
                               const SubsystemSet& subs) {
  const auto [xs, ys] = swap_components(x, y, subs);
  return rho.population(xs) * rho.population(ys);
}

Vec12 kron(const Eigen::VectorXcd& path, const Eigen::VectorXcd& spin, const Eigen::VectorXcd& energy) {
  if (path.size() != kPathDim || spin.size() != kSpinDim || energy.size() != kEnergyDim) {
    throw std::invalid_argument("kron: factor dimensions must be (2, 2, 3)");
  }
  Vec12 out;
  for (int i = 0; i < kDim; ++i) {
    const auto l = BasisLabel::from_index(static_cast<std::size_t>(i));
    out(i) = path(l.path) * spin(l.spin) * energy(l.energy);
  }
  return out;
}

Mat12 kron_operator(const Eigen::MatrixXcd& path, const Eigen::MatrixXcd& spin, const Eigen::MatrixXcd& energy) {
  if (path.rows() != kPathDim || path.cols() != kPathDim || spin.rows() != kSpinDim ||
      spin.cols() != kSpinDim || energy.rows() != kEnergyDim || energy.cols() != kEnergyDim) {
    throw std::invalid_argument("kron: factor dimensions must be (2, 2, 3)");
  }
  Mat12 out;
  for (int r = 0; r < kDim; ++r) {
    const auto a = BasisLabel::from_index(static_cast<std::size_t>(r));
    for (int c = 0; c < kDim; ++c) {
      const auto b = BasisLabel::from_index(static_cast<std::size_t>(c));
      out(r, c) = path(a.path, b.path) * spin(a.spin, b.spin) * energy(a.energy, b.energy);
    }
  }
  return out;
}

Mat12 path_projector(int q) {
  if (q < 0 || q >= kPathDim) throw std::domain_error("path must be 0 or 1");
  Mat12 p = Mat12::Zero();
  for (int i = 0; i < kDim; ++i) {
    if (BasisLabel::from_index(static_cast<std::size_t>(i)).path == q) p(i, i) = 1.0;
  }
  return p;
}

}  // namespace gme
