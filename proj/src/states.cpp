#include "gme/states.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace gme {

namespace {

constexpr double kParamTol = 1e-12;
const Complex kI{0.0, 1.0};

int part_dim(const SubsystemSet& part) {
  int d = 1;
  for (int s : part.members()) d *= (s == kEnergy) ? kEnergyDim : 2;
  return d;
}

int part_index(const SubsystemSet& part, const BasisLabel& label) {
  int idx = 0;
  for (int s : part.members()) idx = idx * ((s == kEnergy) ? kEnergyDim : 2) + label.component(s);
  return idx;
}

// Complex Gaussian vector; with probability 1/2 a random subset of entries is
// zeroed so the samples also land on sparse, boundary-like states.
Eigen::VectorXcd random_factor(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  if (coin(rng)) {
    std::uniform_int_distribution<int> pick(0, dim - 1);
    const int keep = pick(rng);
    for (int i = 0; i < dim; ++i) {
      if (i != keep && coin(rng)) v(i) = 0.0;
    }
  }
  return v / v.norm();
}

Mat12 mixture(int terms, std::mt19937_64& rng, const std::function<PureState()>& draw) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (auto& x : w) {
    x = expo(rng);
    total += x;
  }
  Mat12 m = Mat12::Zero();
  for (double x : w) {
    const auto psi = draw();
    m += (x / total) * (psi.amplitudes() * psi.amplitudes().adjoint());
  }
  // Restore exact Hermiticity and unit trace lost to rounding.
  m = 0.5 * (m + m.adjoint()).eval();
  m /= m.trace().real();
  return m;
}

}  // namespace

void WParams::validate() const {
  if (a < 0.0 || b < 0.0 || c < 0.0) throw std::invalid_argument("W amplitudes must be nonnegative");
  const double n2 = a * a + b * b + c * c;
  if (std::abs(n2 - 1.0) > kParamTol) {
    std::ostringstream os;
    os << "W amplitudes are not normalized: a^2+b^2+c^2 = " << n2;
    throw std::invalid_argument(os.str());
  }
}

WParams WParams::symmetric() {
  const double s = 1.0 / std::sqrt(3.0);
  return {s, s, s};
}

WParams WParams::asymmetric() { return {1.0 / std::sqrt(2.0), 0.5, 0.5}; }

void GHZParams::validate() const {
  if (d < 0.0 || e < 0.0) throw std::invalid_argument("GHZ amplitudes must be nonnegative");
  const double n2 = d * d + e * e;
  if (std::abs(n2 - 1.0) > kParamTol) {
    std::ostringstream os;
    os << "GHZ amplitudes are not normalized: d^2+e^2 = " << n2;
    throw std::invalid_argument(os.str());
  }
}

GHZParams GHZParams::balanced() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s};
}

DephasingStrength::DephasingStrength(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("dephasing strength must lie in [0, 1]");
}

std::array<BasisLabel, 3> w_labels() {
  return {BasisLabel{1, 0, 1}, BasisLabel{0, 1, 1}, BasisLabel{0, 0, 2}};
}

PureState make_w(const WParams& params) {
  params.validate();
  const auto w = w_labels();
  Vec12 v = Vec12::Zero();
  v(static_cast<Eigen::Index>(label_index(w[0]))) = params.a;
  v(static_cast<Eigen::Index>(label_index(w[1]))) = kI * params.b;
  v(static_cast<Eigen::Index>(label_index(w[2]))) = params.c;
  return PureState(v);
}

PureState make_ghz(const GHZParams& params) {
  params.validate();
  Vec12 v = Vec12::Zero();
  v(static_cast<Eigen::Index>(label_index({1, 0, 1}))) = kI * params.d;
  v(static_cast<Eigen::Index>(label_index({0, 1, 0}))) = params.e;
  return PureState(v);
}

ProductState ProductState::from_label(const BasisLabel& label) {
  if (!label.valid()) throw std::domain_error("basis label out of range");
  ProductState p;
  p.path = Eigen::Vector2cd::Zero();
  p.spin = Eigen::Vector2cd::Zero();
  p.energy = Eigen::Vector3cd::Zero();
  p.path(label.path) = 1.0;
  p.spin(label.spin) = 1.0;
  p.energy(label.energy) = 1.0;
  return p;
}

PureState ProductState::to_pure() const { return PureState::normalized(kron(path, spin, energy)); }

std::optional<ProductState> factorize(const PureState& psi, double tol) {
  const Vec12& a = psi.amplitudes();
  Eigen::Index pivot = 0;
  a.cwiseAbs().maxCoeff(&pivot);
  const auto l0 = BasisLabel::from_index(static_cast<std::size_t>(pivot));
  const Complex a0 = a(pivot);

  auto amp = [&](BasisLabel l) { return a(static_cast<Eigen::Index>(label_index(l))); };
  ProductState f;
  for (int v = 0; v < kPathDim; ++v) {
    BasisLabel l = l0;
    l.path = v;
    f.path(v) = amp(l);
  }
  for (int v = 0; v < kSpinDim; ++v) {
    BasisLabel l = l0;
    l.spin = v;
    f.spin(v) = amp(l) / a0;
  }
  for (int v = 0; v < kEnergyDim; ++v) {
    BasisLabel l = l0;
    l.energy = v;
    f.energy(v) = amp(l) / a0;
  }
  const Vec12 rebuilt = kron(f.path, f.spin, f.energy);
  if ((rebuilt - a).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return f;
}

PureState product_state(const Partition& partition, const std::vector<Eigen::VectorXcd>& factors) {
  const auto& parts = partition.parts();
  if (factors.size() != parts.size()) {
    throw std::invalid_argument("product_state: one factor per partition part required");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (factors[i].size() != part_dim(parts[i])) {
      throw std::invalid_argument("product_state: factor " + std::to_string(i) + " has dimension " +
                                  std::to_string(factors[i].size()) + ", part " + parts[i].str() +
                                  " needs " + std::to_string(part_dim(parts[i])));
    }
  }
  Vec12 v;
  for (int i = 0; i < kDim; ++i) {
    const auto l = BasisLabel::from_index(static_cast<std::size_t>(i));
    Complex x = 1.0;
    for (std::size_t p = 0; p < parts.size(); ++p) x *= factors[p](part_index(parts[p], l));
    v(i) = x;
  }
  return PureState::normalized(v);
}

DensityMatrix sample_biseparable(std::uint64_t seed, std::optional<Partition> fixed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_terms(2, 6);
  const auto bipartitions = Partition::all_with_parts(2);
  std::uniform_int_distribution<std::size_t> pick(0, bipartitions.size() - 1);
  auto draw = [&]() {
    const Partition& part = fixed ? *fixed : bipartitions[pick(rng)];
    std::vector<Eigen::VectorXcd> factors;
    for (const auto& s : part.parts()) factors.push_back(random_factor(part_dim(s), rng));
    return product_state(part, factors);
  };
  return DensityMatrix(mixture(n_terms(rng), rng, draw));
}

DensityMatrix sample_ksep(int k, std::uint64_t seed) {
  if (k == 2) return sample_biseparable(seed);
  if (k != 3) throw std::domain_error("sample_ksep: k must be 2 or 3");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_terms(2, 6);
  const Partition full = Partition::all_with_parts(3).front();
  auto draw = [&]() {
    std::vector<Eigen::VectorXcd> factors;
    for (const auto& s : full.parts()) factors.push_back(random_factor(part_dim(s), rng));
    return product_state(full, factors);
  };
  return DensityMatrix(mixture(n_terms(rng), rng, draw));
}

DensityMatrix path_dephase(const DensityMatrix& rho, const DephasingStrength& strength) {
  const double p = strength.value();
  const Mat12 d0 = path_projector(0);
  const Mat12 d1 = path_projector(1);
  const Mat12& m = rho.matrix();
  return DensityMatrix((1.0 - p) * m + p * (d0 * m * d0 + d1 * m * d1));
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  const Vec12& t = target.amplitudes();
  return (t.adjoint() * rho.matrix() * t)(0, 0).real();
}

}  // namespace gme
