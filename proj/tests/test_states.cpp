#include <gtest/gtest.h>

#include <cmath>

#include "gme/states.hpp"
#include "gme/witnesses.hpp"

using namespace gme;

namespace {

const BasisLabel k101{1, 0, 1};
const BasisLabel k011{0, 1, 1};
const BasisLabel k002{0, 0, 2};
const BasisLabel k010{0, 1, 0};

}  // namespace

TEST(MakeW, Examples) {
  const auto sym = make_w(WParams::symmetric());
  EXPECT_NEAR(std::abs(sym.amplitude(k011)), 0.5773502691896258, 1e-12);
  EXPECT_NEAR(std::abs(sym.amplitudes().norm() - 1.0), 0.0, 1e-12);

  const auto basis = make_w({1, 0, 0});
  EXPECT_NEAR(std::abs(basis.amplitude(k101)), 1.0, 1e-15);

  const auto asym = DensityMatrix::from_pure(make_w(WParams::asymmetric()));
  EXPECT_NEAR(asym.population(k101), 0.5, 1e-12);
  EXPECT_NEAR(asym.population(k011), 0.25, 1e-12);
  EXPECT_NEAR(asym.population(k002), 0.25, 1e-12);

  EXPECT_THROW(make_w({1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(make_w({-1, 0, 0}), std::invalid_argument);
}

TEST(MakeGHZ, Examples) {
  const auto ghz = DensityMatrix::from_pure(make_ghz(GHZParams::balanced()));
  EXPECT_NEAR(std::abs(ghz.entry(k010, k101)), 0.5, 1e-12);
  const auto e_only = make_ghz({0, 1});
  EXPECT_NEAR(std::abs(e_only.amplitude(k010)), 1.0, 1e-15);
  const auto third = DensityMatrix::from_pure(make_ghz({1 / std::sqrt(3.0), std::sqrt(2.0 / 3.0)}));
  EXPECT_NEAR(third.population(k101), 1.0 / 3, 1e-12);
  EXPECT_NEAR(third.population(k010), 2.0 / 3, 1e-12);
  EXPECT_THROW(make_ghz({1, 1}), std::invalid_argument);
}

TEST(Constructors, SupportMatchesTargets) {
  const auto w = make_w({0.3, 0.4, std::sqrt(1 - 0.25)});
  const auto g = make_ghz({0.6, 0.8});
  for (std::size_t i = 0; i < 12; ++i) {
    const auto l = BasisLabel::from_index(i);
    if (l != k101 && l != k011 && l != k002) EXPECT_EQ(w.amplitude(l), Complex(0)) << l.str();
    if (l != k101 && l != k010) EXPECT_EQ(g.amplitude(l), Complex(0)) << l.str();
  }
  // flipped components carry the imaginary unit
  EXPECT_NEAR(w.amplitude(k011).imag(), 0.4, 1e-15);
  EXPECT_NEAR(g.amplitude(k101).imag(), 0.6, 1e-15);
}

TEST(PathDephase, Examples) {
  const auto ghz = DensityMatrix::from_pure(make_ghz(GHZParams::balanced()));
  EXPECT_TRUE(path_dephase(ghz, DephasingStrength(0)).matrix().isApprox(ghz.matrix(), 0));
  EXPECT_NEAR(witness_ghz(path_dephase(ghz, DephasingStrength(1))), 0.0, 1e-15);

  const auto sym = make_w(WParams::symmetric());
  EXPECT_NEAR(fidelity(path_dephase(DensityMatrix::from_pure(sym), DephasingStrength(1)), sym), 5.0 / 9, 1e-12);
  const auto asym = make_w(WParams::asymmetric());
  EXPECT_NEAR(fidelity(path_dephase(DensityMatrix::from_pure(asym), DephasingStrength(1)), asym), 0.5, 1e-12);

  EXPECT_THROW(DephasingStrength(1.5), std::domain_error);
  EXPECT_THROW(DephasingStrength(-0.1), std::domain_error);
}

TEST(PathDephase, Properties) {
  const auto rho = sample_biseparable(42);
  const auto full = path_dephase(rho, DephasingStrength(1));
  EXPECT_TRUE(path_dephase(full, DephasingStrength(1)).matrix().isApprox(full.matrix(), 1e-15));
  for (double p1 : {0.1, 0.4, 0.9}) {
    for (double p2 : {0.2, 0.7}) {
      const auto twice = path_dephase(path_dephase(rho, DephasingStrength(p1)), DephasingStrength(p2));
      for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) {
          const auto a = BasisLabel::from_index(i);
          const auto b = BasisLabel::from_index(j);
          const double factor = a.path == b.path ? 1.0 : (1 - p1) * (1 - p2);
          EXPECT_NEAR(std::abs(twice.entry(a, b) - factor * rho.entry(a, b)), 0.0, 1e-14);
        }
      EXPECT_TRUE(DensityMatrix::check(twice.matrix()).empty());
    }
  }
}

TEST(Fidelity, Examples) {
  const auto w = make_w(WParams::asymmetric());
  EXPECT_NEAR(fidelity(DensityMatrix::from_pure(w), w), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(), w), 1.0 / 12, 1e-15);
  const auto g = make_ghz(GHZParams::balanced());
  EXPECT_LT(fidelity(DensityMatrix::from_pure(make_ghz({0.6, 0.8})), g), 1.0 - 1e-3);
}

TEST(Fidelity, LinearInRho) {
  const auto a = sample_biseparable(1);
  const auto b = sample_biseparable(2);
  const auto t = make_w(WParams::symmetric());
  const DensityMatrix mix(0.3 * a.matrix() + 0.7 * b.matrix());
  EXPECT_NEAR(fidelity(mix, t), 0.3 * fidelity(a, t) + 0.7 * fidelity(b, t), 1e-14);
}

TEST(Samplers, FixedPartitionSingleTermGivesProductState) {
  const Partition p({SubsystemSet{1}, SubsystemSet{2, 3}});
  Eigen::VectorXcd path(2), rest(6);
  path << 1, 0;
  rest.setZero();
  rest(1 * 3 + 1) = 1;  // |11> on spin x energy
  const auto psi = product_state(p, {path, rest});
  EXPECT_NEAR(std::abs(psi.amplitude(k011)), 1.0, 1e-15);
  EXPECT_TRUE(factorize(psi).has_value());
  EXPECT_FALSE(factorize(make_ghz(GHZParams::balanced())).has_value());
}

TEST(Samplers, OutputsSatisfyInvariants) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    EXPECT_TRUE(DensityMatrix::check(sample_biseparable(s).matrix()).empty());
    EXPECT_TRUE(DensityMatrix::check(sample_ksep(2, s).matrix()).empty());
    EXPECT_TRUE(DensityMatrix::check(sample_ksep(3, s).matrix()).empty());
  }
  EXPECT_THROW(sample_ksep(4, 0), std::domain_error);
  EXPECT_THROW(sample_ksep(1, 0), std::domain_error);
}

TEST(Samplers, Deterministic) {
  EXPECT_TRUE(sample_biseparable(77).matrix() == sample_biseparable(77).matrix());
  EXPECT_FALSE(sample_biseparable(77).matrix() == sample_biseparable(78).matrix());
}
