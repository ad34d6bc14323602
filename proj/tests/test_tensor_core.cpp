#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gme/states.hpp"
#include "gme/tensor_core.hpp"
#include "support/oracle.hpp"

using namespace gme;

TEST(LabelIndex, Examples) {
  EXPECT_EQ(label_index({0, 0, 0}), 0u);
  EXPECT_EQ(label_index({1, 0, 1}), 7u);
  EXPECT_EQ(label_index({0, 1, 1}), 4u);
  EXPECT_THROW(label_index({2, 0, 0}), std::domain_error);
  EXPECT_THROW(label_index({0, 0, 3}), std::domain_error);
  EXPECT_THROW(label_index({0, -1, 0}), std::domain_error);
}

TEST(LabelIndex, ExhaustiveBijection) {
  std::set<std::size_t> seen;
  for (int p = 0; p < 2; ++p)
    for (int s = 0; s < 2; ++s)
      for (int e = 0; e < 3; ++e) {
        const BasisLabel l{p, s, e};
        const auto i = label_index(l);
        EXPECT_LT(i, 12u);
        seen.insert(i);
        EXPECT_EQ(BasisLabel::from_index(i), l);
        EXPECT_EQ(BasisLabel::parse(l.str()), l);
      }
  EXPECT_EQ(seen.size(), 12u);
}

TEST(LabelParse, RejectsMalformed) {
  EXPECT_THROW(BasisLabel::parse("10"), std::domain_error);
  EXPECT_THROW(BasisLabel::parse("103"), std::domain_error);
  EXPECT_THROW(BasisLabel::parse("x01"), std::domain_error);
}

TEST(MatrixElement, Examples) {
  const auto ghz = DensityMatrix::from_pure(make_ghz(GHZParams::balanced()));
  EXPECT_NEAR(std::abs(matrix_element(ghz, {0, 1, 0}, {1, 0, 1})), 0.5, 1e-12);
  const auto mixed = DensityMatrix::maximally_mixed();
  EXPECT_NEAR(matrix_element(mixed, {0, 0, 0}, {0, 0, 0}).real(), 1.0 / 12, 1e-15);
  const auto r = oracle::random_density(3);
  for (std::size_t i = 0; i < 12; ++i) {
    const auto l = BasisLabel::from_index(i);
    EXPECT_GE(matrix_element(r, l, l).real(), 0.0);
    EXPECT_NEAR(matrix_element(r, l, l).imag(), 0.0, 1e-15);
  }
}

TEST(SwappedPairPopulation, Examples) {
  const auto ghz = DensityMatrix::from_pure(make_ghz(GHZParams::balanced()));
  EXPECT_NEAR(swapped_pair_population(ghz, {0, 1, 0}, {1, 0, 1}, SubsystemSet{1}), 0.0, 1e-15);
  const auto r = oracle::random_density(5);
  const BasisLabel x{1, 1, 2};
  for (const auto& s : SubsystemSet::all_nonempty()) {
    EXPECT_NEAR(swapped_pair_population(r, x, x, s), r.population(x) * r.population(x), 1e-15);
  }
  const auto mixed = DensityMatrix::maximally_mixed();
  for (const auto& s : SubsystemSet::all_nonempty()) {
    EXPECT_NEAR(swapped_pair_population(mixed, {0, 0, 1}, {1, 1, 2}, s), 1.0 / 144, 1e-15);
  }
}

TEST(TwoCopyOracle, Examples) {
  const auto ghz = DensityMatrix::from_pure(make_ghz(GHZParams::balanced()));
  EXPECT_NEAR(oracle::two_copy_oracle(ghz, {0, 1, 0}, {1, 0, 1}, SubsystemSet{2}), 0.0, 1e-15);

  const auto prod = DensityMatrix::from_pure(PureState::normalized(
      kron(Eigen::Vector2cd(1.0, Complex(0, 2)), Eigen::Vector2cd(0.5, 1.0), Eigen::Vector3cd(1.0, -1.0, 0.3))));
  const BasisLabel x{0, 1, 2};
  const BasisLabel y{1, 0, 0};
  EXPECT_NEAR(oracle::two_copy_oracle(prod, x, y, SubsystemSet{1, 2, 3}), prod.population(y) * prod.population(x),
              1e-14);
}

TEST(TwoCopyOracle, SwapOperatorIsInvolutivePermutation) {
  for (const auto& s : SubsystemSet::all_nonempty()) {
    const auto p = oracle::swap_operator(s);
    EXPECT_TRUE((p * p).isIdentity(1e-15)) << s.str();
    for (int r = 0; r < p.rows(); ++r) {
      int ones = 0;
      for (int c = 0; c < p.cols(); ++c) {
        const Complex v = p(r, c);
        EXPECT_TRUE(v == Complex(0) || v == Complex(1));
        ones += v == Complex(1);
      }
      EXPECT_EQ(ones, 1);
    }
  }
}

TEST(TwoCopyOracle, MatchesClosedForm) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, 11);
  double worst = 0.0;
  for (unsigned seed = 0; seed < 1000; ++seed) {
    const auto rho = oracle::random_density(seed, 1 + static_cast<int>(seed % 12));
    const auto pi_rho = oracle::two_copy(rho);
    for (const auto& s : SubsystemSet::all_nonempty()) {
      const auto pi = oracle::swap_operator(s);
      const Eigen::MatrixXcd m = pi * pi_rho * pi;
      for (int t = 0; t < 20; ++t) {
        const auto x = BasisLabel::from_index(pick(rng));
        const auto y = BasisLabel::from_index(pick(rng));
        const double dense = m(static_cast<int>(label_index(x) * 12 + label_index(y)),
                               static_cast<int>(label_index(x) * 12 + label_index(y)))
                                 .real();
        worst = std::max(worst, std::abs(dense - swapped_pair_population(rho, x, y, s)));
      }
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Kron, Examples) {
  Eigen::Vector2cd p1(0, 1), s0(1, 0), p_plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)), s1(0, 1);
  Eigen::Vector3cd e0(1, 0, 0), e1(0, 1, 0);
  const Vec12 v = kron(p1, s0, e1);
  EXPECT_EQ(v(7), Complex(1));
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);

  const Vec12 w = kron(p_plus, s1, e0);
  EXPECT_NEAR(std::abs(w(3) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w(9) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(w.norm(), 1.0, 1e-15);

  EXPECT_TRUE(kron_operator(Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity(), Eigen::Matrix3cd::Identity())
                  .isIdentity(0));
  EXPECT_THROW(kron(Eigen::Vector3cd::Zero(), s0, e0), std::invalid_argument);
}

TEST(SubsystemSetAndPartition, Basics) {
  EXPECT_EQ(SubsystemSet::all_nonempty().size(), 7u);
  EXPECT_THROW(SubsystemSet{4}, std::domain_error);
  EXPECT_THROW(SubsystemSet::from_mask(0), std::domain_error);
  EXPECT_EQ(Partition::all_with_parts(2).size(), 3u);
  EXPECT_EQ(Partition::all_with_parts(3).front().str(), "1|2|3");
  EXPECT_THROW(Partition({SubsystemSet{1}, SubsystemSet{1, 2}}), std::domain_error);
  EXPECT_THROW(Partition({SubsystemSet{1}, SubsystemSet{2}}), std::domain_error);
}

TEST(DensityMatrixInvariants, RejectsInvalid) {
  Mat12 m = Mat12::Identity() / 12.0;
  m(0, 1) = Complex(0.01, 0);
  EXPECT_THROW(DensityMatrix{m}, InvariantError);  // not Hermitian
  EXPECT_THROW(DensityMatrix{Mat12::Identity()}, InvariantError);
  Mat12 neg = Mat12::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{neg}, InvariantError);
  Vec12 v = Vec12::Zero();
  v(0) = 2.0;
  EXPECT_THROW(PureState{v}, std::invalid_argument);
  EXPECT_NO_THROW(PureState::normalized(v));
}
