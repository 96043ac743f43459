#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "polyrec/error.hpp"
#include "polyrec/lattice_dioph.hpp"
#include "polyrec/random.hpp"

using namespace polyrec;

namespace {

const double kTheta0 = 1.0864348112133080;  // sum over Z of exp(-pi m^2)

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

ProductLattice integers(double R = 1.0) { return ProductLattice::scaled_integer(R, {1}); }

AlphaVector one_block(double a) { return AlphaVector{{vec({a})}}; }

// Random well-conditioned block lattice with dims drawn from {0,1,2,3}, total <= 3.
ProductLattice random_lattice(Rng& rng) {
  std::vector<Eigen::MatrixXd> bases;
  const std::size_t k = 1 + rng.below(2);
  std::size_t left = 3;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t d = j + 1 == k ? 1 + rng.below(left) : rng.below(left);
    left -= d;
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) *
                        rng.uniform(0.6, 1.6);
    for (Eigen::Index r = 0; r < B.rows(); ++r)
      for (Eigen::Index c = 0; c < B.cols(); ++c) B(r, c) += rng.uniform(-0.3, 0.3);
    bases.push_back(B);
  }
  return ProductLattice(bases);
}

AlphaVector random_point(const ProductLattice& L, Rng& rng, double spread = 3.0) {
  AlphaVector x = AlphaVector::zeros(L);
  for (auto& b : x.blocks)
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-spread, spread);
  return x;
}

// Direct sum over integer coefficient boxes of every block, independent of the
// library's enumeration and tail bound.
double brute_theta(const ProductLattice& L, double t, const AlphaVector& x, int reach) {
  double total = 1.0;
  for (std::size_t j = 0; j < L.block_count(); ++j) {
    const auto& B = L.blocks()[j].basis;
    const auto d = static_cast<std::size_t>(B.rows());
    if (d == 0) continue;
    // centre the box on the coordinates of x
    const Eigen::VectorXd centre = B.transpose().inverse() * x.blocks[j];
    std::vector<int> m(d, -reach);
    double block = 0;
    while (true) {
      Eigen::VectorXd c(static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i) c[static_cast<Eigen::Index>(i)] = std::round(centre[static_cast<Eigen::Index>(i)]) + m[i];
      const Eigen::VectorXd p = B.transpose() * c;
      block += std::exp(-oracle::pi * t * (x.blocks[j] - p).squaredNorm());
      std::size_t i = d;
      while (i > 0 && m[i - 1] == reach) m[--i] = -reach;
      if (i == 0) break;
      ++m[i - 1];
    }
    total *= block;
  }
  return total;
}

}  // namespace

TEST(Lattice, IntegerThetaExamples) {
  EXPECT_NEAR(theta(integers(), 1.0, one_block(0.0), ThetaSide::kDirect), kTheta0, 1e-12);
  EXPECT_NEAR(theta(integers(), 1.0, one_block(0.0), ThetaSide::kDual), kTheta0, 1e-12);
  EXPECT_NEAR(theta(integers(2.0), 1.0, one_block(1.0), ThetaSide::kDirect), 2 * std::exp(-oracle::pi) + 2 * std::exp(-9 * oracle::pi), 1e-12);
  EXPECT_NEAR(theta(integers(2.0), 1.0, one_block(1.0), ThetaSide::kDual), 0.0864278365285956, 1e-10);
  EXPECT_NEAR(theta(integers(), 40.0, one_block(0.0), ThetaSide::kDirect), 1.0, 1e-40);
}

TEST(Lattice, RejectsBadArguments) {
  EXPECT_THROW(theta(integers(), 0.0, one_block(0.0), ThetaSide::kDirect), Error);
  Eigen::MatrixXd singular(2, 2);
  singular << 1, 2, 2, 4;
  EXPECT_THROW(ProductLattice({singular}), Error);
}

TEST(Lattice, DualOfDualAndDeterminant) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto L = random_lattice(rng);
    const auto back = L.dual().dual();
    double det = 1;
    for (std::size_t j = 0; j < L.block_count(); ++j) {
      if (L.blocks()[j].dim() == 0) continue;
      EXPECT_LE((back.blocks()[j].basis - L.blocks()[j].basis).cwiseAbs().maxCoeff() + 0.0, 1e-10);
      if (L.blocks()[j].dim()) det *= std::abs(L.blocks()[j].basis.determinant());
    }
    EXPECT_NEAR(L.determinant(), det, 1e-12 * det);
    EXPECT_NEAR(L.determinant() * L.dual().determinant(), 1.0, 1e-12);
  }
}

TEST(Lattice, ScaledIntegerMatchesDirectSummation) {
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    const double R = rng.uniform(0.5, 3.0);
    const std::size_t d = 1 + rng.below(3);
    const auto L = ProductLattice::scaled_integer(R, {d});
    const double t = rng.uniform(0.5, 2.0);
    AlphaVector x{{Eigen::VectorXd(static_cast<Eigen::Index>(d))}};
    std::vector<double> xs(d);
    for (std::size_t a = 0; a < d; ++a) x.blocks[0][static_cast<Eigen::Index>(a)] = xs[a] = rng.uniform(-2, 2);
    const double want = oracle::theta_scaled_integer(R, xs, t, 12);
    EXPECT_NEAR(theta(L, t, x, ThetaSide::kDirect) / want, 1.0, 1e-10);
  }
}

TEST(Lattice, PoissonSummationOnRandomLattices) {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto L = random_lattice(rng);
    const double t = rng.uniform(0.5, 2.0);
    const auto x = random_point(L, rng);
    const double direct = theta(L, t, x, ThetaSide::kDirect);
    const double dual = theta(L, t, x, ThetaSide::kDual);
    ASSERT_NEAR(dual / direct, 1.0, 1e-8) << "case " << i;
    ASSERT_NEAR(direct / brute_theta(L, t, x, 14), 1.0, 1e-10) << "case " << i;
  }
}

TEST(Lattice, TranslationByLatticeVectors) {
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    const auto L = random_lattice(rng);
    const auto x = random_point(L, rng, 1.0);
    auto y = x;
    for (std::size_t j = 0; j < L.block_count(); ++j) {
      const auto& B = L.blocks()[j].basis;
      Eigen::VectorXd m(B.rows());
      for (Eigen::Index r = 0; r < m.size(); ++r) m[r] = static_cast<double>(rng.between(-4, 4));
      y.blocks[j] += B.transpose() * m;
    }
    EXPECT_NEAR(theta(L, 1.0, x, ThetaSide::kDirect), theta(L, 1.0, y, ThetaSide::kDirect), 1e-10);
  }
}

TEST(ALambda, TwoSidedOnRandomLattices) {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto L = random_lattice(rng);
    const auto a = a_lambda(L);
    EXPECT_LE(a.relative_gap(), 1e-8);
    EXPECT_NEAR(a.direct, brute_theta(L, 1.0, AlphaVector::zeros(L), 14) * L.determinant(), 1e-10 * a.direct);
  }
}

TEST(ALambda, Examples) {
  EXPECT_NEAR(a_lambda(integers()).value(), kTheta0, 1e-12);
  for (double R : {0.5, 1.0, 2.0, 3.0, 5.0, 10.0})
    for (std::size_t d : {1, 2, 3, 4}) {
      if (R == 10.0 && d == 4) continue;
      const double a = a_lambda(ProductLattice::scaled_integer(R, {d})).value();
      EXPECT_LE(a, std::pow(10 * R, static_cast<double>(d)));
      if (R >= 3) {
        EXPECT_NEAR(a / std::pow(R, static_cast<double>(d)), 1.0, 1e-10);
      }
    }
  // the dual of (10Z)^4 holds about 10^7 points in the tail radius
  const auto big = ProductLattice::scaled_integer(10.0, {4});
  EXPECT_THROW(a_lambda(big), Error);
  LatticeOptions wide;
  wide.point_budget = 60'000'000;
  EXPECT_NEAR(a_lambda(big, 1e-8, wide).value(), 1e4, 1e-6);
  // a fine lattice: both sides are about 1
  const auto fine = a_lambda(ProductLattice::scaled_integer(1.0 / 20, {1}));
  EXPECT_NEAR(fine.direct, 1.0, 1e-10);
  EXPECT_NEAR(fine.dual, 1.0, 1e-10);
}

TEST(FLattice, ZeroAlphaGivesALambda) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto L = random_lattice(rng);
    const double a = a_lambda(L).value();
    for (std::int64_t N : {1, 7, 50}) {
      const auto f = f_lattice(L, AlphaVector::zeros(L), N, true);
      EXPECT_NEAR(f.value / a, 1.0, 1e-8);
      EXPECT_NEAR(*f.dual_value / a, 1.0, 1e-8);
    }
  }
}

TEST(FLattice, TwoTermAverage) {
  const auto f = f_lattice(integers(), one_block(0.5), 2, true);
  const double half = oracle::theta_scaled_integer(1.0, {0.5}, 1.0, 20);
  const double zero = oracle::theta_scaled_integer(1.0, {0.0}, 1.0, 20);
  EXPECT_NEAR(f.value, (half + zero) / 2, 1e-12);
  EXPECT_NEAR(*f.dual_value, f.value, 1e-7);
}

TEST(FLattice, DualAgreesAndFirstTermBounds) {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto L = random_lattice(rng);
    const auto alpha = random_point(L, rng, 1.0);
    const std::int64_t N = 1 + rng.below(60);
    const auto f = f_lattice(L, alpha, N, true);
    EXPECT_NEAR(*f.dual_value / f.value, 1.0, 1e-7);
    const auto orbit = theta_orbit(L, alpha, N);
    EXPECT_GE(f.value, L.determinant() * orbit[0] / static_cast<double>(N) * (1 - 1e-12));
    double mean = 0;
    for (double v : orbit) mean += v;
    EXPECT_NEAR(f.value, L.determinant() * mean / static_cast<double>(N), 1e-10 * f.value);
  }
}

TEST(Approx, RationalPeriodicity) {
  const auto fam = PolynomialFamily::parse("1");
  for (std::int64_t q : {2, 3, 7, 11}) {
    const auto r = approx_oracle(fam, std::vector<Rational>{Rational(q - 1, q)}, 0.49 / static_cast<double>(q), 1000);
    std::vector<std::int64_t> want;
    for (std::int64_t n = q; n <= 1000; n += q) want.push_back(n);
    EXPECT_EQ(r.good, want);
  }
}

TEST(Approx, HalfUnderSquares) {
  const auto r = approx_oracle(PolynomialFamily::parse("0,1"), std::vector<Rational>{Rational(1, 2)}, 0.25, 100);
  std::vector<std::int64_t> want;
  for (std::int64_t n = 2; n <= 100; n += 2) want.push_back(n);
  EXPECT_EQ(r.good, want);
  EXPECT_DOUBLE_EQ(r.density, 0.5);
}

TEST(Approx, PowerFormAgainstFloatingScan) {
  AlphaVector alpha{{Eigen::VectorXd(1), vec({std::sqrt(2.0)})}};
  alpha.blocks[0][0] = 0.0;
  const auto r = approx_oracle_power(alpha, 0.1, 10000);
  EXPECT_FALSE(r.good.empty());
  std::vector<std::int64_t> want;
  for (std::int64_t n = 1; n <= 10000; ++n) {
    const long double v = static_cast<long double>(n) * n * std::sqrt(2.0L);
    if (std::abs(v - std::nearbyint(v)) < 0.1L) want.push_back(n);
  }
  // the two evaluations may only disagree at points within rounding of the boundary
  std::set<std::int64_t> a(r.good.begin(), r.good.end()), b(want.begin(), want.end());
  std::size_t diff = 0;
  for (auto n : a) diff += !b.count(n);
  for (auto n : b) diff += !a.count(n);
  EXPECT_LE(diff, 2u);
  EXPECT_GT(r.reference_density, 0.0);
}

TEST(Approx, MonotoneInEps) {
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto fam = PolynomialFamily::parse(i % 2 ? "1;0,1" : "0,0,2");
    const std::vector<Rational> th{Rational(static_cast<long long>(rng.between(1, 996)), 997),
                                   Rational(static_cast<long long>(rng.between(1, 100)), 101)};
    std::vector<std::int64_t> prev;
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.5}) {
      const auto r = approx_oracle(fam, th, eps, 2000);
      EXPECT_TRUE(std::includes(r.good.begin(), r.good.end(), prev.begin(), prev.end()));
      prev = r.good;
    }
  }
}

TEST(Approx, ExactOnRationalBoundaries) {
  // ||n/4|| hits exactly 1/4 at odd n: a strict inequality rejects them all
  const auto r = approx_oracle(PolynomialFamily::parse("1"), std::vector<Rational>{Rational(1, 4)}, 0.25, 40);
  for (auto n : r.good) EXPECT_EQ(n % 2, 0);
  EXPECT_EQ(r.good.size(), 10u);
  EXPECT_THROW(approx_oracle(PolynomialFamily::parse("1"), std::vector<Rational>{Rational(1, 4)}, 0.6, 40), Error);
}

TEST(AverageInequalities, Examples) {
  const auto a = average_inequalities(integers(), AlphaVector{{vec({0.0})}}, 50, 0.5, 3);
  EXPECT_TRUE(a.dilation_holds);
  EXPECT_NEAR(a.F_N, kTheta0, 1e-10);
  const auto b = average_inequalities(integers(), one_block(std::sqrt(2.0)), 100, 0.5, 5);
  EXPECT_EQ(b.cN, 50);
  EXPECT_EQ(b.Nq, 20);
  EXPECT_TRUE(b.dilation_holds);
  EXPECT_TRUE(b.subsample_holds);
  EXPECT_GE(b.F_N, 0.25 * b.F_cN);
  EXPECT_GE(b.F_N, 0.1 * b.F_Nq);
  EXPECT_THROW(average_inequalities(integers(), one_block(0.1), 20, 0.5, 3), Error);
  EXPECT_THROW(average_inequalities(integers(), one_block(0.1), 50, 0.05, 3), Error);
  EXPECT_THROW(average_inequalities(integers(), one_block(0.1), 50, 0.5, 26), Error);
}

TEST(AverageInequalities, RandomizedInstancesHold) {
  Rng rng(314);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 1 + rng.below(2);
    std::vector<std::size_t> dims(k);
    for (auto& d : dims) d = 1 + rng.below(2);
    const auto L = ProductLattice::scaled_integer(rng.uniform(0.5, 3.0), dims);
    const auto alpha = random_point(L, rng, 1.0);
    const std::int64_t N = rng.between(21, 500);
    const double c = rng.uniform(0.11, 0.99);
    const std::int64_t q = rng.between(1, N / 2);
    const auto r = average_inequalities(L, alpha, N, c, q);
    ASSERT_TRUE(r.dilation_holds) << "case " << i;
    ASSERT_TRUE(r.subsample_holds) << "case " << i;
  }
}

TEST(AverageInequalities, PerturbationIsReported) {
  auto beta = one_block(std::sqrt(2.0) + 1e-5);
  const auto r = average_inequalities(integers(), one_block(std::sqrt(2.0)), 100, 0.5, 5, beta, 0.5);
  ASSERT_TRUE(r.perturbation_ratio.has_value());
  EXPECT_GT(*r.perturbation_ratio, 0.0);
  EXPECT_TRUE(*r.perturbation_in_range);
}

TEST(Schmidt, ZeroAlphaIsFirstAlternative) {
  const auto r = schmidt_scan(integers(), one_block(0.0), 100, 10, 3, 1.0);
  EXPECT_TRUE(r.alternative_one);
  EXPECT_NEAR(r.F, kTheta0, 1e-10);
}

TEST(Schmidt, NearThird) {
  const auto r = schmidt_scan(integers(), one_block(1.0 / 3 + 1e-9), 1000, 100, 3, 1.0);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.q, 3);
  EXPECT_EQ(r.xi_coords[0], std::vector<std::int64_t>{1});
  EXPECT_NEAR(r.quality, 1000 * 3e-9, 1e-9);
  EXPECT_TRUE(r.beats_threshold);
}

TEST(Schmidt, GoldenRatioMatchesExhaustiveMinimum) {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const auto r = schmidt_scan(integers(), one_block(phi), 50, 100, 3, 1.0);
  std::int64_t best_q = 0;
  double best = 1;
  for (std::int64_t q = 1; q <= 100; ++q)
    if (oracle::nearest(q * phi) < best) best = oracle::nearest(q * phi), best_q = q;
  EXPECT_EQ(r.q, best_q);
  EXPECT_TRUE(r.q == 34 || r.q == 55 || r.q == 89);
  EXPECT_NEAR(r.quality, 50 * best, 1e-9);
}

TEST(Schmidt, PrimitiveDualVectorsInTwoDimensions) {
  const auto L = ProductLattice::scaled_integer(1.0, {2});
  AlphaVector alpha{{vec({0.5, 1.0 / 3})}};
  const auto r = schmidt_scan(L, alpha, 10, 6, 2.5, 1.0);
  ASSERT_TRUE(r.found);
  // q = 1 already has xi = (2, ...) excluded; (0,1) gives 1/3 and (1,0) gives 1/2; q = 6 clears both
  EXPECT_EQ(r.q, 2);
  std::int64_t g = 0;
  for (auto c : r.xi_coords[0]) g = std::gcd(g, c);
  EXPECT_EQ(g, 1);
  EXPECT_NEAR(r.quality, 0.0, 1e-12);
}

TEST(WeylDenominator, Examples) {
  const auto zero = weyl_denominator({0.0, 0.0}, 50, 0.5, 10, 1.0);
  EXPECT_NEAR(zero.abs_S, 1.0, 1e-12);
  EXPECT_EQ(zero.q, 1);
  const auto half = weyl_denominator({0.5}, 100, 0.5, 10, 1.0);
  EXPECT_NEAR(half.abs_S, 0.0, 1e-12);
  EXPECT_EQ(half.q, 2);
  const auto quarter = weyl_denominator({0.0, 0.25}, 100, 0.1, 1000, 1.0);
  oracle::cd S = 0;
  for (int n = 1; n <= 100; ++n) S += std::polar(1.0, 2 * oracle::pi * std::fmod(n * n / 4.0, 1.0));
  EXPECT_NEAR(quarter.abs_S, std::abs(S) / 100, 1e-12);
  EXPECT_EQ(quarter.q, 4);
}

TEST(WeylDenominator, ThresholdsAndNone) {
  const auto r = weyl_denominator({std::sqrt(2.0)}, 100, 0.5, 5, 1.0, {1e-6});
  EXPECT_FALSE(r.q.has_value());
  ASSERT_EQ(r.thresholds.size(), 1u);
  const auto d = weyl_denominator({0.3, 0.7}, 10, 0.5, 100, 2.0);
  EXPECT_NEAR(d.thresholds[0], 4.0 / 10, 1e-12);
  EXPECT_NEAR(d.thresholds[1], 4.0 / 100, 1e-12);
  EXPECT_EQ(d.q, 10);
}
