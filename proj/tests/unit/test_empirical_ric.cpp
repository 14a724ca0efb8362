#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ricbounds/empirical_ric.hpp"
#include "ricbounds/errors.hpp"
#include "ricbounds/rng.hpp"

using namespace ricb;

namespace {

// Roots of the 2x2 Gram [[a, b], [b, c]].
std::pair<double, double> eig2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {m - r, m + r};
}

// Brute force over all column pairs, written without the library.
std::pair<double, double> brute_pairs(const Eigen::MatrixXd& A) {
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < A.cols(); ++i) {
    for (int j = i + 1; j < A.cols(); ++j) {
      double a = 0, b = 0, c = 0;
      for (int r = 0; r < A.rows(); ++r) {
        a += A(r, i) * A(r, i);
        b += A(r, i) * A(r, j);
        c += A(r, j) * A(r, j);
      }
      const auto [l, h] = eig2(a, b, c);
      lo = std::min(lo, l);
      hi = std::max(hi, h);
    }
  }
  return {lo, hi};
}

}  // namespace

TEST(Sample, VarianceConventionAndDeterminism) {
  const MatrixSample s = sample_gaussian(200, 200, 17);
  const double n = 200.0;
  const double sigma = 1.0 / std::sqrt(n);
  EXPECT_NEAR(s.entries.mean(), 0.0, 4.0 * sigma / std::sqrt(200.0 * 200.0));
  EXPECT_NEAR(s.entries.colwise().squaredNorm().mean(), 1.0, 0.05);
  const MatrixSample t = sample_gaussian(200, 200, 17);
  EXPECT_TRUE(s.entries == t.entries);
  EXPECT_FALSE(s.entries == sample_gaussian(200, 200, 18).entries);
  EXPECT_THROW(sample_gaussian(0, 5, 1), DomainError);
}

TEST(Gram, Isometry) {
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(5, 3);
  const GramEigs e = gram_extreme_eigs(Q);
  EXPECT_NEAR(e.lambda_min, 1.0, 1e-14);
  EXPECT_NEAR(e.lambda_max, 1.0, 1e-14);
}

TEST(Gram, DuplicatedColumns) {
  Eigen::MatrixXd A(3, 2);
  A << 1, 1, 0, 0, 0, 0;
  const GramEigs e = gram_extreme_eigs(A);
  EXPECT_NEAR(e.lambda_min, 0.0, 1e-14);
  EXPECT_NEAR(e.lambda_max, 2.0, 1e-14);
  EXPECT_TRUE(e.rank_deficient);
}

TEST(Gram, TwoByTwoClosedForm) {
  const MatrixSample s = sample_gaussian(4, 2, 5);
  const auto& A = s.entries;
  const auto [lo, hi] = eig2(A.col(0).squaredNorm(), A.col(0).dot(A.col(1)), A.col(1).squaredNorm());
  const GramEigs e = gram_extreme_eigs(A);
  EXPECT_NEAR(e.lambda_min, lo, 1e-10);
  EXPECT_NEAR(e.lambda_max, hi, 1e-10);
}

TEST(Gram, LanczosAgreesWithDenseSolver) {
  for (int k : {65, 120}) {
    const MatrixSample s = sample_gaussian(200, k, 100 + k);
    const Eigen::MatrixXd G = s.entries.transpose() * s.entries;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const GramEigs e = symmetric_extreme_eigs(G);
    EXPECT_NEAR(e.lambda_min, es.eigenvalues()(0), 1e-9);
    EXPECT_NEAR(e.lambda_max, es.eigenvalues()(k - 1), 1e-9);
    const EigenPair p = extreme_eigenpair(G, true);
    EXPECT_NEAR((G * p.vector - p.value * p.vector).norm(), 0.0, 1e-8);
  }
  // Block structure: an invariant subspace must not hide the extremes.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(80, 80);
  for (int i = 0; i < 80; ++i) D(i, i) = 1.0 + i;
  const GramEigs e = symmetric_extreme_eigs(D);
  EXPECT_NEAR(e.lambda_min, 1.0, 1e-9);
  EXPECT_NEAR(e.lambda_max, 80.0, 1e-9);
}

TEST(Gram, TraceAndScaling) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MatrixSample s = sample_gaussian(30, 12, seed);
    const GramEigs e = gram_extreme_eigs(s.entries);
    const double mean = s.entries.squaredNorm() / 12.0;
    EXPECT_LE(e.lambda_min, mean + 1e-12);
    EXPECT_GE(e.lambda_max, mean - 1e-12);
    const GramEigs f = gram_extreme_eigs(2.5 * s.entries);
    EXPECT_NEAR(f.lambda_min, 6.25 * e.lambda_min, 1e-10 * 6.25 * e.lambda_max);
    EXPECT_NEAR(f.lambda_max, 6.25 * e.lambda_max, 1e-10 * 6.25 * e.lambda_max);
  }
}

TEST(Exhaustive, SingleColumnsAndSingleSupport) {
  const MatrixSample s = sample_gaussian(5, 9, 3);
  const ExhaustiveResult r = exhaustive_ric(s, 1);
  const Eigen::VectorXd norms = s.entries.colwise().squaredNorm();
  EXPECT_NEAR(r.U, norms.maxCoeff() - 1.0, 1e-14);
  EXPECT_NEAR(r.L, 1.0 - norms.minCoeff(), 1e-14);
  EXPECT_EQ(r.supports, 9);

  const MatrixSample sq = sample_gaussian(4, 4, 8);
  const ExhaustiveResult all = exhaustive_ric(sq, 4);
  EXPECT_EQ(all.supports, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sq.entries.transpose() * sq.entries);
  EXPECT_NEAR(all.U, es.eigenvalues()(3) - 1.0, 1e-12);
}

TEST(Exhaustive, MatchesIndependentBruteForce) {
  const MatrixSample s = sample_gaussian(6, 10, 2024);
  const ExhaustiveResult r = exhaustive_ric(s, 2);
  const auto [lo, hi] = brute_pairs(s.entries);
  EXPECT_NEAR(r.lambda_min, lo, 1e-12);
  EXPECT_NEAR(r.lambda_max, hi, 1e-12);
  EXPECT_EQ(r.supports, 45);
  EXPECT_EQ(r.argmax_support.size(), 2u);
}

TEST(Exhaustive, PermutationInvariant) {
  const MatrixSample s = sample_gaussian(6, 10, 77);
  MatrixSample p = s;
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[1], perm[6]);
  for (int j = 0; j < 10; ++j) p.entries.col(j) = s.entries.col(perm[j]);
  const ExhaustiveResult a = exhaustive_ric(s, 3);
  const ExhaustiveResult b = exhaustive_ric(p, 3);
  EXPECT_NEAR(a.U, b.U, 1e-12);
  EXPECT_NEAR(a.L, b.L, 1e-12);
}

TEST(Exhaustive, GuardRefusalCarriesCount) {
  const MatrixSample s = sample_gaussian(10, 40, 1);
  try {
    exhaustive_ric(s, 10);
    FAIL();
  } catch (const GuardRefusal& e) {
    EXPECT_NEAR(e.count(), 847660528.0, 1.0);
  }
}

TEST(LocalSearch, NeverExceedsExhaustiveAndUsuallyMatches) {
  const MatrixSample s = sample_gaussian(6, 10, 2024);
  const ExhaustiveResult ex = exhaustive_ric(s, 2);
  LocalSearchOptions o;
  o.restarts = 50;
  const EmpiricalRun up = local_search(s, 2, SearchMode::kUpper, 9, o);
  const EmpiricalRun lo = local_search(s, 2, SearchMode::kLower, 9, o);
  EXPECT_LE(up.estimate, ex.U + 1e-12);
  EXPECT_LE(lo.estimate, ex.L + 1e-12);
  EXPECT_NEAR(up.estimate, ex.U, 1e-9);
  EXPECT_NEAR(lo.estimate, ex.L, 1e-9);
  EXPECT_EQ(up.restart_objectives.size(), 50u);
  EXPECT_TRUE(std::is_sorted(up.best_support.begin(), up.best_support.end()));
}

TEST(LocalSearch, MoreRestartsNeverHurtAndThreadsDoNotMatter) {
  const MatrixSample s = sample_gaussian(20, 60, 4);
  LocalSearchOptions o;
  double prev = -INFINITY;
  for (int r : {1, 3, 10, 30}) {
    o.restarts = r;
    const EmpiricalRun run = local_search(s, 5, SearchMode::kUpper, 1, o);
    EXPECT_GE(run.estimate, prev);
    prev = run.estimate;
  }
  o.restarts = 12;
  const EmpiricalRun a = local_search(s, 5, SearchMode::kLower, 3, o);
  o.threads = 3;
  const EmpiricalRun b = local_search(s, 5, SearchMode::kLower, 3, o);
  EXPECT_EQ(a.restart_objectives, b.restart_objectives);
  EXPECT_EQ(a.best_support, b.best_support);
  EXPECT_EQ(a.swaps_taken, b.swaps_taken);
}

TEST(Sharpness, RatiosAndFlags) {
  AsymptoticBound b;
  b.U = 2.0;
  b.L = 0.9;
  const SharpnessRatio r = sharpness_ratio(b, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(r.ratio_U, 2.0);
  EXPECT_TRUE(r.undefined_L);
  EXPECT_FALSE(r.undefined_U);

  LocalSearchOptions o;
  o.restarts = 4;
  const SharpnessCell c = sharpness_ratio(40, 80, 8, 5, o);
  EXPECT_GE(c.ratio.ratio_U, 1.0);
  EXPECT_GE(c.ratio.ratio_L, 1.0);
}
