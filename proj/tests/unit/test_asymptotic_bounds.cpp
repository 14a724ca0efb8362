#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "ricbounds/asymptotic_bounds.hpp"
#include "ricbounds/errors.hpp"

using namespace ricb;

namespace {

// Independent restatement of the exponents in long double.
long double H(long double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log(p) - (1 - p) * std::log(1 - p);
}

long double net_max(long double l, long double d, long double r, long double g) {
  const long double psi = 0.5L * ((1 + g) * std::log(l) - g * std::log(g) + 1 + g - l);
  return d * psi + H(r * d) - d * g * H(r / g);
}

long double net_min_log(long double t, long double d, long double r, long double g) {
  const long double psi =
      H(g) + 0.5L * ((1 - g) * t + g * std::log(g) + 1 - g - std::exp(t));
  return d * psi + H(r * d) - d * g * H(r / g);
}

long double bisect(const std::function<long double(long double)>& f, long double lo,
                   long double hi) {
  long double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    const long double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

}  // namespace

TEST(LambdaMax, MatchesIndependentBisection) {
  for (double d : {0.2, 0.5, 0.8}) {
    for (double r : {0.1, 0.3, 0.5}) {
      for (double g : {r, 0.5 * (r + 1.0), 1.0}) {
        const double got = solve_lambda_max(ProblemShape::make(d, r, g));
        const long double want =
            bisect([&](long double l) { return net_max(l, d, r, g); }, 1.5L, 64.0L);
        ASSERT_GT(want, 1.0L + g);
        EXPECT_NEAR(got, static_cast<double>(want), 1e-10 * got) << d << " " << r << " " << g;
        EXPECT_GE(got, 1.0 + g);
        EXPECT_LT(std::abs(net_exponent_max(got, ProblemShape::make(d, r, g))), 1e-12);
      }
    }
  }
}

TEST(LambdaMin, MatchesIndependentLogBisection) {
  for (double d : {0.2, 0.5, 0.8}) {
    for (double r : {0.1, 0.3, 0.6}) {
      for (double g : {r, 0.5 * (r + 1.0)}) {
        const ProblemShape s = ProblemShape::make(d, r, g);
        const double got = solve_log_lambda_min(s);
        const long double want = bisect(
            [&](long double t) { return net_min_log(t, d, r, g); }, -200.0L, std::log(1.0L - g));
        EXPECT_NEAR(got, static_cast<double>(want), 1e-9 * std::max(1.0, std::abs(got)));
        EXPECT_LE(std::exp(got), 1.0 - g);
        EXPECT_NEAR(solve_lambda_min(s), std::exp(got), 1e-12);
      }
    }
  }
}

TEST(BT, StrictlyImprovesOnBCT) {
  for (double d : {0.1, 0.4, 0.7, 0.95}) {
    for (double r : {0.05, 0.3, 0.6, 0.95}) {
      const ProblemShape s = ProblemShape::make(d, r);
      const AsymptoticBound bt = bt_bounds(s);
      const AsymptoticBound bct = bct_bounds(s);
      EXPECT_LT(bt.U, bct.U) << d << " " << r;
      EXPECT_TRUE(lower_strictly_tighter(bt, bct)) << d << " " << r;
      EXPECT_GT(*bt.gamma_at_min_gap, 0.0);
      EXPECT_GT(*bt.gamma_at_max_opt, r);
    }
  }
}

TEST(BT, StationarityAtInteriorOptima) {
  const AsymptoticBound b = bt_bounds(ProblemShape::make(0.5, 0.5));
  ASSERT_FALSE(b.gamma_min_at_boundary);
  const double g = *b.gamma_at_max_opt;
  EXPECT_NEAR(b.lambda_max * (g - 0.5) * (g - 0.5) / (g * g * g), 1.0, 1e-6);
  const double gm = *b.gamma_at_min_opt;
  const double gap = *b.gamma_at_min_gap;
  EXPECT_NEAR(gm * gm * gm * b.lambda_min / ((1 - gm) * (1 - gm) * gap * gap), 1.0, 1e-6);
}

TEST(BT, OptimumBeatsGammaEqualRhoAndNeighbours) {
  const ProblemShape s = ProblemShape::make(0.3, 0.4);
  const GammaOptimum up = optimize_gamma_for_max(s);
  for (double g : {0.4, 0.5, 0.7, 1.0, 2.0, 1.0 / 0.3}) {
    EXPECT_LE(up.lambda, solve_lambda_max(s.with_gamma(g)) + 1e-12);
  }
  const GammaOptimum lo = optimize_gamma_for_min(s);
  for (double g : {0.4, 0.45, 0.6, 0.9}) {
    EXPECT_GE(lo.log_lambda, solve_log_lambda_min(s.with_gamma(g)) - 1e-12);
  }
}

TEST(BCT, UpperMatchesFineNuScan) {
  for (double d : {0.1, 0.5, 0.9}) {
    for (double r : {0.2, 0.5, 0.8}) {
      const AsymptoticBound b = bct_bounds(ProblemShape::make(d, r));
      double best = INFINITY;
      for (int i = 0; i <= 10000; ++i) {
        const double nu = r + (1.0 - r) * i / 10000.0;
        best = std::min(best, bct_lambda_max(d, nu));
      }
      EXPECT_LE(b.lambda_max, best + 1e-9);
      EXPECT_GE(b.lambda_max, best - 1e-6);
      EXPECT_GE(*b.nu_opt, r);
      EXPECT_LE(*b.nu_opt, 1.0);
    }
  }
}

TEST(CT, ClosedForm) {
  const double d = 0.5, r = 0.5;
  // H(1/4) = (1/4) ln 4 + (3/4) ln(4/3)
  const double h = 0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0);
  const double t = std::sqrt(2.0 * h / d);
  const AsymptoticBound b = ct_bounds(ProblemShape::make(d, r));
  const double top = 1.0 + std::sqrt(r) + t;
  EXPECT_NEAR(b.U, top * top - 1.0, 1e-14);
  EXPECT_EQ(b.L, 1.0);  // 1 - sqrt(rho) - t < 0
  const AsymptoticBound small = ct_bounds(ProblemShape::make(0.5, 0.001));
  const double t2 = std::sqrt(2.0 * (-0.0005 * std::log(0.0005) - 0.9995 * std::log(0.9995)) / 0.5);
  const double bot = 1.0 - std::sqrt(0.001) - t2;
  EXPECT_NEAR(small.L, 1.0 - bot * bot, 1e-14);
}

TEST(Phase, BTAboveBCTAndOrderOfMagnitude) {
  for (double d : {0.1, 0.5, 0.9}) {
    const auto bt = l1_phase_transition(d, BoundFamily::BT);
    const auto bct = l1_phase_transition(d, BoundFamily::BCT);
    ASSERT_TRUE(bt.feasible);
    ASSERT_TRUE(bct.feasible);
    EXPECT_TRUE(bt.monotone_verified);
    EXPECT_GE(bt.rho_star, bct.rho_star);
    const AsymptoticBound at = bt_bounds(ProblemShape::make(d, bt.rho_star * 0.999));
    EXPECT_LT(std::max(at.L, at.U), kSqrt2Minus1);
  }
  const double r = l1_phase_transition(0.5, BoundFamily::BT).rho_star;
  EXPECT_GT(r, 1e-4);
  EXPECT_LT(r, 1e-2);
}

TEST(Families, ParseAndPrint) {
  EXPECT_EQ(parse_family("bct"), BoundFamily::BCT);
  EXPECT_EQ(to_string(BoundFamily::CT), "CT");
  EXPECT_THROW(parse_family("XY"), DomainError);
}

TEST(BT, MonotoneUpperIsNoWorse) {
  const ProblemShape s = ProblemShape::make(0.5, 0.3);
  double nu = 0.0;
  EXPECT_LE(bt_upper_monotone(s, &nu), bt_bounds(s).U + 1e-12);
  EXPECT_GE(nu, 0.3);
}
