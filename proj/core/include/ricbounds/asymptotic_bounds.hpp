#pragma once

#include <optional>
#include <string_view>

#include "ricbounds/rate_functions.hpp"

namespace ricb {

enum class BoundFamily { BT, BCT, CT };

std::string_view to_string(BoundFamily family);
// Accepts "BT", "BCT", "CT" (case-insensitive). Throws DomainError otherwise.
BoundFamily parse_family(std::string_view text);

// Solver tolerances. Exponent residuals are absolute (nats).
inline constexpr double kExponentTolerance = 1e-12;
inline constexpr double kGammaTolerance = 1e-10;
inline constexpr double kLambdaCeiling = 1e9;
// Upper end of the gamma search for the lower bound; psi_min needs gamma < 1.
inline constexpr double kLowerGammaCap = 1.0 - 1e-9;

// Asymptotic RIC bound at (delta, rho).
//
// For BT and BCT, L = 1 - lambda_min and U = lambda_max - 1. lambda_min may be
// far below 1e-16, so it is also carried as log_lambda_min. For BT,
// lower_log_gain = ln lambda_min(gamma_max) - ln lambda_min(rho) is the
// improvement of the optimised group size over gamma = rho; it stays
// resolvable when the two lambda_min values agree to every double digit.
struct AsymptoticBound {
  ProblemShape shape;
  BoundFamily family = BoundFamily::BT;
  double lambda_min = 0.0;
  double log_lambda_min = 0.0;
  double lambda_max = 0.0;
  // Maximiser of lambda_min over gamma (gamma_max); gamma_at_min_gap is
  // gamma_max - rho carried separately.
  std::optional<double> gamma_at_min_opt;
  std::optional<double> gamma_at_min_gap;
  // Minimiser of lambda_max over gamma (gamma_min).
  std::optional<double> gamma_at_max_opt;
  double L = 0.0;
  double U = 0.0;
  std::optional<double> nu_opt;
  double lower_log_gain = 0.0;
  // |lambda (gamma-rho)^2 / gamma^3 - 1| and
  // |gamma^3 lambda / ((1-gamma)^2 (gamma-rho)^2) - 1| at the optimisers.
  std::optional<double> stationarity_max;
  std::optional<double> stationarity_min;
  bool gamma_min_at_boundary = false;
  bool gamma_max_at_boundary = false;
};

struct GammaOptimum {
  double gamma = 0.0;
  double gap = 0.0;      // gamma - rho
  double lambda = 0.0;
  double log_lambda = 0.0;
  double stationarity_residual = 0.0;
  // lower side only: ln lambda(gamma) - ln lambda(rho)
  double log_gain = 0.0;
  // The optimum sits on the end of the admissible gamma interval, where the
  // first-order condition need not hold.
  bool at_boundary = false;
};

// Root of net_exponent_max(lambda, shape) = 0 on lambda >= 1 + gamma.
double solve_lambda_max(const ProblemShape& shape);

// Root of net_exponent_min(lambda, shape) = 0 on (0, 1 - gamma]. Requires
// gamma < 1. The log form never underflows.
double solve_lambda_min(const ProblemShape& shape);
double solve_log_lambda_min(const ProblemShape& shape);

// Minimise lambda_max(delta, rho; gamma) over gamma in [rho, 1/delta].
GammaOptimum optimize_gamma_for_max(const ProblemShape& shape);

// Maximise lambda_min(delta, rho; gamma) over gamma in [rho, min(1, 1/delta)).
GammaOptimum optimize_gamma_for_min(const ProblemShape& shape);

AsymptoticBound bt_bounds(const ProblemShape& shape);
AsymptoticBound bct_bounds(const ProblemShape& shape);
AsymptoticBound ct_bounds(const ProblemShape& shape);
AsymptoticBound bounds_for(BoundFamily family, const ProblemShape& shape);

// U^BT with the monotonicity-in-k fix applied: min over nu in [rho, 1) of
// U^BT(delta, nu). Not part of bt_bounds.
double bt_upper_monotone(const ProblemShape& shape, double* nu_opt = nullptr);

// BCT largest-eigenvalue root at sparsity ratio nu in (0, 1].
double bct_lambda_max(double delta, double nu);

// True when bound `a` has a strictly smaller L than bound `b`, comparing
// lambda_min and, on a tie in double precision, the BT log gain.
bool lower_strictly_tighter(const AsymptoticBound& a, const AsymptoticBound& b);

inline constexpr double kSqrt2Minus1 = 0.41421356237309504880;

struct PhaseTransitionPoint {
  double delta = 0.0;
  double rho_star = 0.0;
  bool feasible = false;          // false: no feasible rho above the margin
  bool monotone_verified = false;  // sampled feasibility agreed with the bisection
};

// Largest rho with max(L, U) < sqrt(2) - 1 for the chosen bound family,
// bisected to 1e-8 absolute.
PhaseTransitionPoint l1_phase_transition(double delta, BoundFamily family);

}  // namespace ricb
