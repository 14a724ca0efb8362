#include "ricbounds/asymptotic_bounds.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "ricbounds/errors.hpp"

namespace ricb {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;
constexpr int kMaxBisection = 4000;
// ln(lambda) floor for the lower root search.
constexpr double kLogLambdaFloor = -1e5;

struct Minimum {
  double x;
  double fx;
};

// Golden-section minimisation of a unimodal f on [a, b]; stops when the
// bracket is narrower than tol. Returns the best point evaluated.
Minimum golden_section(const std::function<double(double)>& f, double a, double b,
                       double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  Minimum best = fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      if (c == a || c == d) break;
      fc = f(c);
      if (fc < best.fx) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      if (d == b || d == c) break;
      fd = f(d);
      if (fd < best.fx) best = {d, fd};
    }
  }
  return best;
}

// Bisection for an increasing-then-negative sign pattern: f(lo) > 0 >= f(hi)
// or f(lo) < 0 <= f(hi). Runs to adjacent doubles and returns the endpoint
// with the smaller residual.
struct Root {
  double x;
  double fx;
};

Root bisect(const std::function<double(double)>& f, double lo, double hi, double flo) {
  const bool lo_positive = flo > 0.0;
  double fhi = f(hi);
  for (int i = 0; i < kMaxBisection; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0};
    if ((fm > 0.0) == lo_positive) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? Root{lo, flo} : Root{hi, fhi};
}

std::string describe(const char* what, double delta, double rho, double gamma) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at delta=" << delta << " rho=" << rho << " gamma=" << gamma;
  return os.str();
}

// Root of a function decreasing through zero on [foot, inf).
double solve_upper_root(const std::function<double(double)>& exponent, double foot,
                        double delta, double rho, double gamma) {
  const double f_foot = exponent(foot);
  if (std::abs(f_foot) < kExponentTolerance) return foot;
  if (f_foot < 0.0) {
    throw ConstraintError(describe("net exponent negative at lambda = 1+gamma", delta,
                                   rho, gamma));
  }
  double lo = foot;
  double hi = 2.0 * foot;
  while (exponent(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kLambdaCeiling) {
      throw SolverError(describe("no sign change below lambda = 1e9", delta, rho, gamma));
    }
  }
  const Root r = bisect(exponent, lo, hi, exponent(lo));
  if (!(std::abs(r.fx) < kExponentTolerance)) {
    throw SolverError(describe("lambda_max residual above tolerance", delta, rho, gamma));
  }
  return r.x;
}

// Root in u = ln(lambda) of a function increasing through zero on (-inf, top].
double solve_lower_log_root(const std::function<double(double)>& exponent, double top,
                            double delta, double rho, double gamma) {
  const double f_top = exponent(top);
  if (std::abs(f_top) < kExponentTolerance) return top;
  if (f_top < 0.0) {
    throw ConstraintError(describe("net exponent negative at lambda = 1-gamma", delta,
                                   rho, gamma));
  }
  double hi = top;
  double step = 1.0;
  double lo = top - step;
  while (exponent(lo) > 0.0) {
    hi = lo;
    step *= 2.0;
    lo = top - step;
    if (lo < kLogLambdaFloor) {
      throw SolverError(describe("no sign change above ln(lambda) = -1e5", delta, rho, gamma));
    }
  }
  const Root r = bisect(exponent, hi, lo, exponent(hi));
  if (!(std::abs(r.fx) < kExponentTolerance)) {
    throw SolverError(describe("lambda_min residual above tolerance", delta, rho, gamma));
  }
  return r.x;
}

// psi_min(lambda, rho + gap) - psi_min(lambda, rho), free of cancellation.
double psi_min_gap_difference(double rho, double gap, double log_lambda) {
  const double gamma = rho + gap;
  const double a = gap * std::log(gamma) + rho * std::log1p(gap / rho);
  const double b = -gap * std::log((1.0 - rho) - gap) + (1.0 - rho) * std::log1p(-gap / (1.0 - rho));
  return -0.5 * a - b - 0.5 * gap * log_lambda - 0.5 * gap;
}

// Solves for x = ln lambda_min(rho + gap) - ln lambda_min(rho) given the
// gamma = rho root log_lambda0. The equation is the difference of the two
// net exponents divided by delta, so x is resolved relative to itself.
double lower_log_gain(double rho, double gap, double log_lambda0) {
  if (gap == 0.0) return 0.0;
  const double lambda0 = std::exp(log_lambda0);
  auto f = [&](double x) {
    return 0.5 * ((1.0 - rho) * x - lambda0 * std::expm1(x)) +
           psi_min_gap_difference(rho, gap, log_lambda0 + x) -
           group_entropy_from_gap(rho, gap);
  };
  const double x_top = std::log((1.0 - rho) - gap) - log_lambda0;
  const double f_top = f(x_top);
  if (f_top <= 0.0) return x_top;
  double hi = x_top;
  double step = 1.0;
  double lo = std::min(x_top, 0.0) - step;
  while (f(lo) > 0.0) {
    hi = lo;
    step *= 2.0;
    lo = std::min(x_top, 0.0) - step;
    if (lo < kLogLambdaFloor) {
      throw SolverError(describe("lower gain bracket failed", 0.0, rho, rho + gap));
    }
  }
  return bisect(f, hi, lo, f(hi)).x;
}

double upper_stationarity(double lambda, double rho, double gamma) {
  return std::abs(lambda * (gamma - rho) * (gamma - rho) / (gamma * gamma * gamma) - 1.0);
}

double lower_stationarity(double log_lambda, double gamma, double gap) {
  const double log_ratio = 3.0 * std::log(gamma) + log_lambda -
                           2.0 * std::log(1.0 - gamma) - 2.0 * std::log(gap);
  return std::abs(std::expm1(log_ratio));
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(BoundFamily family) {
  switch (family) {
    case BoundFamily::BT: return "BT";
    case BoundFamily::BCT: return "BCT";
    case BoundFamily::CT: return "CT";
  }
  return "?";
}

BoundFamily parse_family(std::string_view text) {
  const std::string t = upper(text);
  if (t == "BT") return BoundFamily::BT;
  if (t == "BCT") return BoundFamily::BCT;
  if (t == "CT") return BoundFamily::CT;
  throw DomainError("invariant violated: family in {BT, BCT, CT} (got " + std::string(text) + ")");
}

double solve_lambda_max(const ProblemShape& shape) {
  shape.validate();
  const double gamma = shape.gamma_or_throw();
  return solve_upper_root([&](double l) { return net_exponent_max(l, shape); }, 1.0 + gamma,
                          shape.delta, shape.rho, gamma);
}

double solve_log_lambda_min(const ProblemShape& shape) {
  shape.validate();
  const double gamma = shape.gamma_or_throw();
  if (!(gamma < 1.0)) {
    throw DomainError(describe("invariant violated: gamma < 1 for lambda_min", shape.delta,
                               shape.rho, gamma));
  }
  return solve_lower_log_root([&](double u) { return net_exponent_min_log(u, shape); },
                              std::log1p(-gamma), shape.delta, shape.rho, gamma);
}

double solve_lambda_min(const ProblemShape& shape) {
  return std::exp(solve_log_lambda_min(shape));
}

double bct_lambda_max(double delta, double nu) {
  if (!(nu > 0.0 && nu <= 1.0)) {
    throw DomainError(describe("invariant violated: 0 < nu <= 1", delta, nu, nu));
  }
  const double comb = shannon_entropy(nu * delta);
  return solve_upper_root([&](double l) { return delta * psi_max(l, nu) + comb; }, 1.0 + nu,
                          delta, nu, nu);
}

GammaOptimum optimize_gamma_for_max(const ProblemShape& shape) {
  const ProblemShape base = ProblemShape::make(shape.delta, shape.rho);
  const double rho = base.rho;
  auto objective = [&](double gamma) {
    return solve_lambda_max(ProblemShape{base.delta, rho, gamma});
  };
  const Minimum m = golden_section(objective, rho, 1.0 / base.delta, kGammaTolerance);
  GammaOptimum out;
  out.gamma = m.x;
  out.gap = m.x - rho;
  out.lambda = m.fx;
  out.log_lambda = std::log(m.fx);
  out.stationarity_residual = upper_stationarity(m.fx, rho, m.x);
  out.at_boundary = (1.0 / base.delta - m.x) < 10.0 * kGammaTolerance;
  return out;
}

GammaOptimum optimize_gamma_for_min(const ProblemShape& shape) {
  const ProblemShape base = ProblemShape::make(shape.delta, shape.rho);
  const double rho = base.rho;
  const double log_lambda0 = solve_log_lambda_min(base.with_gamma(rho));
  const double cap = std::min(kLowerGammaCap, 1.0 / base.delta);
  const double t_hi = std::log(cap - rho);
  // Stationary gap is about sqrt(rho^3 lambda) / (1 - rho); search a wide
  // window in t = ln(gamma - rho) around it.
  const double t_guess = 0.5 * (3.0 * std::log(rho) + log_lambda0) - std::log1p(-rho);
  const double t_lo = std::max(std::min(t_guess, t_hi) - 40.0, -700.0);
  auto objective = [&](double t) { return -lower_log_gain(rho, std::exp(t), log_lambda0); };
  const Minimum m = golden_section(objective, t_lo, t_hi, kGammaTolerance);

  GammaOptimum out;
  out.gap = std::exp(m.x);
  out.gamma = rho + out.gap;
  out.log_gain = -m.fx;
  out.log_lambda = log_lambda0 + out.log_gain;
  out.lambda = std::exp(out.log_lambda);
  out.stationarity_residual = lower_stationarity(out.log_lambda, out.gamma, out.gap);
  out.at_boundary = (t_hi - m.x) < 10.0 * kGammaTolerance || (m.x - t_lo) < 10.0 * kGammaTolerance;
  return out;
}

AsymptoticBound bt_bounds(const ProblemShape& shape) {
  const ProblemShape base = ProblemShape::make(shape.delta, shape.rho);
  const GammaOptimum up = optimize_gamma_for_max(base);
  const GammaOptimum lo = optimize_gamma_for_min(base);
  AsymptoticBound b;
  b.shape = base;
  b.family = BoundFamily::BT;
  b.lambda_max = up.lambda;
  b.U = up.lambda - 1.0;
  b.gamma_at_max_opt = up.gamma;
  b.stationarity_max = up.stationarity_residual;
  b.gamma_min_at_boundary = up.at_boundary;
  b.lambda_min = lo.lambda;
  b.log_lambda_min = lo.log_lambda;
  b.L = 1.0 - lo.lambda;
  b.gamma_at_min_opt = lo.gamma;
  b.gamma_at_min_gap = lo.gap;
  b.lower_log_gain = lo.log_gain;
  b.stationarity_min = lo.stationarity_residual;
  b.gamma_max_at_boundary = lo.at_boundary;
  return b;
}

AsymptoticBound bct_bounds(const ProblemShape& shape) {
  const ProblemShape base = ProblemShape::make(shape.delta, shape.rho);
  const double delta = base.delta;
  const double rho = base.rho;

  AsymptoticBound b;
  b.shape = base;
  b.family = BoundFamily::BCT;
  b.log_lambda_min = solve_log_lambda_min(base.with_gamma(rho));
  b.lambda_min = std::exp(b.log_lambda_min);
  b.L = 1.0 - b.lambda_min;

  // U: minimise the gamma = nu root over nu in [rho, 1]. Coarse scan, then
  // golden-section inside the best cell; endpoints compete directly.
  auto f = [&](double nu) { return bct_lambda_max(delta, nu); };
  constexpr int kScan = 32;
  std::array<double, kScan + 1> values{};
  int best = 0;
  for (int i = 0; i <= kScan; ++i) {
    values[i] = f(rho + (1.0 - rho) * i / kScan);
    if (values[i] < values[best]) best = i;
  }
  const double lo = rho + (1.0 - rho) * std::max(best - 1, 0) / kScan;
  const double hi = rho + (1.0 - rho) * std::min(best + 1, kScan) / kScan;
  Minimum m = golden_section(f, lo, hi, kGammaTolerance);
  if (values[0] <= m.fx) m = {rho, values[0]};
  if (values[kScan] < m.fx) m = {1.0, values[kScan]};

  b.lambda_max = m.fx;
  b.U = m.fx - 1.0;
  b.nu_opt = m.x;
  return b;
}

AsymptoticBound ct_bounds(const ProblemShape& shape) {
  const ProblemShape base = ProblemShape::make(shape.delta, shape.rho);
  const double s = std::sqrt(2.0 * shannon_entropy(base.delta * base.rho) / base.delta);
  const double sr = std::sqrt(base.rho);
  const double top = 1.0 + sr + s;
  const double bottom = std::max(0.0, 1.0 - sr - s);
  AsymptoticBound b;
  b.shape = base;
  b.family = BoundFamily::CT;
  b.lambda_max = top * top;
  b.U = b.lambda_max - 1.0;
  b.lambda_min = bottom * bottom;
  b.log_lambda_min = b.lambda_min > 0.0 ? std::log(b.lambda_min)
                                        : -std::numeric_limits<double>::infinity();
  b.L = 1.0 - b.lambda_min;
  return b;
}

AsymptoticBound bounds_for(BoundFamily family, const ProblemShape& shape) {
  switch (family) {
    case BoundFamily::BT: return bt_bounds(shape);
    case BoundFamily::BCT: return bct_bounds(shape);
    case BoundFamily::CT: return ct_bounds(shape);
  }
  throw DomainError("unknown bound family");
}

double bt_upper_monotone(const ProblemShape& shape, double* nu_opt) {
  const ProblemShape base = ProblemShape::make(shape.delta, shape.rho);
  const double nu_hi = 1.0 - ProblemShape::kBoundaryMargin;
  auto f = [&](double nu) {
    return optimize_gamma_for_max(ProblemShape::make(base.delta, nu)).lambda;
  };
  const double at_rho = f(base.rho);
  Minimum m = golden_section(f, base.rho, nu_hi, 1e-8);
  if (at_rho <= m.fx) m = {base.rho, at_rho};
  if (nu_opt) *nu_opt = m.x;
  return m.fx - 1.0;
}

bool lower_strictly_tighter(const AsymptoticBound& a, const AsymptoticBound& b) {
  if (a.log_lambda_min != b.log_lambda_min) return a.log_lambda_min > b.log_lambda_min;
  return a.lower_log_gain > b.lower_log_gain;
}

PhaseTransitionPoint l1_phase_transition(double delta, BoundFamily family) {
  const double margin = ProblemShape::kBoundaryMargin;
  if (!(delta >= margin && delta <= 1.0 - margin)) {
    std::ostringstream os;
    os.precision(17);
    os << "invariant violated: 0 < delta < 1 (margin 1e-6) (got " << delta << ")";
    throw DomainError(os.str());
  }
  auto feasible = [&](double rho) {
    const AsymptoticBound b = bounds_for(family, ProblemShape::make(delta, rho));
    return std::max(b.L, b.U) < kSqrt2Minus1;
  };

  PhaseTransitionPoint out;
  out.delta = delta;
  double lo = margin;
  if (!feasible(lo)) {
    out.rho_star = 0.0;
    out.feasible = false;
    out.monotone_verified = true;
    return out;
  }
  double hi = 0.5;
  while (feasible(hi)) {
    lo = hi;
    hi = 0.5 * (hi + 1.0);
    if (hi > 1.0 - margin) {
      out.rho_star = lo;
      out.feasible = true;
      return out;
    }
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  out.rho_star = lo;
  out.feasible = true;

  constexpr int kSamples = 8;
  bool ok = true;
  for (int i = 1; i <= kSamples && ok; ++i) {
    const double below = margin * std::pow(lo / margin, static_cast<double>(i) / kSamples);
    ok = feasible(std::min(below, lo));
    const double above = hi + (0.5 - hi) * i / kSamples + 1e-7;
    if (ok && above < 1.0 - margin) ok = !feasible(above);
  }
  out.monotone_verified = ok;
  return out;
}

}  // namespace ricb
