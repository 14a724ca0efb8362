#include "ricbounds/rate_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ricbounds/errors.hpp"

namespace ricb {

namespace {

[[noreturn]] void fail(const std::string& invariant, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "invariant violated: " << invariant << " (got " << value << ")";
  throw DomainError(os.str());
}

// x ln x with the continuous extension 0 ln 0 = 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

ProblemShape ProblemShape::make(double delta, double rho) {
  ProblemShape s{delta, rho, std::nullopt};
  s.validate();
  return s;
}

ProblemShape ProblemShape::make(double delta, double rho, double gamma) {
  ProblemShape s{delta, rho, gamma};
  s.validate();
  return s;
}

ProblemShape ProblemShape::with_gamma(double g) const {
  return make(delta, rho, g);
}

void ProblemShape::validate() const {
  const double lo = kBoundaryMargin;
  const double hi = 1.0 - kBoundaryMargin;
  if (!(delta >= lo && delta <= hi)) fail("0 < delta < 1 (margin 1e-6)", delta);
  if (!(rho >= lo && rho <= hi)) fail("0 < rho < 1 (margin 1e-6)", rho);
  if (gamma) {
    if (!(*gamma >= rho)) fail("gamma >= rho", *gamma);
    if (!(*gamma <= 1.0 / delta)) fail("gamma <= 1/delta", *gamma);
  }
}

double ProblemShape::gamma_or_throw() const {
  if (!gamma) throw DomainError("invariant violated: gamma required for this operation");
  return *gamma;
}

double shannon_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail("0 <= p <= 1", p);
  return -xlogx(p) - xlogx(1.0 - p);
}

double psi_max(double lambda, double gamma) {
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  if (!(gamma > 0.0)) fail("gamma > 0", gamma);
  return 0.5 * ((1.0 + gamma) * std::log(lambda) - gamma * std::log(gamma) + 1.0 +
                gamma - lambda);
}

double psi_max_dlambda(double lambda, double gamma) {
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  return 0.5 * ((1.0 + gamma) / lambda - 1.0);
}

double psi_min_log(double log_lambda, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) fail("0 < gamma < 1", gamma);
  if (std::isnan(log_lambda)) fail("lambda > 0", log_lambda);
  return shannon_entropy(gamma) +
         0.5 * ((1.0 - gamma) * log_lambda + gamma * std::log(gamma) + 1.0 - gamma -
                std::exp(log_lambda));
}

double psi_min(double lambda, double gamma) {
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  return psi_min_log(std::log(lambda), gamma);
}

double psi_min_dlambda(double lambda, double gamma) {
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  return 0.5 * ((1.0 - gamma) / lambda - 1.0);
}

double group_entropy_from_gap(double rho, double gap) {
  if (!(gap >= 0.0)) fail("rho/gamma <= 1", rho / (rho + gap));
  if (gap == 0.0) return 0.0;
  const double gamma = rho + gap;
  // gamma H(rho/gamma) = -rho ln(rho/gamma) - gap ln(gap/gamma)
  return -rho * std::log1p(-gap / gamma) - gap * std::log(gap / gamma);
}

double combinatorial_exponent(double delta, double rho, double gamma) {
  return shannon_entropy(rho * delta) - delta * group_entropy_from_gap(rho, gamma - rho);
}

double net_exponent_max(double lambda, const ProblemShape& shape) {
  const double g = shape.gamma_or_throw();
  return shape.delta * psi_max(lambda, g) + combinatorial_exponent(shape.delta, shape.rho, g);
}

double net_exponent_min_log(double log_lambda, const ProblemShape& shape) {
  const double g = shape.gamma_or_throw();
  return shape.delta * psi_min_log(log_lambda, g) +
         combinatorial_exponent(shape.delta, shape.rho, g);
}

double net_exponent_min(double lambda, const ProblemShape& shape) {
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  return net_exponent_min_log(std::log(lambda), shape);
}

LogBinomialBounds log_binomial_bounds(std::int64_t n_total, double p) {
  if (n_total <= 0) fail("N > 0", static_cast<double>(n_total));
  if (!(p > 0.0 && p < 1.0)) fail("0 < p < 1", p);
  const double n = static_cast<double>(n_total);
  const double k = p * n;
  if (std::abs(k - std::round(k)) > 1e-9 * n) fail("pN integer", k);
  const double common = -0.5 * std::log(2.0 * std::numbers::pi * p * (1.0 - p) * n) +
                        n * shannon_entropy(p);
  return {std::log(16.0 / 25.0) + common, std::log(5.0 / 4.0) + common};
}

double log_binomial(double n, double k) {
  if (!(k >= 0.0 && k <= n)) fail("0 <= k <= n", k);
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binet_log_gamma_lower(double z) {
  if (!(z > 0.0)) fail("z > 0", z);
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace ricb
