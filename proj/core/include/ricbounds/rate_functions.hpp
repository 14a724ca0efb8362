#pragma once

#include <cstdint>
#include <optional>

namespace ricb {

// Asymptotic coordinates of a problem size (k, n, N): delta = n/N,
// rho = k/n, and optionally the group ratio gamma = m/n.
//
// Invariants: delta and rho lie in [kBoundaryMargin, 1 - kBoundaryMargin];
// when present, rho <= gamma <= 1/delta.
struct ProblemShape {
  double delta = 0.5;
  double rho = 0.5;
  std::optional<double> gamma;

  static constexpr double kBoundaryMargin = 1e-6;

  // Validating constructors. Throw DomainError naming the failed invariant.
  static ProblemShape make(double delta, double rho);
  static ProblemShape make(double delta, double rho, double gamma);

  ProblemShape with_gamma(double gamma) const;
  void validate() const;
  double gamma_or_throw() const;
};

// Shannon entropy in nats, H(p) = p ln(1/p) + (1-p) ln(1/(1-p)).
// H(0) = H(1) = 0.
double shannon_entropy(double p);

// Large deviation exponent of the Edelman bound on the largest eigenvalue
// density of an m x m Wishart matrix, gamma = m/n.
double psi_max(double lambda, double gamma);
double psi_max_dlambda(double lambda, double gamma);

// Exponent of the smallest eigenvalue density bound. Requires gamma in (0,1).
double psi_min(double lambda, double gamma);
double psi_min_dlambda(double lambda, double gamma);
// Same as psi_min with lambda supplied as its logarithm, so that eigenvalues
// below the double range can be represented.
double psi_min_log(double log_lambda, double gamma);

// Combinatorial part of the net exponent, H(rho*delta) - delta*gamma*H(rho/gamma).
double combinatorial_exponent(double delta, double rho, double gamma);

// gamma * H(rho/gamma) evaluated from rho and the gap g = gamma - rho without
// cancellation; accurate for gaps far below machine epsilon relative to rho.
double group_entropy_from_gap(double rho, double gap);

// delta*psi_max(lambda, gamma) + H(rho*delta) - delta*gamma*H(rho/gamma).
double net_exponent_max(double lambda, const ProblemShape& shape);
// delta*psi_min(lambda, gamma) + H(rho*delta) - delta*gamma*H(rho/gamma).
double net_exponent_min(double lambda, const ProblemShape& shape);
double net_exponent_min_log(double log_lambda, const ProblemShape& shape);

struct LogBinomialBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Logarithms of the Stirling bracket around C(N, pN):
//   (16/25) (2 pi p(1-p) N)^{-1/2} e^{N H(p)} <= C(N, pN)
//                                   <= (5/4) (2 pi p(1-p) N)^{-1/2} e^{N H(p)}.
// pN must be an integer strictly between 0 and N.
LogBinomialBounds log_binomial_bounds(std::int64_t n_total, double p);

// ln C(n, k) via lgamma.
double log_binomial(double n, double k);

// (z - 1/2) ln z - z + ln sqrt(2 pi), a lower bound on ln Gamma(z) for z > 0.
double binet_log_gamma_lower(double z);

}  // namespace ricb
