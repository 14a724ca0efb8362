#pragma once

#include <cstdint>

#include "ricbounds/log_prob.hpp"

namespace ricb {

// Integer problem size with a slack epsilon on the bound.
// Invariants: 0 < k < n < N, epsilon > 0.
struct FiniteInstance {
  std::int64_t k = 0;
  std::int64_t n = 0;
  std::int64_t N = 0;
  double epsilon = 0.0;

  void validate() const;
  double delta() const { return static_cast<double>(n) / static_cast<double>(N); }
  double rho() const { return static_cast<double>(k) / static_cast<double>(n); }
};

// Edelman upper bound on the density of the largest eigenvalue of A^T A for
// an n x m Gaussian A with N(0, 1/n) entries.
double log_g_max_pdf_bound(double m, double n, double lambda);
double g_max_pdf_bound(double m, double n, double lambda);

// The three pieces with ln g_max = n (phi1 + phi2 + phi3).
struct GmaxLogTerms {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
};
GmaxLogTerms g_max_log_terms(double m, double n, double lambda);

// Same for the smallest eigenvalue; requires m < n + 1.
double log_g_min_pdf_bound(double m, double n, double lambda);
double g_min_pdf_bound(double m, double n, double lambda);

// Polynomial prefactors of the pdf bounds:
//   g_max <= p_max exp(n psi_max),  p_max = (8/pi)^{1/2} gamma^{-1} n^{-7/2} lambda^{-3/2}
//   g_min <= p_min exp(n psi_min),  p_min = e / (2 pi sqrt(2 lambda))
double p_max_prefactor(double n, double lambda, double gamma);
// What the Binet lower bound on ln Gamma actually yields for g_max:
//   g_max <= (8 pi)^{-1/2} gamma^{1/2} n^{-1/2} lambda^{-3/2} exp(n psi_max).
// p_max_prefactor above is smaller by about gamma^{3/2} n^3 / 8 and is not an
// upper bound for moderate n.
double p_max_prefactor_binet(double n, double lambda, double gamma);
double p_min_prefactor(double lambda);

// (5/4) (2 pi k (1 - k/N))^{-1/2} exp(-N (1 - ln 2)): probability that the
// random group covering misses a k-subset.
LogValue covering_failure_bound(std::int64_t k, std::int64_t N);

// Which closed form of the eigenvalue-term prefactor is used for the total.
//   kProof:        2 lambda (5/4)^3 B^{1/2} p_max      (default)
//   kStatement:    (8/pi)^{1/2} 2 n^{-7/2} (gamma lambda)^{-1/2} (5/4)^3 B^{1/2}
//   kLinearBracket: kProof with the combinatorial bracket B to the first power
//   kBinet:        kProof with p_max_prefactor_binet in place of p_max
// where B = n N (gamma - rho) / (gamma delta (1 - rho delta)). On the lower
// side kProof and kStatement coincide.
enum class PrefactorForm { kProof, kStatement, kLinearBracket, kBinet };

struct TailBound {
  double total = 0.0;
  double eig_term = 0.0;
  double cover_term = 0.0;
  double log_total = 0.0;
  double log_eig_term = 0.0;
  double log_cover_term = 0.0;
  // Before clamping to 1.
  double log_total_unclamped = 0.0;
  bool clamped = false;

  double lambda_star = 0.0;
  double log_lambda_star = 0.0;
  double gamma_used = 0.0;
  // Coefficient multiplying n * epsilon in the exponent; negative.
  double psi_derivative = 0.0;

  PrefactorForm form = PrefactorForm::kProof;
  double log_prefactor_proof = 0.0;
  double log_prefactor_statement = 0.0;
  double log_prefactor_linear_bracket = 0.0;
  double log_prefactor_binet = 0.0;
};

// Bound on P(U(k,n,N) > U^BT(delta_n, rho_n) + epsilon).
TailBound tail_prob_upper(const FiniteInstance& inst, PrefactorForm form = PrefactorForm::kProof);

// Bound on P(L(k,n,N) > L^BT(delta_n, rho_n) + epsilon).
TailBound tail_prob_lower(const FiniteInstance& inst, PrefactorForm form = PrefactorForm::kProof);

}  // namespace ricb
