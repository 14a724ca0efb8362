#include "ricbounds/finite_tails.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ricbounds/asymptotic_bounds.hpp"
#include "ricbounds/errors.hpp"
#include "ricbounds/rate_functions.hpp"

namespace ricb {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& invariant, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "invariant violated: " << invariant << " (got " << value << ")";
  throw DomainError(os.str());
}

void check_pdf_args(double m, double n, double lambda) {
  if (!(m >= 1.0)) fail("m >= 1", m);
  if (!(n >= 1.0)) fail("n >= 1", n);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda > 0", lambda);
}

// ln of n N (gamma - rho) / (gamma delta (1 - rho delta)).
double log_bracket(const FiniteInstance& inst, double gamma, double gap) {
  if (!(gap > 0.0)) {
    fail("gamma > rho (degenerate group makes the prefactor vanish)", gap);
  }
  const double delta = inst.delta();
  const double rho = inst.rho();
  return std::log(static_cast<double>(inst.n)) + std::log(static_cast<double>(inst.N)) +
         std::log(gap) - std::log(gamma) - std::log(delta) - std::log1p(-rho * delta);
}

void finish(TailBound& out, double log_eig, const FiniteInstance& inst) {
  const LogValue eig = LogValue::from_log(log_eig);
  const LogValue cover = covering_failure_bound(inst.k, inst.N);
  const LogValue total = eig + cover;
  out.log_eig_term = eig.log();
  out.log_cover_term = cover.log();
  out.log_total_unclamped = total.log();
  out.clamped = total.log() > 0.0;
  out.log_total = out.clamped ? 0.0 : total.log();
  out.eig_term = eig.value();
  out.cover_term = cover.value();
  out.total = std::exp(out.log_total);
  if (out.clamped) {
    // Keep total = eig_term + cover_term once the sum is capped at 1.
    const double scale = 1.0 / (out.eig_term + out.cover_term);
    out.eig_term *= scale;
    out.cover_term *= scale;
  }
}

double chosen(PrefactorForm form, const TailBound& t) {
  switch (form) {
    case PrefactorForm::kProof: return t.log_prefactor_proof;
    case PrefactorForm::kStatement: return t.log_prefactor_statement;
    case PrefactorForm::kLinearBracket: return t.log_prefactor_linear_bracket;
    case PrefactorForm::kBinet: return t.log_prefactor_binet;
  }
  return t.log_prefactor_proof;
}

}  // namespace

void FiniteInstance::validate() const {
  if (!(k > 0)) fail("k > 0", static_cast<double>(k));
  if (!(k < n)) fail("k < n", static_cast<double>(k));
  if (!(n < N)) fail("n < N", static_cast<double>(n));
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon > 0", epsilon);
}

double log_g_max_pdf_bound(double m, double n, double lambda) {
  check_pdf_args(m, n, lambda);
  const double nl = n * lambda;
  return 0.5 * std::log(2.0 * kPi) - 1.5 * std::log(nl) +
         0.5 * (n + m) * std::log(nl / 2.0) - std::lgamma(m / 2.0) - std::lgamma(n / 2.0) -
         nl / 2.0;
}

double g_max_pdf_bound(double m, double n, double lambda) {
  return std::exp(log_g_max_pdf_bound(m, n, lambda));
}

GmaxLogTerms g_max_log_terms(double m, double n, double lambda) {
  check_pdf_args(m, n, lambda);
  const double gamma = m / n;
  GmaxLogTerms t;
  t.phi1 = (0.5 * std::log(2.0 * kPi) - 1.5 * std::log(n * lambda)) / n;
  t.phi2 = 0.5 * ((1.0 + gamma) * std::log(n * lambda / 2.0) - lambda);
  t.phi3 = -(std::lgamma(m / 2.0) + std::lgamma(n / 2.0)) / n;
  return t;
}

double log_g_min_pdf_bound(double m, double n, double lambda) {
  check_pdf_args(m, n, lambda);
  if (!(m < n + 1.0)) fail("m < n + 1", m);
  const double nl = n * lambda;
  return 0.5 * std::log(kPi / (2.0 * nl)) + 0.5 * (n - m) * std::log(nl / 2.0) +
         std::lgamma((n + 1.0) / 2.0) - std::lgamma(m / 2.0) -
         std::lgamma((n - m + 1.0) / 2.0) - std::lgamma((n - m + 2.0) / 2.0) - nl / 2.0;
}

double g_min_pdf_bound(double m, double n, double lambda) {
  return std::exp(log_g_min_pdf_bound(m, n, lambda));
}

double p_max_prefactor(double n, double lambda, double gamma) {
  if (!(n > 0.0)) fail("n > 0", n);
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  if (!(gamma > 0.0)) fail("gamma > 0", gamma);
  return std::sqrt(8.0 / kPi) / gamma * std::pow(n, -3.5) * std::pow(lambda, -1.5);
}

double p_max_prefactor_binet(double n, double lambda, double gamma) {
  if (!(n > 0.0)) fail("n > 0", n);
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  if (!(gamma > 0.0)) fail("gamma > 0", gamma);
  return std::sqrt(gamma / (8.0 * kPi * n)) * std::pow(lambda, -1.5);
}

double p_min_prefactor(double lambda) {
  if (!(lambda > 0.0)) fail("lambda > 0", lambda);
  return std::numbers::e / (2.0 * kPi * std::sqrt(2.0 * lambda));
}

LogValue covering_failure_bound(std::int64_t k, std::int64_t N) {
  if (!(k > 0)) fail("k > 0", static_cast<double>(k));
  if (!(k < N)) fail("k < N", static_cast<double>(k));
  const double kd = static_cast<double>(k);
  const double Nd = static_cast<double>(N);
  const double log_v = std::log(1.25) - 0.5 * std::log(2.0 * kPi * kd * (1.0 - kd / Nd)) -
                       Nd * (1.0 - std::numbers::ln2);
  return LogValue::from_log(log_v);
}

TailBound tail_prob_upper(const FiniteInstance& inst, PrefactorForm form) {
  inst.validate();
  const ProblemShape shape = ProblemShape::make(inst.delta(), inst.rho());
  const GammaOptimum opt = optimize_gamma_for_max(shape);
  const double lambda = opt.lambda;
  const double gamma = opt.gamma;
  const double n = static_cast<double>(inst.n);

  TailBound out;
  out.form = form;
  out.lambda_star = lambda;
  out.log_lambda_star = std::log(lambda);
  out.gamma_used = gamma;
  out.psi_derivative = psi_max_dlambda(lambda, gamma);

  const double lb = log_bracket(inst, gamma, opt.gap);
  const double c = 3.0 * std::log(1.25);
  const double log_pmax = std::log(p_max_prefactor(n, lambda, gamma));
  out.log_prefactor_proof = std::numbers::ln2 + std::log(lambda) + c + 0.5 * lb + log_pmax;
  out.log_prefactor_statement = 0.5 * std::log(8.0 / kPi) + std::numbers::ln2 -
                                3.5 * std::log(n) - 0.5 * std::log(gamma * lambda) + c +
                                0.5 * lb;
  out.log_prefactor_linear_bracket = out.log_prefactor_proof + 0.5 * lb;
  out.log_prefactor_binet = out.log_prefactor_proof - log_pmax +
                            std::log(p_max_prefactor_binet(n, lambda, gamma));

  const double log_eig = chosen(form, out) + n * inst.epsilon * out.psi_derivative;
  finish(out, log_eig, inst);
  return out;
}

TailBound tail_prob_lower(const FiniteInstance& inst, PrefactorForm form) {
  inst.validate();
  const ProblemShape shape = ProblemShape::make(inst.delta(), inst.rho());
  const GammaOptimum opt = optimize_gamma_for_min(shape);
  const double log_lambda = opt.log_lambda;
  const double lambda = std::exp(log_lambda);
  const double gamma = opt.gamma;
  const double n = static_cast<double>(inst.n);

  TailBound out;
  out.form = form;
  out.lambda_star = lambda;
  out.log_lambda_star = log_lambda;
  out.gamma_used = gamma;
  // psi_L' = ((1 - gamma)/lambda - 1)/2 > 0 below lambda_min; the slack moves
  // lambda downwards, so the applied coefficient is its negative.
  const double dpsi = 0.5 * ((1.0 - gamma) * std::exp(-log_lambda) - 1.0);
  out.psi_derivative = -dpsi;

  const double lb = log_bracket(inst, gamma, opt.gap);
  out.log_prefactor_proof = 3.0 * std::log(1.25) + 1.0 + 0.5 * log_lambda - std::log(kPi) -
                            0.5 * std::numbers::ln2 + 0.5 * lb;
  out.log_prefactor_statement = out.log_prefactor_proof;
  out.log_prefactor_linear_bracket = out.log_prefactor_proof + 0.5 * lb;
  out.log_prefactor_binet = out.log_prefactor_proof;

  // The smallest eigenvalue is nonnegative: no mass below lambda_min - epsilon
  // once epsilon reaches lambda_min.
  double log_eig = -std::numeric_limits<double>::infinity();
  if (inst.epsilon < lambda) {
    log_eig = chosen(form, out) + n * inst.epsilon * out.psi_derivative;
  }
  finish(out, log_eig, inst);
  return out;
}

}  // namespace ricb
