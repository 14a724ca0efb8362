#include "ricbounds/empirical_ric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "ricbounds/errors.hpp"
#include "ricbounds/parallel.hpp"
#include "ricbounds/rate_functions.hpp"
#include "ricbounds/rng.hpp"

namespace ricb {

namespace {

[[noreturn]] void fail(const std::string& invariant, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "invariant violated: " << invariant << " (got " << value << ")";
  throw DomainError(os.str());
}

struct LanczosResult {
  double theta_min = 0.0;
  double theta_max = 0.0;
  Eigen::VectorXd v_min;
  Eigen::VectorXd v_max;
};

Eigen::VectorXd start_vector(Eigen::Index k, std::uint64_t salt) {
  Rng rng(stream_seed(0x1a2c05ULL, salt));
  Eigen::VectorXd q(k);
  for (Eigen::Index i = 0; i < k; ++i) q(i) = rng.normal();
  return q;
}

// Lanczos with full reorthogonalisation. Stops once both extreme Ritz pairs
// have residual below kLanczosTolerance (relative to max(1, |theta|)), or
// after k steps, where the tridiagonal spectrum is exact.
LanczosResult lanczos(const Eigen::MatrixXd& G, bool want_vectors) {
  const Eigen::Index k = G.rows();
  Eigen::MatrixXd Q(k, k);
  std::vector<double> alpha;
  std::vector<double> beta;
  alpha.reserve(k);
  beta.reserve(k);
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());

  Eigen::VectorXd q = start_vector(k, 0);
  q.normalize();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  Eigen::Index m = 0;
  std::uint64_t restarts = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    Q.col(j) = q;
    m = j + 1;
    Eigen::VectorXd w = G * q;
    const double a = q.dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      w -= Q.leftCols(m) * (Q.leftCols(m).transpose() * w);
    }
    double b = w.norm();
    const bool breakdown = b <= 1e-13 * scale;

    if (!breakdown && m < k && m % 8 != 0) {
      q = w / b;
      beta.push_back(b);
      continue;
    }
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[i];
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& s = tri.eigenvectors();
    const auto& th = tri.eigenvalues();
    const double r_min = b * std::abs(s(m - 1, 0));
    const double r_max = b * std::abs(s(m - 1, m - 1));
    const bool done_min = r_min <= kLanczosTolerance * std::max(1.0, std::abs(th(0)));
    const bool done_max = r_max <= kLanczosTolerance * std::max(1.0, std::abs(th(m - 1)));
    if (m == k || (done_min && done_max && !breakdown)) break;

    if (breakdown) {
      // Invariant subspace: continue from a fresh direction so that extreme
      // eigenvalues outside it are still found.
      Eigen::VectorXd fresh = start_vector(k, ++restarts);
      for (int pass = 0; pass < 2; ++pass) {
        fresh -= Q.leftCols(m) * (Q.leftCols(m).transpose() * fresh);
      }
      q = fresh.normalized();
      beta.push_back(0.0);
    } else {
      q = w / b;
      beta.push_back(b);
    }
  }

  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[i];
  tri.computeFromTridiagonal(diag, sub,
                             want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  LanczosResult out;
  out.theta_min = tri.eigenvalues()(0);
  out.theta_max = tri.eigenvalues()(m - 1);
  if (want_vectors) {
    out.v_min = (Q.leftCols(m) * tri.eigenvectors().col(0)).normalized();
    out.v_max = (Q.leftCols(m) * tri.eigenvectors().col(m - 1)).normalized();
  }
  return out;
}

double log_choose(std::int64_t N, std::int64_t k) {
  return log_binomial(static_cast<double>(N), static_cast<double>(k));
}

}  // namespace

MatrixSample sample_gaussian(std::int64_t n, std::int64_t N, std::uint64_t seed) {
  if (n < 1) fail("n >= 1", static_cast<double>(n));
  if (N < 1) fail("N >= 1", static_cast<double>(N));
  MatrixSample s{n, N, seed, Eigen::MatrixXd(n, N)};
  Rng rng = Rng::stream(seed, 0);
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::int64_t j = 0; j < N; ++j) {
    for (std::int64_t i = 0; i < n; ++i) s.entries(i, j) = sd * rng.normal();
  }
  return s;
}

GramEigs symmetric_extreme_eigs(const Eigen::MatrixXd& gram) {
  const Eigen::Index k = gram.rows();
  if (k == 0 || gram.cols() != k) fail("square nonempty Gram matrix", static_cast<double>(k));
  GramEigs out;
  if (k <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    out.lambda_min = es.eigenvalues()(0);
    out.lambda_max = es.eigenvalues()(k - 1);
  } else {
    const LanczosResult r = lanczos(gram, false);
    out.lambda_min = r.theta_min;
    out.lambda_max = r.theta_max;
  }
  out.rank_deficient = out.lambda_min <= 1e-12 * std::max(1.0, out.lambda_max);
  return out;
}

GramEigs gram_extreme_eigs(const Eigen::MatrixXd& columns) {
  if (columns.cols() == 0) fail("k >= 1", 0.0);
  GramEigs out = symmetric_extreme_eigs(columns.transpose() * columns);
  if (columns.cols() > columns.rows()) out.rank_deficient = true;
  return out;
}

EigenPair extreme_eigenpair(const Eigen::MatrixXd& gram, bool largest) {
  const Eigen::Index k = gram.rows();
  if (k == 0 || gram.cols() != k) fail("square nonempty Gram matrix", static_cast<double>(k));
  EigenPair out;
  if (k <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const Eigen::Index idx = largest ? k - 1 : 0;
    out.value = es.eigenvalues()(idx);
    out.vector = es.eigenvectors().col(idx);
  } else {
    LanczosResult r = lanczos(gram, true);
    out.value = largest ? r.theta_max : r.theta_min;
    out.vector = largest ? std::move(r.v_max) : std::move(r.v_min);
  }
  return out;
}

ExhaustiveResult exhaustive_ric(const MatrixSample& sample, int k) {
  const std::int64_t N = sample.N;
  if (k < 1) fail("k >= 1", k);
  if (k > N) fail("k <= N", k);
  const double log_count = log_choose(N, k);
  if (log_count > std::log(kExhaustiveGuard) + 1e-9) {
    throw GuardRefusal("exhaustive_ric: C(N,k) exceeds the 1e6 guard",
                       std::round(std::exp(log_count)));
  }

  const Eigen::MatrixXd gram = sample.entries.transpose() * sample.entries;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::MatrixXd sub(k, k);

  ExhaustiveResult out;
  out.lambda_min = std::numeric_limits<double>::infinity();
  out.lambda_max = -std::numeric_limits<double>::infinity();
  for (;;) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) sub(a, b) = gram(idx[a], idx[b]);
    }
    const GramEigs e = symmetric_extreme_eigs(sub);
    if (e.lambda_max > out.lambda_max) {
      out.lambda_max = e.lambda_max;
      out.argmax_support = idx;
    }
    if (e.lambda_min < out.lambda_min) {
      out.lambda_min = e.lambda_min;
      out.argmin_support = idx;
    }
    ++out.supports;

    int pos = k - 1;
    while (pos >= 0 && idx[pos] == static_cast<int>(N) - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  out.U = out.lambda_max - 1.0;
  out.L = 1.0 - out.lambda_min;
  return out;
}

namespace {

struct RestartOutcome {
  double objective = 0.0;
  std::vector<int> support;
  std::int64_t swaps = 0;
};

struct Candidate {
  double score;  // signed so that larger is better
  int pos;
  int col;
};

RestartOutcome run_restart(const Eigen::MatrixXd& A, const Eigen::VectorXd& col_norm2, int k,
                           bool upper, Rng rng, const LocalSearchOptions& opt) {
  const int N = static_cast<int>(A.cols());
  const double sign = upper ? 1.0 : -1.0;

  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> K(perm.begin(), perm.begin() + k);
  std::vector<char> in(N, 0);
  for (int c : K) in[c] = 1;

  Eigen::MatrixXd AK(A.rows(), k);
  for (int p = 0; p < k; ++p) AK.col(p) = A.col(K[p]);
  Eigen::MatrixXd G = AK.transpose() * AK;

  RestartOutcome out;
  EigenPair ep = extreme_eigenpair(G, upper);
  std::vector<Candidate> cands;
  Eigen::MatrixXd trial(k, k);
  for (int step = 0; step < opt.max_swaps; ++step) {
    const Eigen::VectorXd& v = ep.vector;
    const Eigen::VectorXd w = AK * v;
    const Eigen::VectorXd c = A.transpose() * w;

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    const int n_remove = std::min(k, opt.removal_candidates);
    std::partial_sort(order.begin(), order.begin() + n_remove, order.end(),
                      [&](int a, int b) {
                        const double va = std::abs(v(a));
                        const double vb = std::abs(v(b));
                        return va < vb || (va == vb && a < b);
                      });

    // Rayleigh quotient of the current eigenvector after swapping column
    // K[p] for column j; a one-sided estimate of the new extreme eigenvalue.
    cands.clear();
    for (int r = 0; r < n_remove; ++r) {
      const int p = order[r];
      const int i = K[p];
      const double vp = v(p);
      const Eigen::VectorXd d = A.transpose() * A.col(i);
      const double w2 = ep.value - 2.0 * vp * c(i) + vp * vp * d(i);
      for (int j = 0; j < N; ++j) {
        if (in[j]) continue;
        const double est = w2 + 2.0 * vp * (c(j) - vp * d(j)) + vp * vp * col_norm2(j);
        cands.push_back({sign * est, p, j});
      }
    }
    const std::size_t n_eval = std::min<std::size_t>(cands.size(), opt.candidates);
    std::partial_sort(cands.begin(), cands.begin() + n_eval, cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.score != b.score) return a.score > b.score;
                        if (a.pos != b.pos) return a.pos < b.pos;
                        return a.col < b.col;
                      });

    double best_gain = opt.tolerance;
    int best = -1;
    for (std::size_t t = 0; t < n_eval; ++t) {
      const Candidate& cd = cands[t];
      trial = G;
      const Eigen::VectorXd row = AK.transpose() * A.col(cd.col);
      trial.row(cd.pos) = row.transpose();
      trial.col(cd.pos) = row;
      trial(cd.pos, cd.pos) = col_norm2(cd.col);
      const GramEigs e = symmetric_extreme_eigs(trial);
      const double value = upper ? e.lambda_max : e.lambda_min;
      const double gain = sign * (value - ep.value);
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(t);
      }
    }
    if (best < 0) break;

    const Candidate cd = cands[best];
    in[K[cd.pos]] = 0;
    in[cd.col] = 1;
    K[cd.pos] = cd.col;
    AK.col(cd.pos) = A.col(cd.col);
    const Eigen::VectorXd row = AK.transpose() * A.col(cd.col);
    G.row(cd.pos) = row.transpose();
    G.col(cd.pos) = row;
    G(cd.pos, cd.pos) = col_norm2(cd.col);
    ep = extreme_eigenpair(G, upper);
    ++out.swaps;
  }
  out.objective = ep.value;
  out.support = K;
  std::sort(out.support.begin(), out.support.end());
  return out;
}

}  // namespace

EmpiricalRun local_search(const MatrixSample& sample, int k, SearchMode mode,
                          std::uint64_t seed, const LocalSearchOptions& options) {
  if (k < 1) fail("k >= 1", k);
  if (!(k < sample.N)) fail("k < N", k);
  if (options.restarts < 1) fail("restarts >= 1", options.restarts);
  if (options.candidates < 1) fail("candidates >= 1", options.candidates);

  const bool upper = mode == SearchMode::kUpper;
  const Eigen::VectorXd col_norm2 = sample.entries.colwise().squaredNorm().transpose();
  std::vector<RestartOutcome> outcomes(options.restarts);
  parallel_for(outcomes.size(), options.threads, [&](std::size_t r) {
    outcomes[r] = run_restart(sample.entries, col_norm2, k, upper, Rng::stream(seed, r), options);
  });

  EmpiricalRun run;
  run.n = sample.n;
  run.N = sample.N;
  run.sample_seed = sample.seed;
  run.k = k;
  run.mode = mode;
  run.restarts = options.restarts;
  std::size_t best = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    run.restart_objectives.push_back(outcomes[r].objective);
    run.swaps_taken += outcomes[r].swaps;
    const bool better = upper ? outcomes[r].objective > outcomes[best].objective
                              : outcomes[r].objective < outcomes[best].objective;
    if (better) best = r;
  }
  run.best_support = outcomes[best].support;
  run.extreme_eig = outcomes[best].objective;
  run.estimate = upper ? run.extreme_eig - 1.0 : 1.0 - run.extreme_eig;
  return run;
}

SharpnessRatio sharpness_ratio(const AsymptoticBound& bound, double u_est, double l_est) {
  SharpnessRatio r;
  r.undefined_U = !(u_est > 0.0);
  r.undefined_L = !(l_est > 0.0);
  r.ratio_U = r.undefined_U ? std::numeric_limits<double>::quiet_NaN() : bound.U / u_est;
  r.ratio_L = r.undefined_L ? std::numeric_limits<double>::quiet_NaN() : bound.L / l_est;
  return r;
}

SharpnessCell sharpness_ratio(std::int64_t n, std::int64_t N, int k, std::uint64_t seed,
                              const LocalSearchOptions& options) {
  if (!(k > 0 && k < n && n < N)) fail("0 < k < n < N", static_cast<double>(k));
  SharpnessCell cell;
  cell.n = n;
  cell.N = N;
  cell.k = k;
  cell.seed = seed;
  cell.bound = bt_bounds(ProblemShape::make(static_cast<double>(n) / static_cast<double>(N),
                                            static_cast<double>(k) / static_cast<double>(n)));
  const MatrixSample sample = sample_gaussian(n, N, seed);
  cell.upper = local_search(sample, k, SearchMode::kUpper, stream_seed(seed, 1), options);
  cell.lower = local_search(sample, k, SearchMode::kLower, stream_seed(seed, 2), options);
  cell.ratio = sharpness_ratio(cell.bound, cell.upper.estimate, cell.lower.estimate);
  return cell;
}

}  // namespace ricb
