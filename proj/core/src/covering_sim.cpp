#include "ricbounds/covering_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "ricbounds/errors.hpp"
#include "ricbounds/finite_tails.hpp"
#include "ricbounds/parallel.hpp"
#include "ricbounds/rate_functions.hpp"
#include "ricbounds/rng.hpp"

namespace ricb {

namespace {

__extension__ typedef unsigned __int128 u128;

[[noreturn]] void fail(const std::string& invariant, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "invariant violated: " << invariant << " (got " << value << ")";
  throw DomainError(os.str());
}

void check_sizes(std::int64_t N, std::int64_t k, std::int64_t m) {
  if (!(k >= 1)) fail("k >= 1", static_cast<double>(k));
  if (!(k <= m)) fail("k <= m", static_cast<double>(m));
  if (!(m <= N)) fail("m <= N", static_cast<double>(N));
}

}  // namespace

std::optional<std::uint64_t> binomial_exact(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  u128 c = 1;
  constexpr u128 kMax = static_cast<u128>(1) << 63;
  for (std::int64_t i = 1; i <= k; ++i) {
    // c * (n - k + i) / i is exact at every step.
    c = c * static_cast<u128>(n - k + i) / static_cast<u128>(i);
    if (c >= kMax) return std::nullopt;
  }
  return static_cast<std::uint64_t>(c);
}

double log_min_group_count(std::int64_t N, std::int64_t k, std::int64_t m) {
  check_sizes(N, k, m);
  return log_binomial(static_cast<double>(N), static_cast<double>(k)) -
         log_binomial(static_cast<double>(m), static_cast<double>(k));
}

double min_group_count(std::int64_t N, std::int64_t k, std::int64_t m) {
  check_sizes(N, k, m);
  const auto num = binomial_exact(N, k);
  const auto den = binomial_exact(m, k);
  if (num && den) return static_cast<double>(*num) / static_cast<double>(*den);
  return std::exp(log_min_group_count(N, k, m));
}

CoveringPlan CoveringPlan::make(std::int64_t N, std::int64_t k, std::int64_t m,
                                std::uint64_t seed, DrawRule rule) {
  check_sizes(N, k, m);
  CoveringPlan p;
  p.N = N;
  p.k = k;
  p.m = m;
  p.seed = seed;
  p.r = min_group_count(N, k, m);
  const auto num = binomial_exact(N, k);
  const auto den = binomial_exact(m, k);
  const double draws = p.r * static_cast<double>(N);
  if (!(draws < 9e18)) fail("r N representable as a 64-bit draw count", draws);
  if (rule == DrawRule::kRN) {
    if (num && den) {
      const u128 top = static_cast<u128>(*num) * N;
      p.u = static_cast<std::int64_t>((top + *den - 1) / *den);
    } else {
      p.u = static_cast<std::int64_t>(std::ceil(draws));
    }
  } else {
    const double h = shannon_entropy(static_cast<double>(k) / static_cast<double>(N));
    p.u = static_cast<std::int64_t>(std::floor(draws * h)) + 1;
  }
  p.validate();
  return p;
}

void CoveringPlan::validate() const {
  check_sizes(N, k, m);
  if (!(r >= 1.0)) fail("r >= 1", r);
  if (!(u >= 1)) fail("u >= 1", static_cast<double>(u));
}

std::vector<int> draw_superset(const CoveringPlan& plan, std::int64_t i) {
  Rng rng = Rng::stream(plan.seed, static_cast<std::uint64_t>(i));
  const int N = static_cast<int>(plan.N);
  const int m = static_cast<int>(plan.m);
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < m; ++t) {
    const int j = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - t)));
    std::swap(perm[t], perm[j]);
  }
  perm.resize(m);
  std::sort(perm.begin(), perm.end());
  return perm;
}

CoverResult random_cover(const CoveringPlan& plan) { return random_cover(plan, plan.u); }

CoverResult random_cover(const CoveringPlan& plan, std::int64_t draws) {
  check_sizes(plan.N, plan.k, plan.m);
  if (draws < 0) fail("draws >= 0", static_cast<double>(draws));
  const double log_count = log_binomial(static_cast<double>(plan.N), static_cast<double>(plan.k));
  if (log_count > std::log(kCoverGuard) + 1e-9) {
    throw GuardRefusal("random_cover: C(N,k) exceeds the 1e7 guard",
                       std::round(std::exp(log_count)));
  }

  const int N = static_cast<int>(plan.N);
  const int k = static_cast<int>(plan.k);
  // member[e] has bit i set when element e lies in M_i.
  const std::size_t words = std::max<std::size_t>(1, (static_cast<std::size_t>(draws) + 63) / 64);
  std::vector<std::uint64_t> member(static_cast<std::size_t>(N) * words, 0);
  for (std::int64_t i = 0; i < draws; ++i) {
    for (int e : draw_superset(plan, i)) {
      member[static_cast<std::size_t>(e) * words + static_cast<std::size_t>(i / 64)] |=
          std::uint64_t{1} << (i % 64);
    }
  }

  // prefix[d] = AND of member rows for idx[0..d].
  std::vector<std::uint64_t> prefix(static_cast<std::size_t>(k) * words);
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  auto row = [&](int e) { return member.data() + static_cast<std::size_t>(e) * words; };
  auto rebuild = [&](int from) {
    for (int d = from; d < k - 1; ++d) {
      std::uint64_t* dst = prefix.data() + static_cast<std::size_t>(d) * words;
      const std::uint64_t* src = row(idx[d]);
      if (d == 0) {
        std::copy(src, src + words, dst);
      } else {
        const std::uint64_t* prev = dst - words;
        for (std::size_t w = 0; w < words; ++w) dst[w] = prev[w] & src[w];
      }
    }
  };
  rebuild(0);

  CoverResult out;
  for (;;) {
    const std::uint64_t* last = row(idx[k - 1]);
    bool hit = false;
    if (k == 1) {
      for (std::size_t w = 0; w < words && !hit; ++w) hit = last[w] != 0;
    } else {
      const std::uint64_t* pre = prefix.data() + static_cast<std::size_t>(k - 2) * words;
      for (std::size_t w = 0; w < words && !hit; ++w) hit = (pre[w] & last[w]) != 0;
    }
    if (!hit) ++out.uncovered_count;
    ++out.subsets;

    int pos = k - 1;
    while (pos >= 0 && idx[pos] == N - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    if (pos < k - 1) rebuild(pos);
  }
  out.covered = out.uncovered_count == 0;
  return out;
}

CoveringBound covering_bound(const CoveringPlan& plan) {
  plan.validate();
  CoveringBound b;
  b.envelope = covering_failure_bound(plan.k, plan.N);
  const double log_c = log_binomial(static_cast<double>(plan.N), static_cast<double>(plan.k));
  b.union_bound = LogValue::from_log(log_c - static_cast<double>(plan.u) / plan.r);
  return b;
}

CoverTrialStats cover_trials(const CoveringPlan& plan, std::int64_t trials,
                             std::uint64_t root_seed, unsigned threads) {
  plan.validate();
  if (trials < 1) fail("trials >= 1", static_cast<double>(trials));
  std::vector<std::int64_t> uncovered(static_cast<std::size_t>(trials), 0);
  std::vector<std::vector<std::int64_t>> hits(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    CoveringPlan p = plan;
    p.seed = stream_seed(root_seed, t);
    uncovered[t] = random_cover(p).uncovered_count;
    std::vector<std::int64_t> h(static_cast<std::size_t>(plan.N), 0);
    for (std::int64_t i = 0; i < p.u; ++i) {
      for (int e : draw_superset(p, i)) ++h[static_cast<std::size_t>(e)];
    }
    hits[t] = std::move(h);
  });

  CoverTrialStats s;
  s.trials = trials;
  s.element_hits.assign(static_cast<std::size_t>(plan.N), 0);
  for (std::size_t t = 0; t < uncovered.size(); ++t) {
    s.failures += uncovered[t] > 0 ? 1 : 0;
    for (std::size_t e = 0; e < hits[t].size(); ++e) s.element_hits[e] += hits[t][e];
  }
  s.uncovered = std::move(uncovered);
  s.total_draws = trials * plan.u;
  s.frequency = static_cast<double>(s.failures) / static_cast<double>(trials);
  s.standard_error = std::sqrt(s.frequency * (1.0 - s.frequency) / static_cast<double>(trials));
  return s;
}

}  // namespace ricb
