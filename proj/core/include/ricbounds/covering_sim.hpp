#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ricbounds/log_prob.hpp"

namespace ricb {

// C(n, k) when it fits in 63 bits.
std::optional<std::uint64_t> binomial_exact(std::int64_t n, std::int64_t k);

// r = C(N, k) / C(m, k), the fewest groups of k-subsets of an m-set that can
// cover every k-subset of {0..N-1}.
double min_group_count(std::int64_t N, std::int64_t k, std::int64_t m);
double log_min_group_count(std::int64_t N, std::int64_t k, std::int64_t m);

enum class DrawRule {
  kRN,       // u = ceil(r N)
  kEntropy,  // u = floor(r N H(k/N)) + 1
};

struct CoveringPlan {
  std::int64_t N = 0;
  std::int64_t k = 0;
  std::int64_t m = 0;
  double r = 1.0;
  std::int64_t u = 1;
  std::uint64_t seed = 0;

  static CoveringPlan make(std::int64_t N, std::int64_t k, std::int64_t m, std::uint64_t seed,
                           DrawRule rule = DrawRule::kRN);
  void validate() const;
};

struct CoverResult {
  bool covered = false;
  std::int64_t uncovered_count = 0;
  std::int64_t subsets = 0;
};

// Enumeration of the k-subsets refuses above this count.
inline constexpr double kCoverGuard = 1e7;

// Draws the supersets M_0..M_{u-1}, M_i from stream i of plan.seed, and
// checks every k-subset. `draws` overrides plan.u (0 allowed); draws are a
// prefix-consistent sequence, so coverage is monotone in the count.
CoverResult random_cover(const CoveringPlan& plan);
CoverResult random_cover(const CoveringPlan& plan, std::int64_t draws);

// The m-subset drawn as M_i, sorted.
std::vector<int> draw_superset(const CoveringPlan& plan, std::int64_t i);

struct CoveringBound {
  // (5/4) (2 pi p (1-p))^{-1/2} N^{-1/2} exp(-N (1 - ln 2)), p = k/N
  LogValue envelope;
  // C(N, k) exp(-u / r), the union bound the envelope is derived from
  LogValue union_bound;
};

CoveringBound covering_bound(const CoveringPlan& plan);

struct CoverTrialStats {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double frequency = 0.0;
  double standard_error = 0.0;
  // Uncovered k-subsets per trial, in trial order.
  std::vector<std::int64_t> uncovered;
  // How often each element landed in a drawn superset, over all trials.
  std::vector<std::int64_t> element_hits;
  std::int64_t total_draws = 0;
};

// Trial t uses plan.seed replaced by stream_seed(root_seed, t).
CoverTrialStats cover_trials(const CoveringPlan& plan, std::int64_t trials,
                             std::uint64_t root_seed, unsigned threads = 1);

}  // namespace ricb
