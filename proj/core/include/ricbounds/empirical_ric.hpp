#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ricbounds/asymptotic_bounds.hpp"

namespace ricb {

// n x N matrix with i.i.d. N(0, 1/n) entries, filled column-major from
// stream 0 of `seed`.
struct MatrixSample {
  std::int64_t n = 0;
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd entries;
};

MatrixSample sample_gaussian(std::int64_t n, std::int64_t N, std::uint64_t seed);

struct GramEigs {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  // More columns than rows, or lambda_min numerically zero.
  bool rank_deficient = false;
};

// Full symmetric eigensolver up to this size, Lanczos above.
inline constexpr int kDenseEigenLimit = 64;
inline constexpr double kLanczosTolerance = 1e-10;

// Extreme eigenvalues of columns^T columns.
GramEigs gram_extreme_eigs(const Eigen::MatrixXd& columns);

// Extreme eigenvalues of a symmetric positive semidefinite matrix.
GramEigs symmetric_extreme_eigs(const Eigen::MatrixXd& gram);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};
// Largest (largest=true) or smallest eigenpair of a symmetric matrix.
EigenPair extreme_eigenpair(const Eigen::MatrixXd& gram, bool largest);

// Exhaustive enumeration refuses above this many supports.
inline constexpr double kExhaustiveGuard = 1e6;

struct ExhaustiveResult {
  double L = 0.0;
  double U = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<int> argmax_support;
  std::vector<int> argmin_support;
  std::int64_t supports = 0;
};

// Exact L and U over all C(N, k) supports in lexicographic order. Throws
// GuardRefusal carrying C(N, k) above kExhaustiveGuard.
ExhaustiveResult exhaustive_ric(const MatrixSample& sample, int k);

enum class SearchMode { kUpper, kLower };

struct LocalSearchOptions {
  int restarts = 100;
  int candidates = 32;
  int removal_candidates = 4;
  double tolerance = 1e-9;
  int max_swaps = 10000;
  unsigned threads = 1;
};

struct EmpiricalRun {
  std::int64_t n = 0;
  std::int64_t N = 0;
  std::uint64_t sample_seed = 0;
  int k = 0;
  SearchMode mode = SearchMode::kUpper;
  std::vector<int> best_support;  // sorted
  double extreme_eig = 0.0;
  // U estimate lambda_max - 1, or L estimate 1 - lambda_min.
  double estimate = 0.0;
  int restarts = 0;
  std::int64_t swaps_taken = 0;
  // Final objective of each restart, in restart order.
  std::vector<double> restart_objectives;
};

// Best-of-restarts single-column swap search. Restart r draws its initial
// support from stream r of `seed`.
EmpiricalRun local_search(const MatrixSample& sample, int k, SearchMode mode,
                          std::uint64_t seed, const LocalSearchOptions& options = {});

struct SharpnessRatio {
  double ratio_U = 0.0;
  double ratio_L = 0.0;
  // Empirical estimate not positive; the matching ratio is meaningless.
  bool undefined_U = false;
  bool undefined_L = false;
};

SharpnessRatio sharpness_ratio(const AsymptoticBound& bound, double u_est, double l_est);

struct SharpnessCell {
  std::int64_t n = 0;
  std::int64_t N = 0;
  int k = 0;
  std::uint64_t seed = 0;
  AsymptoticBound bound;
  EmpiricalRun upper;
  EmpiricalRun lower;
  SharpnessRatio ratio;
};

// Samples one matrix from `seed`, searches both modes and compares with
// U^BT, L^BT at (n/N, k/n).
SharpnessCell sharpness_ratio(std::int64_t n, std::int64_t N, int k, std::uint64_t seed,
                              const LocalSearchOptions& options = {});

}  // namespace ricb
