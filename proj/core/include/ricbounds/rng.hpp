#pragma once

#include <cstdint>
#include <random>

namespace ricb {

// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of stream `index` under `root`. Distinct (root, index) pairs give
// decorrelated mt19937_64 states, so per-restart or per-trial streams can be
// consumed in any order and still reproduce.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index);

// mt19937_64 with hand-written transforms. std::normal_distribution and
// std::uniform_int_distribution are implementation defined, so they are not
// used anywhere results must replay across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng stream(std::uint64_t root, std::uint64_t index) {
    return Rng(stream_seed(root, index));
  }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Uniform integer in [0, bound), Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal, Box-Muller with the second deviate cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ricb
