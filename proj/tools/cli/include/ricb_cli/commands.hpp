#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricb_cli/format.hpp"
#include "ricbounds/asymptotic_bounds.hpp"

namespace ricb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 2,
  kExitSolver = 3,
  kExitGuard = 4,
  kExitIo = 5,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSchemaVersion = "1.0.0";

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;
  std::vector<double> points() const;
};

struct GridSpec {
  Range delta{0.05, 0.9524, 30};
  Range rho{0.05, 0.95, 30};
  std::vector<BoundFamily> families{BoundFamily::BT};
  void validate() const;
};

GridRow to_grid_row(const AsymptoticBound& b);

// Rows ordered by family, then delta, then rho.
std::vector<GridRow> compute_grid(const GridSpec& spec, unsigned threads);

// Parses argv-style arguments (without the program name) and runs one
// subcommand. Returns the process exit code; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ricb::cli
