#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ricb::cli {

// Shortest decimal that parses back to the same double. NaN prints as "nan".
std::string format_double(double x);
// Three significant digits in scientific notation, for human tables.
std::string format_sci(double x);
double parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

inline constexpr std::string_view kGridHeader =
    "delta,rho,family,L,U,lambda_min,lambda_max,gamma_min,gamma_max,nu_opt";

// One row of the grid CSV; empty optionals print as empty fields.
struct GridRow {
  double delta = 0.0;
  double rho = 0.0;
  std::string family;
  double L = 0.0;
  double U = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::optional<double> gamma_min;
  std::optional<double> gamma_max;
  std::optional<double> nu_opt;

  bool operator==(const GridRow&) const = default;
};

std::string to_csv(const GridRow& row);
GridRow parse_grid_row(std::string_view line);

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows);
std::vector<GridRow> read_grid_csv(std::istream& is);

}  // namespace ricb::cli
