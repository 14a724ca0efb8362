#include "ricb_cli/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ricb::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: " + std::string(text));
  }
  return x;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::string to_csv(const GridRow& r) {
  std::string s;
  s += format_double(r.delta) + ',' + format_double(r.rho) + ',' + r.family + ',';
  s += format_double(r.L) + ',' + format_double(r.U) + ',';
  s += format_double(r.lambda_min) + ',' + format_double(r.lambda_max) + ',';
  s += opt(r.gamma_min) + ',' + opt(r.gamma_max) + ',' + opt(r.nu_opt);
  return s;
}

GridRow parse_grid_row(std::string_view line) {
  const auto f = split_csv_line(line);
  if (f.size() != 10) throw std::invalid_argument("grid row needs 10 fields");
  GridRow r;
  r.delta = parse_double(f[0]);
  r.rho = parse_double(f[1]);
  r.family = f[2];
  r.L = parse_double(f[3]);
  r.U = parse_double(f[4]);
  r.lambda_min = parse_double(f[5]);
  r.lambda_max = parse_double(f[6]);
  r.gamma_min = parse_opt(f[7]);
  r.gamma_max = parse_opt(f[8]);
  r.nu_opt = parse_opt(f[9]);
  return r;
}

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows) {
  os << kGridHeader << '\n';
  for (const auto& r : rows) os << to_csv(r) << '\n';
}

std::vector<GridRow> read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kGridHeader) {
    throw std::invalid_argument("missing grid CSV header");
  }
  std::vector<GridRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(parse_grid_row(line));
  }
  return rows;
}

}  // namespace ricb::cli
