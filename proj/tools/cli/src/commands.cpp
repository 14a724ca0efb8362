#include "ricb_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ricb_cli/svg.hpp"
#include "ricbounds/covering_sim.hpp"
#include "ricbounds/empirical_ric.hpp"
#include "ricbounds/errors.hpp"
#include "ricbounds/finite_tails.hpp"
#include "ricbounds/parallel.hpp"
#include "ricbounds/rng.hpp"

#ifndef RICB_VERSION
#define RICB_VERSION "dev"
#endif

namespace ricb::cli {

using nlohmann::json;

std::vector<double> Range::points() const {
  std::vector<double> p(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    p[static_cast<std::size_t>(i)] = i + 1 == steps ? hi : lo + (hi - lo) * i / (steps - 1);
  }
  return p;
}

namespace {

void check_range(const Range& r, const char* name) {
  if (!(r.lo > 0.0 && r.hi < 1.0 && r.lo <= r.hi)) {
    throw DomainError(std::string("invariant violated: ") + name +
                      " range within (0,1) with lo <= hi");
  }
  if (r.steps < 2) throw DomainError(std::string("invariant violated: ") + name + " steps >= 2");
}

}  // namespace

void GridSpec::validate() const {
  check_range(delta, "delta");
  check_range(rho, "rho");
  if (families.empty()) throw DomainError("invariant violated: at least one bound family");
}

GridRow to_grid_row(const AsymptoticBound& b) {
  GridRow r;
  r.delta = b.shape.delta;
  r.rho = b.shape.rho;
  r.family = std::string(to_string(b.family));
  r.L = b.L;
  r.U = b.U;
  r.lambda_min = b.lambda_min;
  r.lambda_max = b.lambda_max;
  r.gamma_min = b.gamma_at_max_opt;
  r.gamma_max = b.gamma_at_min_opt;
  r.nu_opt = b.nu_opt;
  return r;
}

std::vector<GridRow> compute_grid(const GridSpec& spec, unsigned threads) {
  spec.validate();
  const auto ds = spec.delta.points();
  const auto rs = spec.rho.points();
  const std::size_t per_family = ds.size() * rs.size();
  std::vector<GridRow> rows(spec.families.size() * per_family);
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t f = idx / per_family;
    const std::size_t cell = idx % per_family;
    const double d = ds[cell / rs.size()];
    const double r = rs[cell % rs.size()];
    rows[idx] = to_grid_row(bounds_for(spec.families[f], ProblemShape::make(d, r)));
  });
  return rows;
}

namespace {

enum class Format { kHuman, kCsv, kJson, kSvg };

struct Globals {
  bool json_flag = false;
  std::string out_path;
  std::uint64_t seed = 20100609;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string format;
  std::string command_line;
};

Format resolve(const Globals& g, Format fallback) {
  if (g.json_flag) return Format::kJson;
  if (g.format == "csv") return Format::kCsv;
  if (g.format == "json") return Format::kJson;
  if (g.format == "svg") return Format::kSvg;
  return fallback;
}

void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out_path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + g.out_path);
  f << text;
  f.close();
  if (!f) throw IoError("failed writing output file: " + g.out_path);
}

json num_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
json opt_json(const std::optional<double>& x) { return x ? num_or_null(*x) : json(nullptr); }

std::string envelope(const Globals& g, const std::string& command, json params, json results,
                     double seconds) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["params"] = std::move(params);
  doc["results"] = std::move(results);
  doc["run"] = {{"version", RICB_VERSION},
                {"command_line", g.command_line},
                {"seed", g.seed},
                {"threads", g.threads},
                {"wall_time_s", seconds}};
  return doc.dump(2) + "\n";
}

json bound_json(const AsymptoticBound& b) {
  return {{"delta", b.shape.delta},
          {"rho", b.shape.rho},
          {"family", std::string(to_string(b.family))},
          {"L", num_or_null(b.L)},
          {"U", num_or_null(b.U)},
          {"lambda_min", num_or_null(b.lambda_min)},
          {"log_lambda_min", num_or_null(b.log_lambda_min)},
          {"lambda_max", num_or_null(b.lambda_max)},
          {"gamma_min", opt_json(b.gamma_at_max_opt)},
          {"gamma_max", opt_json(b.gamma_at_min_opt)},
          {"gamma_max_minus_rho", opt_json(b.gamma_at_min_gap)},
          {"nu_opt", opt_json(b.nu_opt)},
          {"stationarity_max", opt_json(b.stationarity_max)},
          {"stationarity_min", opt_json(b.stationarity_min)},
          {"gamma_min_at_boundary", b.gamma_min_at_boundary},
          {"gamma_max_at_boundary", b.gamma_max_at_boundary}};
}

std::vector<BoundFamily> parse_families(const std::vector<std::string>& names) {
  std::vector<BoundFamily> out;
  for (const auto& n : names) {
    const BoundFamily f = parse_family(n);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class Table {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  std::string str() const {
    std::size_t w = 0;
    for (const auto& r : rows_) w = std::max(w, r.first.size());
    std::ostringstream os;
    for (const auto& r : rows_) os << std::left << std::setw(static_cast<int>(w) + 2) << r.first << r.second << '\n';
    return os.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::string opt_sci(const std::optional<double>& x) { return x ? format_sci(*x) : "-"; }

// bounds -------------------------------------------------------------------

struct BoundsArgs {
  double delta = 0.5;
  double rho = 0.5;
  std::string family = "BT";
};

void cmd_bounds(const Globals& g, const BoundsArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const AsymptoticBound b = bounds_for(parse_family(a.family), ProblemShape::make(a.delta, a.rho));
  const Format fmt = resolve(g, Format::kHuman);
  if (fmt == Format::kJson) {
    json params = {{"delta", a.delta}, {"rho", a.rho}, {"family", a.family}};
    emit(g, out, envelope(g, "bounds", params, bound_json(b), seconds_since(t0)));
  } else if (fmt == Format::kCsv) {
    std::ostringstream os;
    write_grid_csv(os, {to_grid_row(b)});
    emit(g, out, os.str());
  } else if (fmt == Format::kSvg) {
    throw DomainError("invariant violated: bounds has no svg output");
  } else {
    Table t;
    t.add("family", std::string(to_string(b.family)));
    t.add("delta", format_sci(a.delta));
    t.add("rho", format_sci(a.rho));
    t.add("L", format_sci(b.L));
    t.add("U", format_sci(b.U));
    t.add("lambda_min", format_sci(b.lambda_min));
    t.add("ln lambda_min", format_sci(b.log_lambda_min));
    t.add("lambda_max", format_sci(b.lambda_max));
    t.add("gamma_max", opt_sci(b.gamma_at_min_opt));
    t.add("gamma_max - rho", opt_sci(b.gamma_at_min_gap));
    t.add("gamma_min", opt_sci(b.gamma_at_max_opt));
    t.add("nu", opt_sci(b.nu_opt));
    t.add("stationarity (max)", opt_sci(b.stationarity_max));
    t.add("stationarity (min)", opt_sci(b.stationarity_min));
    if (b.gamma_min_at_boundary) t.add("note", "gamma_min on the boundary 1/delta");
    if (b.gamma_max_at_boundary) t.add("note", "gamma_max on the search boundary");
    emit(g, out, t.str());
  }
}

// grid ---------------------------------------------------------------------

struct GridArgs {
  std::vector<double> delta_range{0.05, 0.9524, 30};
  std::vector<double> rho_range{0.05, 0.95, 30};
  std::vector<std::string> families{"BT"};
};

Range to_range(const std::vector<double>& v, const char* name) {
  if (v.size() != 3 || v[2] != std::floor(v[2])) {
    throw DomainError(std::string("invariant violated: ") + name + " range is LO HI STEPS");
  }
  return {v[0], v[1], static_cast<int>(v[2])};
}

void cmd_grid(const Globals& g, const GridArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  GridSpec spec;
  spec.delta = to_range(a.delta_range, "delta");
  spec.rho = to_range(a.rho_range, "rho");
  spec.families = parse_families(a.families);
  const auto rows = compute_grid(spec, g.threads);
  const Format fmt = resolve(g, Format::kCsv);
  if (fmt == Format::kJson) {
    json params = {{"delta_range", a.delta_range},
                   {"rho_range", a.rho_range},
                   {"families", a.families}};
    json res = json::array();
    for (const auto& r : rows) {
      res.push_back({{"delta", r.delta},
                     {"rho", r.rho},
                     {"family", r.family},
                     {"L", num_or_null(r.L)},
                     {"U", num_or_null(r.U)},
                     {"lambda_min", num_or_null(r.lambda_min)},
                     {"lambda_max", num_or_null(r.lambda_max)},
                     {"gamma_min", opt_json(r.gamma_min)},
                     {"gamma_max", opt_json(r.gamma_max)},
                     {"nu_opt", opt_json(r.nu_opt)}});
    }
    emit(g, out, envelope(g, "grid", params, res, seconds_since(t0)));
  } else if (fmt == Format::kSvg) {
    const auto ds = spec.delta.points();
    const auto rs = spec.rho.points();
    const std::size_t cells = ds.size() * rs.size();
    std::vector<Heatmap> panels;
    // Cells are stored delta-major; heatmaps want rho-major.
    auto panel = [&](const std::string& title, auto value) {
      Heatmap h{title, ds, rs, std::vector<double>(cells)};
      for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < rs.size(); ++j) h.values[j * ds.size() + i] = value(i * rs.size() + j);
      }
      panels.push_back(std::move(h));
    };
    for (std::size_t f = 0; f < spec.families.size(); ++f) {
      const std::string name(to_string(spec.families[f]));
      const std::size_t base = f * cells;
      panel("U^" + name, [&](std::size_t c) { return rows[base + c].U; });
      panel("L^" + name, [&](std::size_t c) { return rows[base + c].L; });
    }
    const auto bt = std::find(spec.families.begin(), spec.families.end(), BoundFamily::BT);
    const auto bct = std::find(spec.families.begin(), spec.families.end(), BoundFamily::BCT);
    if (bt != spec.families.end() && bct != spec.families.end()) {
      const std::size_t b0 = static_cast<std::size_t>(bt - spec.families.begin()) * cells;
      const std::size_t c0 = static_cast<std::size_t>(bct - spec.families.begin()) * cells;
      panel("U^BCT / U^BT", [&](std::size_t c) { return rows[c0 + c].U / rows[b0 + c].U; });
    }
    emit(g, out, render_heatmaps(panels, "delta", "rho"));
  } else {
    std::ostringstream os;
    write_grid_csv(os, rows);
    emit(g, out, os.str());
  }
}

// finite -------------------------------------------------------------------

struct FiniteArgs {
  std::int64_t k = 100;
  std::int64_t n = 200;
  std::int64_t N = 2000;
  double epsilon = 1e-3;
  std::string side = "upper";
  std::string prefactor = "proof";
};

PrefactorForm parse_prefactor(const std::string& s) {
  if (s == "proof") return PrefactorForm::kProof;
  if (s == "statement") return PrefactorForm::kStatement;
  if (s == "linear") return PrefactorForm::kLinearBracket;
  if (s == "binet") return PrefactorForm::kBinet;
  throw DomainError("invariant violated: prefactor in {proof, statement, linear, binet} (got " + s +
                    ")");
}

void cmd_finite(const Globals& g, const FiniteArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const FiniteInstance inst{a.k, a.n, a.N, a.epsilon};
  const PrefactorForm form = parse_prefactor(a.prefactor);
  TailBound t;
  if (a.side == "upper") {
    t = tail_prob_upper(inst, form);
  } else if (a.side == "lower") {
    t = tail_prob_lower(inst, form);
  } else {
    throw DomainError("invariant violated: side in {upper, lower} (got " + a.side + ")");
  }
  const double ln10 = std::log(10.0);
  const Format fmt = resolve(g, Format::kHuman);
  if (fmt == Format::kJson) {
    json params = {{"k", a.k}, {"n", a.n}, {"N", a.N}, {"epsilon", a.epsilon},
                   {"side", a.side}, {"prefactor", a.prefactor}};
    json res = {{"total", t.total},
                {"eig_term", t.eig_term},
                {"cover_term", t.cover_term},
                {"log10_total", t.log_total / ln10},
                {"log10_total_unclamped", t.log_total_unclamped / ln10},
                {"log10_eig_term", num_or_null(t.log_eig_term / ln10)},
                {"log10_cover_term", t.log_cover_term / ln10},
                {"clamped", t.clamped},
                {"lambda_star", t.lambda_star},
                {"log_lambda_star", t.log_lambda_star},
                {"gamma_used", t.gamma_used},
                {"psi_derivative", t.psi_derivative},
                {"log10_prefactor_proof", t.log_prefactor_proof / ln10},
                {"log10_prefactor_statement", t.log_prefactor_statement / ln10},
                {"log10_prefactor_linear_bracket", t.log_prefactor_linear_bracket / ln10},
                {"log10_prefactor_binet", t.log_prefactor_binet / ln10}};
    emit(g, out, envelope(g, "finite", params, res, seconds_since(t0)));
  } else if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "k,n,N,epsilon,side,prefactor,total,log10_total,eig_term,cover_term,lambda_star,gamma_used\n";
    os << a.k << ',' << a.n << ',' << a.N << ',' << format_double(a.epsilon) << ',' << a.side << ','
       << a.prefactor << ',' << format_double(t.total) << ',' << format_double(t.log_total / ln10)
       << ',' << format_double(t.eig_term) << ',' << format_double(t.cover_term) << ','
       << format_double(t.lambda_star) << ',' << format_double(t.gamma_used) << '\n';
    emit(g, out, os.str());
  } else if (fmt == Format::kSvg) {
    throw DomainError("invariant violated: finite has no svg output");
  } else {
    Table tb;
    tb.add("k n N", std::to_string(a.k) + " " + std::to_string(a.n) + " " + std::to_string(a.N));
    tb.add("epsilon", format_sci(a.epsilon));
    tb.add("side", a.side + " (prefactor: " + a.prefactor + ")");
    tb.add("Prob", format_sci(t.total) + "  (log10 " + format_sci(t.log_total / ln10) + ")");
    tb.add("eigenvalue term", "10^" + format_sci(t.log_eig_term / ln10));
    tb.add("covering term", "10^" + format_sci(t.log_cover_term / ln10));
    tb.add("lambda*", format_sci(t.lambda_star));
    tb.add("gamma", format_sci(t.gamma_used));
    tb.add("exponent slope", format_sci(t.psi_derivative));
    if (t.clamped) tb.add("note", "clamped to 1");
    emit(g, out, tb.str());
  }
}

// empirical ----------------------------------------------------------------

struct EmpiricalArgs {
  std::int64_t n = 100;
  std::vector<std::int64_t> Ns{200, 500, 1000};
  std::vector<double> rhos{0.1, 0.2, 0.3};
  int restarts = 10;
  int draws = 1;
};

struct EmpiricalCellOut {
  std::int64_t N = 0;
  int k = 0;
  double rho = 0.0;
  std::string status = "ok";
  AsymptoticBound bound;
  std::vector<double> u_est;
  std::vector<double> l_est;
};

void cmd_empirical(const Globals& g, const EmpiricalArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.draws < 1) throw DomainError("invariant violated: draws >= 1");
  std::vector<EmpiricalCellOut> cells;
  for (auto N : a.Ns) {
    for (double rho : a.rhos) {
      EmpiricalCellOut c;
      c.N = N;
      c.rho = rho;
      c.k = static_cast<int>(std::lround(rho * static_cast<double>(a.n)));
      cells.push_back(std::move(c));
    }
  }
  const std::size_t draws = static_cast<std::size_t>(a.draws);
  std::vector<std::optional<SharpnessCell>> runs(cells.size() * draws);
  std::vector<std::string> errors(runs.size());
  LocalSearchOptions opt;
  opt.restarts = a.restarts;
  // Errors stay inside their cell so the sweep continues.
  parallel_for(runs.size(), g.threads, [&](std::size_t i) {
    const EmpiricalCellOut& c = cells[i / draws];
    try {
      runs[i] = sharpness_ratio(a.n, c.N, c.k, stream_seed(g.seed, i), opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (std::size_t d = 0; d < draws; ++d) {
      const std::size_t i = ci * draws + d;
      if (!runs[i]) {
        cells[ci].status = "error: " + errors[i];
        continue;
      }
      cells[ci].bound = runs[i]->bound;
      cells[ci].u_est.push_back(runs[i]->upper.estimate);
      cells[ci].l_est.push_back(runs[i]->lower.estimate);
    }
  }

  auto stats = [](const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity(), sum = 0.0;
    for (double x : v) {
      mx = std::max(mx, x);
      sum += x;
    }
    const double mean = v.empty() ? std::nan("") : sum / static_cast<double>(v.size());
    return std::pair<double, double>{v.empty() ? std::nan("") : mx, mean};
  };

  const Format fmt = resolve(g, Format::kCsv);
  if (fmt == Format::kSvg) throw DomainError("invariant violated: empirical has no svg output");
  json res = json::array();
  std::ostringstream os;
  os << "n,N,k,delta,rho,draws,U_bt,U_est_max,U_est_mean,ratio_U,L_bt,L_est_max,L_est_mean,"
        "ratio_L,status\n";
  for (const auto& c : cells) {
    const auto [umax, umean] = stats(c.u_est);
    const auto [lmax, lmean] = stats(c.l_est);
    const bool ok = c.status == "ok";
    const SharpnessRatio r = ok ? sharpness_ratio(c.bound, umax, lmax) : SharpnessRatio{};
    const double ru = ok && !r.undefined_U ? r.ratio_U : std::nan("");
    const double rl = ok && !r.undefined_L ? r.ratio_L : std::nan("");
    const double delta = static_cast<double>(a.n) / static_cast<double>(c.N);
    const double rho = static_cast<double>(c.k) / static_cast<double>(a.n);
    os << a.n << ',' << c.N << ',' << c.k << ',' << format_double(delta) << ','
       << format_double(rho) << ',' << c.u_est.size() << ','
       << format_double(ok ? c.bound.U : std::nan("")) << ',' << format_double(umax) << ','
       << format_double(umean) << ',' << format_double(ru) << ','
       << format_double(ok ? c.bound.L : std::nan("")) << ',' << format_double(lmax) << ','
       << format_double(lmean) << ',' << format_double(rl) << ',' << c.status << '\n';
    res.push_back({{"n", a.n}, {"N", c.N}, {"k", c.k}, {"delta", delta}, {"rho", rho},
                   {"draws", c.u_est.size()},
                   {"U_bt", ok ? num_or_null(c.bound.U) : json(nullptr)},
                   {"U_est_max", num_or_null(umax)}, {"U_est_mean", num_or_null(umean)},
                   {"ratio_U", num_or_null(ru)},
                   {"L_bt", ok ? num_or_null(c.bound.L) : json(nullptr)},
                   {"L_est_max", num_or_null(lmax)}, {"L_est_mean", num_or_null(lmean)},
                   {"ratio_L", num_or_null(rl)}, {"status", c.status}});
  }
  if (fmt == Format::kJson) {
    json params = {{"n", a.n}, {"N", a.Ns}, {"rho", a.rhos}, {"restarts", a.restarts},
                   {"draws", a.draws}};
    emit(g, out, envelope(g, "empirical", params, res, seconds_since(t0)));
  } else {
    emit(g, out, os.str());
  }
}

// phase --------------------------------------------------------------------

struct PhaseArgs {
  int delta_steps = 50;
  std::vector<double> delta_range{0.05, 0.9524};
  std::string family = "both";
};

void cmd_phase(const Globals& g, const PhaseArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.delta_range.size() != 2) throw DomainError("invariant violated: delta range is LO HI");
  const Range dr{a.delta_range[0], a.delta_range[1], a.delta_steps};
  check_range(dr, "delta");
  std::vector<BoundFamily> fams;
  if (a.family == "both") {
    fams = {BoundFamily::BT, BoundFamily::BCT};
  } else {
    fams = {parse_family(a.family)};
  }
  const auto ds = dr.points();
  std::vector<PhaseTransitionPoint> pts(fams.size() * ds.size());
  parallel_for(pts.size(), g.threads, [&](std::size_t i) {
    pts[i] = l1_phase_transition(ds[i % ds.size()], fams[i / ds.size()]);
  });

  const Format fmt = resolve(g, Format::kCsv);
  if (fmt == Format::kSvg) {
    std::vector<Series> series;
    for (std::size_t f = 0; f < fams.size(); ++f) {
      Series s{"rho*_" + std::string(to_string(fams[f])), ds, {}};
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& p = pts[f * ds.size() + i];
        s.y.push_back(p.feasible ? p.rho_star : std::nan(""));
      }
      series.push_back(std::move(s));
    }
    emit(g, out, render_lines("l1 recovery: max(L,U) < sqrt(2)-1", "delta", "rho*", series));
  } else if (fmt == Format::kJson) {
    json res = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      res.push_back({{"delta", pts[i].delta},
                     {"family", std::string(to_string(fams[i / ds.size()]))},
                     {"rho_star", pts[i].feasible ? json(pts[i].rho_star) : json(nullptr)},
                     {"feasible", pts[i].feasible},
                     {"monotone_verified", pts[i].monotone_verified}});
    }
    json params = {{"delta_steps", a.delta_steps}, {"delta_range", a.delta_range},
                   {"family", a.family}};
    emit(g, out, envelope(g, "phase", params, res, seconds_since(t0)));
  } else {
    std::ostringstream os;
    os << "delta,family,rho_star,feasible,monotone_verified\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os << format_double(pts[i].delta) << ',' << to_string(fams[i / ds.size()]) << ','
         << (pts[i].feasible ? format_double(pts[i].rho_star) : "") << ','
         << (pts[i].feasible ? 1 : 0) << ',' << (pts[i].monotone_verified ? 1 : 0) << '\n';
    }
    emit(g, out, os.str());
  }
}

// cover --------------------------------------------------------------------

struct CoverArgs {
  std::int64_t N = 12;
  std::int64_t k = 3;
  std::int64_t m = 6;
  std::int64_t trials = 1000;
  std::string rule = "rn";
  bool details = false;
};

void cmd_cover(const Globals& g, const CoverArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  DrawRule rule = DrawRule::kRN;
  if (a.rule == "entropy") {
    rule = DrawRule::kEntropy;
  } else if (a.rule != "rn") {
    throw DomainError("invariant violated: rule in {rn, entropy} (got " + a.rule + ")");
  }
  const CoveringPlan plan = CoveringPlan::make(a.N, a.k, a.m, g.seed, rule);
  const CoverTrialStats s = cover_trials(plan, a.trials, g.seed, g.threads);
  const CoveringBound b = covering_bound(plan);
  const double ub = std::min(1.0, b.union_bound.value());
  const double env = std::min(1.0, b.envelope.value());

  const Format fmt = resolve(g, Format::kHuman);
  if (fmt == Format::kJson) {
    json params = {{"N", a.N}, {"k", a.k}, {"m", a.m}, {"trials", a.trials}, {"rule", a.rule}};
    json res = {{"r", plan.r},
                {"u", plan.u},
                {"failures", s.failures},
                {"frequency", s.frequency},
                {"standard_error", s.standard_error},
                {"union_bound", ub},
                {"log_union_bound", b.union_bound.log()},
                {"envelope_bound", env},
                {"log_envelope_bound", b.envelope.log()}};
    if (a.details) res["uncovered_per_trial"] = s.uncovered;
    emit(g, out, envelope(g, "cover", params, res, seconds_since(t0)));
  } else if (fmt == Format::kCsv) {
    std::ostringstream os;
    if (a.details) {
      os << "trial,uncovered\n";
      for (std::size_t t = 0; t < s.uncovered.size(); ++t) os << t << ',' << s.uncovered[t] << '\n';
    } else {
      os << "N,k,m,r,u,trials,failures,frequency,standard_error,union_bound,envelope_bound\n";
      os << a.N << ',' << a.k << ',' << a.m << ',' << format_double(plan.r) << ',' << plan.u << ','
         << a.trials << ',' << s.failures << ',' << format_double(s.frequency) << ','
         << format_double(s.standard_error) << ',' << format_double(ub) << ','
         << format_double(env) << '\n';
    }
    emit(g, out, os.str());
  } else if (fmt == Format::kSvg) {
    throw DomainError("invariant violated: cover has no svg output");
  } else {
    Table t;
    t.add("N k m", std::to_string(a.N) + " " + std::to_string(a.k) + " " + std::to_string(a.m));
    t.add("r", format_sci(plan.r));
    t.add("u", std::to_string(plan.u));
    t.add("failures", std::to_string(s.failures) + " / " + std::to_string(s.trials));
    t.add("frequency", format_sci(s.frequency) + " +- " + format_sci(s.standard_error));
    t.add("C(N,k) e^{-u/r}", format_sci(ub));
    t.add("envelope bound", format_sci(env));
    std::string txt = t.str();
    if (a.details) {
      txt += "uncovered per trial:";
      for (auto u : s.uncovered) txt += " " + std::to_string(u);
      txt += "\n";
    }
    emit(g, out, txt);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted isometry constant bounds for Gaussian matrices", "ricb"};
  app.set_version_flag("--version", RICB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json_flag, "Emit JSON (same as --format json)");
  app.add_option("--out", g.out_path, "Write output to PATH instead of stdout");
  app.add_option("--seed", g.seed, "Root seed for all random streams")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "L and U bounds at one (delta, rho)");
  bounds->add_option("--delta", ba.delta, "n/N")->required();
  bounds->add_option("--rho", ba.rho, "k/n")->required();
  bounds->add_option("--family", ba.family, "BT, BCT or CT")->capture_default_str();

  GridArgs ga;
  auto* grid = app.add_subcommand("grid", "Bounds over a (delta, rho) grid");
  grid->add_option("--delta-range", ga.delta_range, "LO HI STEPS")->expected(3)->capture_default_str();
  grid->add_option("--rho-range", ga.rho_range, "LO HI STEPS")->expected(3)->capture_default_str();
  grid->add_option("--families", ga.families, "Comma-separated bound families")
      ->delimiter(',')
      ->capture_default_str();

  FiniteArgs fa;
  auto* finite = app.add_subcommand("finite", "Finite (k, n, N) tail probability bound");
  finite->add_option("--k", fa.k)->required();
  finite->add_option("--n", fa.n)->required();
  finite->add_option("--N", fa.N)->required();
  finite->add_option("--epsilon", fa.epsilon)->required();
  finite->add_option("--side", fa.side, "upper or lower")->capture_default_str();
  finite->add_option("--prefactor", fa.prefactor, "proof, statement, linear or binet")->capture_default_str();

  EmpiricalArgs ea;
  auto* empirical = app.add_subcommand("empirical", "Local-search RIC estimates and sharpness ratios");
  empirical->add_option("--n", ea.n)->capture_default_str();
  empirical->add_option("--N", ea.Ns, "Comma-separated column counts")->delimiter(',');
  empirical->add_option("--rho", ea.rhos, "Comma-separated k/n values")->delimiter(',');
  empirical->add_option("--restarts", ea.restarts)->capture_default_str();
  empirical->add_option("--draws", ea.draws, "Matrices per cell")->capture_default_str();

  PhaseArgs pa;
  auto* phase = app.add_subcommand("phase", "l1 recovery phase transition from RIC bounds");
  phase->add_option("--delta-steps", pa.delta_steps)->capture_default_str();
  phase->add_option("--delta-range", pa.delta_range, "LO HI")->expected(2);
  phase->add_option("--family", pa.family, "BT, BCT or both")->capture_default_str();

  CoverArgs ca;
  auto* cover = app.add_subcommand("cover", "Random group covering simulation");
  cover->add_option("--N", ca.N)->capture_default_str();
  cover->add_option("--k", ca.k)->capture_default_str();
  cover->add_option("--m", ca.m)->capture_default_str();
  cover->add_option("--trials", ca.trials)->capture_default_str();
  cover->add_option("--rule", ca.rule, "rn or entropy")->capture_default_str();
  cover->add_flag("--details", ca.details, "Per-trial uncovered counts");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  for (const auto& a : args) g.command_line += (g.command_line.empty() ? "" : " ") + a;
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (*bounds) cmd_bounds(g, ba, out);
    else if (*grid) cmd_grid(g, ga, out);
    else if (*finite) cmd_finite(g, fa, out);
    else if (*empirical) cmd_empirical(g, ea, out);
    else if (*phase) cmd_phase(g, pa, out);
    else if (*cover) cmd_cover(g, ca, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const GuardRefusal& e) {
    err << "error: " << e.what() << " (count " << e.count() << ")\n";
    return kExitGuard;
  } catch (const SolverError& e) {
    err << "error: solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace ricb::cli
