#include "ricb_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ricb_cli/format.hpp"

namespace ricb::cli {

namespace {

struct Rgb {
  int r, g, b;
};

Rgb parse_hex(const char* s) {
  unsigned r = 0, g = 0, b = 0;
  std::sscanf(s, "#%02x%02x%02x", &r, &g, &b);
  return {static_cast<int>(r), static_cast<int>(g), static_cast<int>(b)};
}

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

constexpr int kPanel = 300;
constexpr int kMargin = 50;
constexpr int kBar = 16;
constexpr int kPanelStride = kPanel + kMargin + kBar + 70;

}  // namespace

std::string color_for(double t) {
  if (std::isnan(t)) return "#d0d0d0";
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * (kColorStops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), kColorStops.size() - 2);
  const double f = pos - static_cast<double>(i);
  const Rgb a = parse_hex(kColorStops[i]);
  const Rgb b = parse_hex(kColorStops[i + 1]);
  auto mix = [f](int x, int y) { return static_cast<int>(std::lround(x + f * (y - x))); };
  return hex({mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)});
}

std::string render_heatmaps(const std::vector<Heatmap>& panels, const std::string& x_label,
                            const std::string& y_label) {
  const int width = static_cast<int>(panels.size()) * kPanelStride + kMargin;
  const int height = kPanel + 2 * kMargin + 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Heatmap& h = panels[p];
    const int x0 = kMargin + static_cast<int>(p) * kPanelStride;
    const int y0 = kMargin;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : h.values) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const double span = hi > lo ? hi - lo : 1.0;
    const std::size_t nx = h.xs.size();
    const std::size_t ny = h.ys.size();
    const double cw = static_cast<double>(kPanel) / static_cast<double>(std::max<std::size_t>(nx, 1));
    const double ch = static_cast<double>(kPanel) / static_cast<double>(std::max<std::size_t>(ny, 1));
    os << "<text x=\"" << x0 + kPanel / 2 << "\" y=\"" << y0 - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(h.title) << "</text>\n";
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const double v = h.values[j * nx + i];
        const double t = std::isfinite(v) ? (v - lo) / span : std::nan("");
        os << "<rect x=\"" << num(x0 + i * cw) << "\" y=\"" << num(y0 + kPanel - (j + 1) * ch)
           << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
           << color_for(t) << "\"/>\n";
      }
    }
    os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << kPanel << "\" height=\""
       << kPanel << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (nx > 0 && ny > 0) {
      os << "<text x=\"" << x0 << "\" y=\"" << y0 + kPanel + 14 << "\">" << num(h.xs.front())
         << "</text>\n";
      os << "<text x=\"" << x0 + kPanel << "\" y=\"" << y0 + kPanel + 14
         << "\" text-anchor=\"end\">" << num(h.xs.back()) << "</text>\n";
      os << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 + kPanel << "\" text-anchor=\"end\">"
         << num(h.ys.front()) << "</text>\n";
      os << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 + 10 << "\" text-anchor=\"end\">"
         << num(h.ys.back()) << "</text>\n";
    }
    os << "<text x=\"" << x0 + kPanel / 2 << "\" y=\"" << y0 + kPanel + 30
       << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    os << "<text x=\"" << x0 - 30 << "\" y=\"" << y0 + kPanel / 2 << "\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 " << x0 - 30 << ' ' << y0 + kPanel / 2 << ")\">"
       << escape(y_label) << "</text>\n";

    const int bx = x0 + kPanel + 12;
    constexpr int kSteps = 32;
    for (int s = 0; s < kSteps; ++s) {
      const double t = (s + 0.5) / kSteps;
      os << "<rect x=\"" << bx << "\" y=\"" << num(y0 + kPanel - (s + 1) * (kPanel / double(kSteps)))
         << "\" width=\"" << kBar << "\" height=\"" << num(kPanel / double(kSteps) + 0.5)
         << "\" fill=\"" << color_for(t) << "\"/>\n";
    }
    os << "<text x=\"" << bx + kBar + 4 << "\" y=\"" << y0 + 10 << "\">"
       << (std::isfinite(hi) ? format_sci(hi) : "n/a") << "</text>\n";
    os << "<text x=\"" << bx + kBar + 4 << "\" y=\"" << y0 + kPanel << "\">"
       << (std::isfinite(lo) ? format_sci(lo) : "n/a") << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_lines(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<Series>& series) {
  const int w = 520;
  const int h = 360;
  const int left = 70, right = 130, top = 40, bottom = 50;
  const int pw = w - left - right;
  const int ph = h - top - bottom;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  if (!(yhi > ylo)) yhi = ylo + 1.0;
  ylo = std::min(ylo, 0.0);
  auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double y) { return top + ph - (y - ylo) / (yhi - ylo) * ph; };

  const char* colours[] = {kColorStops[0], kColorStops[2], kColorStops[4]};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << top - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << top + ph + 14 << "\">" << num(xlo) << "</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 14 << "\" text-anchor=\"end\">"
     << num(xhi) << "</text>\n";
  os << "<text x=\"" << left - 4 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">"
     << format_sci(ylo) << "</text>\n";
  os << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">"
     << format_sci(yhi) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text x=\"15\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << top + ph / 2 << ")\">" << escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = colours[k % 3];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    const int ly = top + 15 + static_cast<int>(k) * 16;
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly << "\">" << escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ricb::cli
