#pragma once

#include <array>
#include <string>
#include <vector>

namespace ricb::cli {

// Heatmap panels share one layout: x (delta) left to right, y (rho) bottom to
// top, one cell per grid point, colour bar on the right labelled with the
// panel's finite min and max. Colours interpolate linearly in RGB between the
// five stops of kColorStops, low to high; NaN cells are light grey.
inline constexpr std::array<const char*, 5> kColorStops = {
    "#440154", "#3b528b", "#21918c", "#5ec962", "#fde725"};

struct Heatmap {
  std::string title;
  std::vector<double> xs;
  std::vector<double> ys;
  // values[j * xs.size() + i] is the cell at (xs[i], ys[j]).
  std::vector<double> values;
};

std::string color_for(double t);  // t in [0, 1]
std::string render_heatmaps(const std::vector<Heatmap>& panels, const std::string& x_label,
                            const std::string& y_label);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Line plot; series colours cycle through the first, third and fifth stop.
std::string render_lines(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<Series>& series);

}  // namespace ricb::cli
