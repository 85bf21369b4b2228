/*
 * Copyright 2026 The mahood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// 2-D projection scatter with the training Gaussian's 1-SD and 2-SD
// covariance ellipses, written as a standalone SVG, plus the companion
// point table.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mahood/csv.hpp"
#include "mahood/dataset.hpp"
#include "mahood/gaussian.hpp"

namespace mahood {

enum class Series { kTrain, kIdTest, kOodTest };

inline const char* series_name(Series s) {
  switch (s) {
    case Series::kTrain: return "train";
    case Series::kIdTest: return "ID test";
    case Series::kOodTest: return "OOD test";
  }
  return "";
}

struct PlotPoint {
  std::string sample_id;
  double x = 0.0;
  double y = 0.0;
  Split split = Split::kTrain;
  std::optional<Label> label;  // test points only
  std::string tag;             // optional dataset tag, train points only

  Series series() const {
    if (split == Split::kTrain) return Series::kTrain;
    return label == Label::kOod ? Series::kOodTest : Series::kIdTest;
  }
};

struct PlotOptions {
  int width = 720;
  int height = 560;
  std::string title = "Mahalanobis projection";
  bool timestamp = true;
  int margin = 48;
};

struct EllipseCounts {
  std::size_t inside = 0;
  std::size_t outside = 0;
};

/// Points within (D <= 1) or beyond the 1-SD ellipse, per series.
inline std::map<Series, EllipseCounts> count_inside_one_sd(const GaussianModel& model,
                                                          const std::vector<PlotPoint>& points) {
  if (model.dim() != 2) throw DimensionError("plot needs 2-D features; try pca:2");
  std::map<Series, EllipseCounts> counts;
  for (auto s : {Series::kTrain, Series::kIdTest, Series::kOodTest}) counts[s];
  for (const auto& p : points) {
    const double d = mahalanobis(model, Eigen::Vector2d(p.x, p.y));
    auto& c = counts[p.series()];
    (d <= 1.0 ? c.inside : c.outside)++;
  }
  return counts;
}

inline void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& points) {
  csv::write_row(out, {"sample_id", "comp1", "comp2", "split", "label"});
  char x[32], y[32];
  for (const auto& p : points) {
    std::snprintf(x, sizeof x, "%.17g", p.x);
    std::snprintf(y, sizeof y, "%.17g", p.y);
    csv::write_row(out, {p.sample_id, x, y, to_string(p.split), p.label ? to_string(*p.label) : ""});
  }
}

namespace plot_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Okabe-Ito palette.
inline constexpr const char* kTagPalette[] = {"#0072B2", "#009E73", "#56B4E9", "#CC79A7",
                                              "#F0E442", "#000000", "#999999"};
inline const char* series_color(Series s) {
  switch (s) {
    case Series::kTrain: return "#0072B2";
    case Series::kIdTest: return "#009E73";
    case Series::kOodTest: return "#D55E00";
  }
  return "#000000";
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace plot_detail

/// Equal-aspect scatter; the y axis points up. Each ellipse element carries
/// its exact data-space geometry in data-* attributes.
inline void write_plot_svg(std::ostream& out, const GaussianModel& model,
                           const std::vector<PlotPoint>& points, const PlotOptions& opt = {}) {
  using namespace plot_detail;
  if (model.dim() != 2) throw DimensionError("plot needs 2-D features; try pca:2");
  const Ellipse e1 = covariance_ellipse(model, 1.0);
  const Ellipse e2 = covariance_ellipse(model, 2.0);

  // Data bounds cover every point and the 2-SD ellipse's bounding box.
  const double c = std::cos(e2.angle), s = std::sin(e2.angle);
  const double hx = std::hypot(e2.semi_axes[0] * c, e2.semi_axes[1] * s);
  const double hy = std::hypot(e2.semi_axes[0] * s, e2.semi_axes[1] * c);
  double xmin = e2.center[0] - hx, xmax = e2.center[0] + hx;
  double ymin = e2.center[1] - hy, ymax = e2.center[1] + hy;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span_x = std::max(xmax - xmin, 1e-12);
  const double span_y = std::max(ymax - ymin, 1e-12);
  const double plot_w = opt.width - 2.0 * opt.margin;
  const double plot_h = opt.height - 2.0 * opt.margin;
  const double scale = std::min(plot_w / span_x, plot_h / span_y);
  const double ox = opt.margin + (plot_w - scale * span_x) / 2.0;
  const double oy = opt.height - opt.margin - (plot_h - scale * span_y) / 2.0;
  auto sx = [&](double x) { return ox + scale * (x - xmin); };
  auto sy = [&](double y) { return oy - scale * (y - ymin); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (opt.timestamp) out << "<!-- generated " << utc_now() << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape(opt.title) << "</text>\n";

  std::map<std::string, const char*> tag_colors;
  for (const auto& p : points) {
    if (p.split == Split::kTrain && !p.tag.empty() && !tag_colors.count(p.tag)) {
      const auto i = tag_colors.size() % std::size(kTagPalette);
      tag_colors[p.tag] = kTagPalette[i];
    }
  }

  for (auto series : {Series::kTrain, Series::kIdTest, Series::kOodTest}) {
    out << "<g class=\"series\" data-series=\"" << series_name(series) << "\">\n";
    for (const auto& p : points) {
      if (p.series() != series) continue;
      const char* color = series_color(series);
      if (series == Series::kTrain && !p.tag.empty()) color = tag_colors[p.tag];
      const std::string cx = px(sx(p.x)), cy = px(sy(p.y));
      if (series == Series::kOodTest) {
        // Crosses for OOD so the series stays distinguishable without color.
        const double r = 3.5;
        const double X = sx(p.x), Y = sy(p.y);
        out << "<path d=\"M" << px(X - r) << ',' << px(Y - r) << "L" << px(X + r) << ','
            << px(Y + r) << "M" << px(X - r) << ',' << px(Y + r) << "L" << px(X + r) << ','
            << px(Y - r) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"><title>"
            << escape(p.sample_id) << "</title></path>\n";
      } else {
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3\" fill=\"" << color
            << "\" fill-opacity=\"" << (series == Series::kTrain ? "0.45" : "0.85") << "\"><title>"
            << escape(p.sample_id) << "</title></circle>\n";
      }
    }
    out << "</g>\n";
  }

  for (const Ellipse* e : {&e1, &e2}) {
    const double deg = -e->angle * 180.0 / std::numbers::pi;  // SVG y runs down
    out << "<ellipse class=\"covariance\" cx=\"" << px(sx(e->center[0])) << "\" cy=\""
        << px(sy(e->center[1])) << "\" rx=\"" << px(scale * e->semi_axes[0]) << "\" ry=\""
        << px(scale * e->semi_axes[1]) << "\" transform=\"rotate(" << px(deg) << ' '
        << px(sx(e->center[0])) << ' ' << px(sy(e->center[1]))
        << ")\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\""
        << (e->n_std == 2.0 ? " stroke-dasharray=\"6 4\"" : "") << " data-n-std=\""
        << num(e->n_std) << "\" data-center=\"" << num(e->center[0]) << ' ' << num(e->center[1])
        << "\" data-semi-axes=\"" << num(e->semi_axes[0]) << ' ' << num(e->semi_axes[1])
        << "\" data-angle=\"" << num(e->angle) << "\"/>\n";
  }

  // Legend.
  int ly = opt.margin;
  auto legend = [&](const std::string& text, const char* color) {
    out << "<rect x=\"" << opt.width - 150 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/><text x=\"" << opt.width - 134 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(text) << "</text>\n";
    ly += 16;
  };
  if (tag_colors.empty()) {
    legend(series_name(Series::kTrain), series_color(Series::kTrain));
  } else {
    for (const auto& [tag, color] : tag_colors) legend("train: " + tag, color);
  }
  legend(series_name(Series::kIdTest), series_color(Series::kIdTest));
  legend(series_name(Series::kOodTest), series_color(Series::kOodTest));
  out << "<text x=\"" << opt.width - 150 << "\" y=\"" << ly
      << "\" font-family=\"sans-serif\" font-size=\"12\">ellipses: 1 and 2 SD</text>\n";
  out << "</svg>\n";
}

}  // namespace mahood
