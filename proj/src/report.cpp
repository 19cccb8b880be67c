// Copyright 2026 The noise-tailor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noise_tailor/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace noise_tailor {

std::vector<GateMetric> gate_metrics(const GateSet& gs, double threshold) {
  const auto& ideal = ideal_cycles();
  std::vector<GateMetric> out;
  for (int g = 0; g < kNumCycles; ++g) {
    const SuperOp& gate = gs.gates[static_cast<std::size_t>(g)];
    const SuperOp& target = ideal[static_cast<std::size_t>(g)];
    GateMetric m;
    m.label = g;
    m.gate = CycleLabel::from_index(g).name();
    m.e_f = std::max(0.0, process_infidelity(gate, target));
    const DiamondResult d = diamond_distance(gate, target);
    m.eps_diamond = d.value;
    m.sdp_gap = d.primal_dual_gap;
    m.method = d.method;
    // The SDP is accurate to its gap; fitted channels sit near the lower
    // bound, so allow that much slack.
    const double slack = std::max(1e-8, 10.0 * std::abs(d.primal_dual_gap));
    const BoundReport b = check_bounds(m.e_f, m.eps_diamond, 2, m.gate, slack);
    m.ratio = b.ratio;
    m.above_threshold = m.eps_diamond > threshold;
    try {
      const ErrorGenerator eg = error_generator(gate, target);
      m.h = eg.h;
      m.s = eg.s;
      m.budget = error_budget(eg.h, eg.s);
    } catch (const InvalidInput&) {
      m.generator_ok = false;
      m.h = Vector::Zero(16);
      m.s = Vector::Zero(16);
    }
    out.push_back(std::move(m));
  }
  return out;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw InvalidInput("CSV row width mismatch");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string svg_bar_chart(const BarChart& chart) {
  const double left = 70, right = 150, top = 40, bottom = 70;
  const double group_w = std::max(40.0, 18.0 * static_cast<double>(chart.series.size()) + 12.0);
  const double plot_w = group_w * static_cast<double>(chart.categories.size());
  const double plot_h = 300;
  const double width = left + plot_w + right, height = top + plot_h + bottom;

  double lo = 0.0, hi = 0.0, min_pos = 1e300;
  for (std::size_t c = 0; c < chart.categories.size(); ++c) {
    double stack = 0.0;
    for (const auto& s : chart.series) {
      const double v = c < s.values.size() ? s.values[c] : 0.0;
      if (v > 0) min_pos = std::min(min_pos, v);
      if (chart.stacked) {
        stack += std::max(0.0, v);
        hi = std::max(hi, stack);
      } else {
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
    }
  }
  if (chart.threshold) hi = std::max(hi, *chart.threshold);
  const bool log_y = chart.log_y && min_pos < 1e300 && hi > 0;
  double ymin = lo, ymax = hi > lo ? hi * 1.1 : lo + 1.0;
  if (log_y) {
    ymin = std::pow(10.0, std::floor(std::log10(min_pos)));
    ymax = std::pow(10.0, std::ceil(std::log10(hi * 1.01)));
  }
  auto y_of = [&](double v) {
    double t;
    if (log_y) {
      t = (std::log10(std::max(v, ymin)) - std::log10(ymin)) /
          (std::log10(ymax) - std::log10(ymin));
    } else {
      t = (v - ymin) / (ymax - ymin);
    }
    return top + plot_h * (1.0 - std::clamp(t, 0.0, 1.0));
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
    << num(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(left) << "\" y=\"20\" font-size=\"14\">" << escape(chart.title)
    << "</text>\n";
  o << "<text transform=\"translate(15," << num(top + plot_h / 2) << ") rotate(-90)\""
    << " text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";
  // Axes and ticks.
  o << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
    << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y_of(log_y ? ymin : 0.0)) << "\" x2=\""
    << num(left + plot_w) << "\" y2=\"" << num(y_of(log_y ? ymin : 0.0))
    << "\" stroke=\"black\"/>\n";
  std::vector<double> ticks;
  if (log_y) {
    for (double t = ymin; t <= ymax * 1.0001; t *= 10.0) ticks.push_back(t);
  } else {
    for (int i = 0; i <= 5; ++i) ticks.push_back(ymin + (ymax - ymin) * i / 5.0);
  }
  for (double t : ticks) {
    o << "<text x=\"" << num(left - 5) << "\" y=\"" << num(y_of(t) + 4)
      << "\" text-anchor=\"end\">" << tick(t) << "</text>\n";
  }
  const double n_series = static_cast<double>(chart.series.size());
  const double bar_w = chart.stacked ? group_w - 12.0 : (group_w - 12.0) / std::max(1.0, n_series);
  for (std::size_t c = 0; c < chart.categories.size(); ++c) {
    const double gx = left + group_w * static_cast<double>(c) + 6.0;
    double base = log_y ? ymin : 0.0;
    for (std::size_t s = 0; s < chart.series.size(); ++s) {
      const auto& ser = chart.series[s];
      const double v = c < ser.values.size() ? ser.values[c] : 0.0;
      double y0, y1, x;
      if (chart.stacked) {
        y0 = y_of(base);
        base += std::max(0.0, v);
        y1 = y_of(base);
        x = gx;
      } else {
        y0 = y_of(log_y ? ymin : 0.0);
        y1 = y_of(v);
        x = gx + bar_w * static_cast<double>(s);
      }
      o << "<rect x=\"" << num(x) << "\" y=\"" << num(std::min(y0, y1)) << "\" width=\""
        << num(bar_w) << "\" height=\"" << num(std::abs(y0 - y1)) << "\" fill=\""
        << kPalette[s % 8] << "\"><title>" << escape(ser.name) << " " << escape(chart.categories[c])
        << ": " << tick(v) << "</title></rect>\n";
    }
    o << "<text transform=\"translate(" << num(gx + (group_w - 12.0) / 2) << ","
      << num(top + plot_h + 12) << ") rotate(35)\">" << escape(chart.categories[c]) << "</text>\n";
  }
  if (chart.threshold) {
    const double y = y_of(*chart.threshold);
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w)
      << "\" y2=\"" << num(y) << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
    o << "<text x=\"" << num(left + plot_w + 4) << "\" y=\"" << num(y + 4)
      << "\" fill=\"red\">threshold " << tick(*chart.threshold) << "</text>\n";
  }
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const double y = top + 20.0 + 16.0 * static_cast<double>(s);
    o << "<rect x=\"" << num(left + plot_w + 10) << "\" y=\"" << num(y - 9)
      << "\" width=\"10\" height=\"10\" fill=\"" << kPalette[s % 8] << "\"/>\n";
    o << "<text x=\"" << num(left + plot_w + 24) << "\" y=\"" << num(y) << "\">"
      << escape(chart.series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const Heatmap& map) {
  const auto nr = static_cast<double>(map.rows.size());
  const auto nc = static_cast<double>(map.cols.size());
  if (map.values.rows() != static_cast<Eigen::Index>(map.rows.size()) ||
      map.values.cols() != static_cast<Eigen::Index>(map.cols.size())) {
    throw DimensionMismatch("heat map labels do not match values");
  }
  const double cell = 26, left = 80, top = 60;
  const double width = left + cell * nc + 120, height = top + cell * nr + 30;
  const double scale = std::max(map.values.cwiseAbs().maxCoeff(), 1e-300);
  auto colour = [&](double v) {
    char buf[16];
    if (map.diverging) {
      const double t = std::clamp(v / scale, -1.0, 1.0);
      const int fade = static_cast<int>(255.0 * (1.0 - std::abs(t)));
      if (t >= 0) std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
      else std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
    } else {
      const double t = std::clamp(v / scale, 0.0, 1.0);
      const int fade = static_cast<int>(255.0 * (1.0 - t));
      std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
    }
    return std::string(buf);
  };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
    << num(height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(left) << "\" y=\"18\" font-size=\"14\">" << escape(map.title)
    << "</text>\n";
  for (std::size_t c = 0; c < map.cols.size(); ++c) {
    o << "<text x=\"" << num(left + cell * static_cast<double>(c) + cell / 2) << "\" y=\""
      << num(top - 6) << "\" text-anchor=\"middle\">" << escape(map.cols[c]) << "</text>\n";
  }
  for (std::size_t r = 0; r < map.rows.size(); ++r) {
    const double y = top + cell * static_cast<double>(r);
    o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + cell / 2 + 4)
      << "\" text-anchor=\"end\">" << escape(map.rows[r]) << "</text>\n";
    for (std::size_t c = 0; c < map.cols.size(); ++c) {
      const double v = map.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      o << "<rect x=\"" << num(left + cell * static_cast<double>(c)) << "\" y=\"" << num(y)
        << "\" width=\"" << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"" << colour(v)
        << "\" stroke=\"#ddd\"><title>" << escape(map.rows[r]) << " " << escape(map.cols[c])
        << ": " << tick(v) << "</title></rect>\n";
    }
  }
  o << "<text x=\"" << num(left + cell * nc + 10) << "\" y=\"" << num(top + 12)
    << "\">max |v| = " << tick(scale) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace noise_tailor
