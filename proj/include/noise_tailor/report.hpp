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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noise_tailor/diamond.hpp"
#include "noise_tailor/errorgen.hpp"
#include "noise_tailor/gateset.hpp"

namespace noise_tailor {

/// Quality figures of one cycle against its ideal target.
struct GateMetric {
  int label = 0;
  std::string gate;
  double e_f = 0.0;
  double eps_diamond = 0.0;
  double sdp_gap = 0.0;
  DiamondMethod method = DiamondMethod::sdp;
  double ratio = 1.0;  // eps_diamond / e_F, 1 when e_F vanishes
  bool above_threshold = false;
  bool generator_ok = true;  // false when the logarithm hit a branch cut
  Vector h;                  // Hamiltonian rates, index 0 unused
  Vector s;                  // stochastic rates, index 0 unused
  ErrorBudget budget;
};

/// Per-cycle e_F, diamond distance (SDP), error generator and budget. The
/// bound e_F <= eps <= upper is checked for every cycle; a violation
/// throws InvariantViolation.
std::vector<GateMetric> gate_metrics(const GateSet& gs, double threshold = 0.01);

/// CSV with a fixed header. Every table starts with the producing module
/// and method columns.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip text of a double, for tables.
std::string fmt(double v);

struct BarSeries {
  std::string name;
  std::vector<double> values;
};

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<BarSeries> series;
  bool stacked = false;
  bool log_y = false;
  std::optional<double> threshold;  // dashed horizontal line
};

std::string svg_bar_chart(const BarChart& chart);

struct Heatmap {
  std::string title;
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  Matrix values;
  bool diverging = false;  // symmetric colour scale around zero
};

std::string svg_heatmap(const Heatmap& map);

}  // namespace noise_tailor
