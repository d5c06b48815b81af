// Copyright 2026 The trajforge Authors
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

#ifndef TRAJFORGE__REPORT_HPP_
#define TRAJFORGE__REPORT_HPP_

#include <string>
#include <vector>

#include "trajforge/experiment.hpp"
#include "trajforge/io.hpp"

namespace trajforge {

// fraction, seed, method, brier_fde, min_ade, min_fde, miss_rate and the
// rel_* percentages (empty on scratch rows).
CsvTable ppt_table(const PptExperiment& ex);
// Seed means per (fraction, method): fraction, method, n_seeds and the four metrics.
CsvTable fraction_table(const PptExperiment& ex);
// fraction, seed, method, epoch, brier_fde.
CsvTable convergence_table(const PptExperiment& ex);
// setting, seed, n_samples and the four metrics.
CsvTable ablation_table(const std::vector<AblationRow>& rows);
// Seed means per setting, in first-appearance order.
CsvTable ablation_summary(const std::vector<AblationRow>& rows);

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

// Static SVG line chart with axes, tick labels and a legend.
std::string line_chart_svg(const ChartSpec& spec, const std::vector<ChartSeries>& series);

// Mean Brier-FDE vs labeled fraction, one line per method.
std::string fraction_chart(const PptExperiment& ex);
// Mean validation Brier-FDE vs epoch at the largest fraction, one line per method.
std::string convergence_chart(const PptExperiment& ex);

}  // namespace trajforge

#endif  // TRAJFORGE__REPORT_HPP_
