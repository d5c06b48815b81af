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

#include "trajforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace trajforge {
namespace {

std::vector<std::string> metric_fields(const MetricsReport& r) {
  return {format_double(r.brier_fde), format_double(r.min_ade), format_double(r.min_fde),
          format_double(r.miss_rate)};
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

struct Mean {
  std::size_t n = 0;
  double brier = 0, ade = 0, fde = 0, miss = 0;
  void add(const MetricsReport& r) {
    ++n;
    brier += r.brier_fde;
    ade += r.min_ade;
    fde += r.min_fde;
    miss += r.miss_rate;
  }
  MetricsReport mean() const {
    MetricsReport r;
    const double d = static_cast<double>(n);
    r.brier_fde = brier / d;
    r.min_ade = ade / d;
    r.min_fde = fde / d;
    r.miss_rate = miss / d;
    return r;
  }
};

// Keeps first-appearance order of keys.
template <typename Key>
struct OrderedMeans {
  std::vector<Key> order;
  std::map<Key, Mean> means;
  void add(const Key& k, const MetricsReport& r) {
    if (!means.contains(k)) order.push_back(k);
    means[k].add(r);
  }
};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int prec = 3) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

CsvTable ppt_table(const PptExperiment& ex) {
  CsvTable t;
  t.header = {"fraction",      "seed",        "method",      "brier_fde",    "min_ade", "min_fde",
              "miss_rate",     "rel_brier_fde", "rel_min_ade", "rel_min_fde", "rel_miss_rate"};
  for (const auto& r : ex.rows) {
    std::vector<std::string> row = {format_double(r.fraction), std::to_string(r.seed), r.method};
    for (auto& f : metric_fields(r.val)) row.push_back(std::move(f));
    row.push_back(opt(r.rel_brier_fde));
    row.push_back(opt(r.rel_min_ade));
    row.push_back(opt(r.rel_min_fde));
    row.push_back(opt(r.rel_miss_rate));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable fraction_table(const PptExperiment& ex) {
  OrderedMeans<std::pair<double, std::string>> m;
  for (const auto& r : ex.rows) m.add({r.fraction, r.method}, r.val);
  CsvTable t;
  t.header = {"fraction", "method", "n_seeds", "brier_fde", "min_ade", "min_fde", "miss_rate"};
  for (const auto& k : m.order) {
    const Mean& mean = m.means.at(k);
    std::vector<std::string> row = {format_double(k.first), k.second, std::to_string(mean.n)};
    for (auto& f : metric_fields(mean.mean())) row.push_back(std::move(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable convergence_table(const PptExperiment& ex) {
  CsvTable t;
  t.header = {"fraction", "seed", "method", "epoch", "brier_fde"};
  for (const auto& c : ex.curves) {
    t.rows.push_back({format_double(c.fraction), std::to_string(c.seed), c.method,
                      std::to_string(c.epoch), format_double(c.brier_fde)});
  }
  return t;
}

CsvTable ablation_table(const std::vector<AblationRow>& rows) {
  CsvTable t;
  t.header = {"setting", "seed", "n_samples", "brier_fde", "min_ade", "min_fde", "miss_rate"};
  for (const auto& r : rows) {
    std::vector<std::string> row = {r.setting, std::to_string(r.seed), std::to_string(r.n_samples)};
    for (auto& f : metric_fields(r.val)) row.push_back(std::move(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable ablation_summary(const std::vector<AblationRow>& rows) {
  OrderedMeans<std::string> m;
  for (const auto& r : rows) m.add(r.setting, r.val);
  CsvTable t;
  t.header = {"setting", "n_seeds", "brier_fde", "min_ade", "min_fde", "miss_rate"};
  for (const auto& k : m.order) {
    const Mean& mean = m.means.at(k);
    std::vector<std::string> row = {k, std::to_string(mean.n)};
    for (auto& f : metric_fields(mean.mean())) row.push_back(std::move(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string line_chart_svg(const ChartSpec& spec, const std::vector<ChartSeries>& series) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto xval = [&](double x) { return spec.log_x ? std::log10(x) : x; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (spec.log_x && !(x > 0)) continue;
      x0 = std::min(x0, xval(x));
      x1 = std::max(x1, xval(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return kLeft + (xval(x) - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kW) + "\" height=\"" + px(kH) +
                    "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         esc(spec.title) + "</text>\n";
  out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks: decades on a log axis, five even steps otherwise.
  std::vector<double> xticks;
  if (spec.log_x) {
    for (double e = std::floor(x0); e <= std::ceil(x1) + 1e-9; e += 1.0) {
      if (e >= x0 - 1e-9 && e <= x1 + 1e-9) xticks.push_back(std::pow(10.0, e));
    }
  } else {
    for (int i = 0; i <= 4; ++i) xticks.push_back(x0 + (x1 - x0) * i / 4.0);
  }
  for (double x : xticks) {
    out += "<line x1=\"" + px(sx(x)) + "\" y1=\"" + px(kTop + ph) + "\" x2=\"" + px(sx(x)) + "\" y2=\"" +
           px(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + px(sx(x)) + "\" y=\"" + px(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           fmt(x) + "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = y0 + (y1 - y0) * i / 4.0;
    out += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(sy(y)) + "\" x2=\"" + px(kLeft) + "\" y2=\"" +
           px(sy(y)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(sy(y) + 4) + "\" text-anchor=\"end\">" + fmt(y) +
           "</text>\n";
  }
  out += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + px(kH - 12) + "\" text-anchor=\"middle\">" +
         esc(spec.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + px(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         px(kTop + ph / 2) + ")\">" + esc(spec.y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (spec.log_x && !(x > 0)) continue;
      if (!pts.empty()) pts += ' ';
      pts += px(sx(x)) + "," + px(sy(y));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts +
           "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    out += "<line x1=\"" + px(kLeft + pw + 12) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(kLeft + pw + 32) +
           "\" y2=\"" + px(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + px(kLeft + pw + 38) + "\" y=\"" + px(ly + 4) + "\">" + esc(series[i].name) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string fraction_chart(const PptExperiment& ex) {
  std::vector<ChartSeries> series;
  OrderedMeans<std::pair<std::string, double>> m;
  for (const auto& r : ex.rows) m.add({r.method, r.fraction}, r.val);
  for (const auto& k : m.order) {
    auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.name == k.first; });
    if (it == series.end()) {
      series.push_back({k.first, {}});
      it = series.end() - 1;
    }
    it->points.emplace_back(k.second, m.means.at(k).mean().brier_fde);
  }
  for (auto& s : series) std::sort(s.points.begin(), s.points.end());
  return line_chart_svg({"Brier-FDE vs labeled fraction", "labeled fraction", "Brier-FDE", true}, series);
}

std::string convergence_chart(const PptExperiment& ex) {
  double largest = 0.0;
  for (const auto& c : ex.curves) largest = std::max(largest, c.fraction);
  std::map<std::pair<std::string, int>, std::pair<double, int>> acc;
  std::vector<std::string> methods;
  for (const auto& c : ex.curves) {
    if (c.fraction != largest) continue;
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
    auto& a = acc[{c.method, c.epoch}];
    a.first += c.brier_fde;
    ++a.second;
  }
  std::vector<ChartSeries> series;
  for (const auto& method : methods) {
    ChartSeries s{method, {}};
    for (const auto& [key, a] : acc) {
      if (key.first == method) s.points.emplace_back(key.second, a.first / a.second);
    }
    series.push_back(std::move(s));
  }
  return line_chart_svg(
      {"Validation Brier-FDE per epoch (fraction " + fmt(largest) + ")", "epoch", "Brier-FDE", false}, series);
}

}  // namespace trajforge
