// Copyright 2026 The spse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spse/eval/report.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace spse::eval {

int BucketOf(double snr_db) {
  for (size_t b = 0; b < kSnrBuckets.size(); ++b) {
    const auto& k = kSnrBuckets[b];
    const bool top = b + 1 == kSnrBuckets.size();
    if (snr_db >= k.lo && (snr_db < k.hi || (top && snr_db <= k.hi))) return static_cast<int>(b);
  }
  return -1;
}

namespace {

void AddUnique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "-";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << *v;
  return os.str();
}

}  // namespace

std::vector<std::string> MetricReport::Systems() const {
  std::vector<std::string> out;
  for (const auto& r : rows_) AddUnique(out, r.system);
  return out;
}

std::vector<std::string> MetricReport::Metrics() const {
  std::vector<std::string> out;
  for (const char* m : {"sdr", "stoi", "pitch_acc"})
    for (const auto& r : rows_)
      if (r.metrics.count(m)) {
        AddUnique(out, m);
        break;
      }
  for (const auto& r : rows_)
    for (const auto& [m, v] : r.metrics) AddUnique(out, m);
  return out;
}

std::optional<double> MetricReport::Mean(const std::string& system, const std::string& metric,
                                         int bucket) const {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows_) {
    if (r.system != system || (bucket >= 0 && BucketOf(r.snr_in_db) != bucket)) continue;
    const auto it = r.metrics.find(metric);
    if (it == r.metrics.end()) continue;
    sum += it->second;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::string MetricReport::FormatTable() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"system"};
  const auto metrics = Metrics();
  for (const auto& m : metrics) {
    for (const auto& b : kSnrBuckets) header.push_back(m + "[" + b.label + "]");
    header.push_back(m + "[Avg]");
  }
  cells.push_back(header);
  for (const auto& sys : Systems()) {
    std::vector<std::string> row = {sys};
    for (const auto& m : metrics) {
      for (int b = 0; b < static_cast<int>(kSnrBuckets.size()); ++b) row.push_back(Cell(Mean(sys, m, b)));
      row.push_back(Cell(Mean(sys, m, -1)));
    }
    cells.push_back(row);
  }
  std::vector<size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      os << (c ? std::right : std::left) << std::setw(static_cast<int>(width[c])) << row[c];
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json MetricReport::ToJson() const {
  auto number = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  nlohmann::json j;
  j["utterances"] = nlohmann::json::array();
  for (const auto& r : rows_) {
    nlohmann::json u = {{"id", r.id}, {"system", r.system}, {"snr_in_db", r.snr_in_db}};
    for (const auto& [m, v] : r.metrics) u[m] = number(v);
    j["utterances"].push_back(u);
  }
  j["summary"] = nlohmann::json::object();
  for (const auto& sys : Systems()) {
    nlohmann::json s;
    for (const auto& m : Metrics()) {
      for (int b = 0; b < static_cast<int>(kSnrBuckets.size()); ++b) {
        const auto v = Mean(sys, m, b);
        s[m][kSnrBuckets[b].label] = v ? number(*v) : nlohmann::json();
      }
      const auto avg = Mean(sys, m, -1);
      s[m]["Avg"] = avg ? number(*avg) : nlohmann::json();
    }
    j["summary"][sys] = s;
  }
  return j;
}

}  // namespace spse::eval
