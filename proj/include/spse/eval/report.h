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

#ifndef SPSE_EVAL_REPORT_H_
#define SPSE_EVAL_REPORT_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spse::eval {

struct SnrBucket {
  const char* label;
  double lo;  // inclusive
  double hi;  // exclusive, except the top bucket
};

inline constexpr std::array<SnrBucket, 3> kSnrBuckets = {
    {{"-15~-5", -15.0, -5.0}, {"-5~5", -5.0, 5.0}, {"5~15", 5.0, 15.0}}};

// Index into kSnrBuckets, or -1 outside [-15, 15] dB.
int BucketOf(double snr_db);

struct UtteranceScore {
  std::string id;
  std::string system;
  double snr_in_db = 0.0;
  std::map<std::string, double> metrics;  // "sdr", "stoi", "pitch_acc", plug-ins
};

class MetricReport {
 public:
  void Add(UtteranceScore score) { rows_.push_back(std::move(score)); }
  const std::vector<UtteranceScore>& rows() const { return rows_; }

  // In first-seen order.
  std::vector<std::string> Systems() const;
  std::vector<std::string> Metrics() const;

  // Arithmetic mean over the system's utterances in `bucket` (-1 for all).
  // Empty when no utterance carries the metric there.
  std::optional<double> Mean(const std::string& system, const std::string& metric,
                             int bucket) const;

  // Rows are systems, columns metric x bucket then the overall average.
  std::string FormatTable() const;
  nlohmann::json ToJson() const;

 private:
  std::vector<UtteranceScore> rows_;
};

}  // namespace spse::eval

#endif  // SPSE_EVAL_REPORT_H_
