// Copyright 2026 The CoresetKit Authors.
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

#include "coresetkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "coresetkit/error.hpp"

namespace coresetkit::metrics {
namespace {

void CheckShapes(const LabelMask& gt, const LabelMask& pred) {
  if (!gt.SameShape(pred) || gt.channels() != 1 || pred.channels() != 1) {
    throw InvalidArgument("ground-truth and prediction masks differ in shape");
  }
}

// 0/0 ratios: perfect when the side that would be penalised is empty too.
double RatioOr(double num, double den, bool vacuous) {
  if (den > 0.0) return num / den;
  return vacuous ? 1.0 : 0.0;
}

}  // namespace

MatchResult MatchInstances(const LabelMask& gt, const LabelMask& pred) {
  CheckShapes(gt, pred);
  std::unordered_map<std::uint32_t, std::uint64_t> gt_area;
  std::unordered_map<std::uint32_t, std::uint64_t> pred_area;
  std::unordered_map<std::uint64_t, std::uint64_t> overlap;
  const auto& g = gt.data();
  const auto& p = pred.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i]) ++gt_area[g[i]];
    if (p[i]) ++pred_area[p[i]];
    if (g[i] && p[i]) ++overlap[(std::uint64_t{g[i]} << 32) | p[i]];
  }

  MatchResult result;
  std::unordered_set<std::uint32_t> matched_gt;
  std::unordered_set<std::uint32_t> matched_pred;
  for (const auto& [key, inter] : overlap) {
    const auto gl = static_cast<std::uint32_t>(key >> 32);
    const auto pl = static_cast<std::uint32_t>(key);
    const std::uint64_t uni = gt_area[gl] + pred_area[pl] - inter;
    // IoU > 1/2 in exact integer arithmetic.
    if (2 * inter > uni) {
      result.pairs.push_back(
          {gl, pl, static_cast<double>(inter) / static_cast<double>(uni)});
      matched_gt.insert(gl);
      matched_pred.insert(pl);
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.gt < b.gt; });
  for (const auto& [label, area] : gt_area) {
    if (!matched_gt.contains(label)) result.unmatched_gt.push_back(label);
  }
  for (const auto& [label, area] : pred_area) {
    if (!matched_pred.contains(label)) result.unmatched_pred.push_back(label);
  }
  std::sort(result.unmatched_gt.begin(), result.unmatched_gt.end());
  std::sort(result.unmatched_pred.begin(), result.unmatched_pred.end());
  return result;
}

double PanopticQuality(const MatchResult& m) {
  const double tp = static_cast<double>(m.tp());
  const double denom = tp + 0.5 * static_cast<double>(m.fp()) +
                       0.5 * static_cast<double>(m.fn());
  if (denom == 0.0) return 1.0;
  double iou_sum = 0.0;
  for (const auto& pair : m.pairs) iou_sum += pair.iou;
  return iou_sum / denom;
}

double SegmentationQuality(const MatchResult& m) {
  if (m.tp() == 0) return (m.fp() == 0 && m.fn() == 0) ? 1.0 : 0.0;
  double iou_sum = 0.0;
  for (const auto& pair : m.pairs) iou_sum += pair.iou;
  return iou_sum / static_cast<double>(m.tp());
}

double RecognitionQuality(const MatchResult& m) {
  const double tp = static_cast<double>(m.tp());
  const double denom = tp + 0.5 * static_cast<double>(m.fp()) +
                       0.5 * static_cast<double>(m.fn());
  return denom == 0.0 ? 1.0 : tp / denom;
}

double MetricAt(const ImageMetrics& m, std::size_t i) {
  switch (i) {
    case 0: return m.iou;
    case 1: return m.dice;
    case 2: return m.precision;
    case 3: return m.recall;
    case 4: return m.accuracy;
    case 5: return m.pq;
    default: throw InvalidArgument("metric index out of range");
  }
}

ImageMetrics PairwiseMetrics(const LabelMask& gt, const LabelMask& pred) {
  CheckShapes(gt, pred);
  std::uint64_t both = 0, gt_only = 0, pred_only = 0, neither = 0;
  const auto& g = gt.data();
  const auto& p = pred.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool a = g[i] != 0;
    const bool b = p[i] != 0;
    if (a && b) {
      ++both;
    } else if (a) {
      ++gt_only;
    } else if (b) {
      ++pred_only;
    } else {
      ++neither;
    }
  }
  const auto tp_px = static_cast<double>(both);
  const auto err_px = static_cast<double>(gt_only + pred_only);
  const bool both_empty = (both + gt_only + pred_only) == 0;

  ImageMetrics out;
  out.iou = RatioOr(tp_px, tp_px + err_px, both_empty);
  out.dice = RatioOr(2.0 * tp_px, 2.0 * tp_px + err_px, both_empty);
  out.accuracy = g.empty() ? 1.0
                           : static_cast<double>(both + neither) /
                                 static_cast<double>(g.size());

  const MatchResult match = MatchInstances(gt, pred);
  const auto tp = static_cast<double>(match.tp());
  out.precision = RatioOr(tp, tp + static_cast<double>(match.fp()), match.fn() == 0);
  out.recall = RatioOr(tp, tp + static_cast<double>(match.fn()), match.fp() == 0);
  out.pq = PanopticQuality(match);
  return out;
}

const MeanStd& MetricsReport::operator[](std::string_view metric) const {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == metric) return aggregate[i];
  }
  throw InvalidArgument("unknown metric '" + std::string(metric) + "'");
}

MetricsReport Aggregate(std::vector<NamedMetrics> per_image) {
  if (per_image.empty()) throw InvalidArgument("cannot aggregate zero images");
  MetricsReport report;
  const auto n = static_cast<double>(per_image.size());
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    double sum = 0.0;
    for (const auto& row : per_image) sum += MetricAt(row.values, k);
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& row : per_image) {
      const double dev = MetricAt(row.values, k) - mean;
      sq += dev * dev;
    }
    report.aggregate[k] = {mean, std::sqrt(sq / n)};
  }
  report.per_image = std::move(per_image);
  return report;
}

}  // namespace coresetkit::metrics
