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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coresetkit/raster.hpp"

namespace coresetkit::metrics {

// Instances are matched when their IoU strictly exceeds this threshold. Above
// one half a ground-truth instance can overlap at most one prediction that
// well, so the matching is unique without an assignment solver.
inline constexpr double kMatchIou = 0.5;

struct MatchedPair {
  std::uint32_t gt = 0;
  std::uint32_t pred = 0;
  double iou = 0.0;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;         // ascending gt label
  std::vector<std::uint32_t> unmatched_gt;    // false negatives, ascending
  std::vector<std::uint32_t> unmatched_pred;  // false positives, ascending

  std::size_t tp() const { return pairs.size(); }
  std::size_t fp() const { return unmatched_pred.size(); }
  std::size_t fn() const { return unmatched_gt.size(); }

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

MatchResult MatchInstances(const LabelMask& gt, const LabelMask& pred);

// (sum of matched IoU) / (TP + FP/2 + FN/2). Zero when there are instances but
// no match; 1 when both masks are empty.
double PanopticQuality(const MatchResult& m);

// Segmentation quality (mean matched IoU) and recognition quality (F1).
double SegmentationQuality(const MatchResult& m);
double RecognitionQuality(const MatchResult& m);

struct ImageMetrics {
  double iou = 0.0;        // pixel-level, binarized foreground
  double dice = 0.0;       // pixel-level, binarized foreground
  double precision = 0.0;  // instance-level, TP / (TP + FP)
  double recall = 0.0;     // instance-level, TP / (TP + FN)
  double accuracy = 0.0;   // pixel-level foreground/background agreement
  double pq = 0.0;

  friend bool operator==(const ImageMetrics&, const ImageMetrics&) = default;
};

inline constexpr std::array<std::string_view, 6> kMetricNames = {
    "iou", "dice", "precision", "recall", "accuracy", "pq"};

// Metric i in kMetricNames order.
double MetricAt(const ImageMetrics& m, std::size_t i);

// Computes iou/dice/precision/recall/accuracy; pq is filled in as well so a
// single call yields the full row.
ImageMetrics PairwiseMetrics(const LabelMask& gt, const LabelMask& pred);

struct NamedMetrics {
  std::string image;
  ImageMetrics values;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (divisor n)
};

struct MetricsReport {
  std::vector<NamedMetrics> per_image;
  std::array<MeanStd, 6> aggregate{};  // kMetricNames order

  const MeanStd& operator[](std::string_view metric) const;
};

// Mean and population std per metric, summed in input order. Throws
// InvalidArgument on an empty list.
MetricsReport Aggregate(std::vector<NamedMetrics> per_image);

}  // namespace coresetkit::metrics
