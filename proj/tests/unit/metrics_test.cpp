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
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "coresetkit/error.hpp"
#include "reference.hpp"
#include "synthetic.hpp"

namespace coresetkit::metrics {
namespace {

void Fill(LabelMask& m, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w,
          std::uint32_t label) {
  for (std::size_t r = r0; r < r0 + h; ++r) {
    for (std::size_t c = c0; c < c0 + w; ++c) m.at(r, c) = label;
  }
}

TEST(MatchInstancesTest, IdentityMatchesEverything) {
  LabelMask gt(20, 20);
  Fill(gt, 2, 2, 5, 5, 3);
  const auto m = MatchInstances(gt, gt);
  ASSERT_EQ(m.tp(), 1u);
  EXPECT_EQ(m.pairs[0], (MatchedPair{3, 3, 1.0}));
  EXPECT_EQ(m.fp(), 0u);
  EXPECT_EQ(m.fn(), 0u);
}

TEST(MatchInstancesTest, ShiftedSquareBelowThresholdIsNotMatched) {
  LabelMask gt(20, 20), pred(20, 20);
  Fill(gt, 0, 0, 10, 10, 1);
  Fill(pred, 0, 4, 10, 10, 1);  // overlap 60, union 140
  const auto m = MatchInstances(gt, pred);
  EXPECT_EQ(m.tp(), 0u);
  EXPECT_EQ(m.unmatched_gt, std::vector<std::uint32_t>{1});
  EXPECT_EQ(m.unmatched_pred, std::vector<std::uint32_t>{1});
  EXPECT_NEAR(PairwiseMetrics(gt, pred).iou, 60.0 / 140.0, 1e-12);
}

TEST(MatchInstancesTest, ExactlyHalfIsNotAMatch) {
  LabelMask gt(4, 4), pred(4, 4);
  Fill(gt, 0, 0, 2, 2, 1);   // 4 px
  Fill(pred, 0, 0, 2, 1, 1);  // 2 px inside: IoU = 2/4
  EXPECT_EQ(MatchInstances(gt, pred).tp(), 0u);
}

TEST(MatchInstancesTest, EmptyPredictionLeavesAllFalseNegatives) {
  LabelMask gt(30, 30), pred(30, 30);
  Fill(gt, 0, 0, 3, 3, 1);
  Fill(gt, 10, 10, 3, 3, 2);
  Fill(gt, 20, 20, 3, 3, 9);
  const auto m = MatchInstances(gt, pred);
  EXPECT_EQ(m.tp(), 0u);
  EXPECT_EQ(m.unmatched_gt, (std::vector<std::uint32_t>{1, 2, 9}));
  EXPECT_EQ(m.fp(), 0u);
}

TEST(MatchInstancesTest, ShapeMismatchThrows) {
  EXPECT_THROW(MatchInstances(LabelMask(3, 3), LabelMask(3, 4)), InvalidArgument);
  EXPECT_THROW(PairwiseMetrics(LabelMask(3, 3), LabelMask(4, 3)), InvalidArgument);
}

TEST(MatchInstancesTest, AgreesWithExhaustiveAssignment) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto gt = testing::RandomMask(12, 12, 6, gen());
    const auto pred = testing::RandomMask(12, 12, 6, gen());
    const auto m = MatchInstances(gt, pred);
    const auto best = reference::OptimalAssignment(gt, pred);
    ASSERT_EQ(m.pairs.size(), best.pairs.size());
    for (std::size_t k = 0; k < m.pairs.size(); ++k) {
      ASSERT_EQ(m.pairs[k].gt, best.pairs[k].first);
      ASSERT_EQ(m.pairs[k].pred, best.pairs[k].second);
    }
  }
}

TEST(PanopticQualityTest, HandComputedExamples) {
  MatchResult perfect{{{1, 1, 1.0}}, {}, {}};
  EXPECT_EQ(PanopticQuality(perfect), 1.0);
  MatchResult one_fp{{{1, 1, 0.6}}, {}, {7}};
  EXPECT_NEAR(PanopticQuality(one_fp), 0.4, 1e-12);
  MatchResult none{{}, {1, 2}, {3}};
  EXPECT_EQ(PanopticQuality(none), 0.0);
  EXPECT_EQ(PanopticQuality(MatchResult{}), 1.0);
}

TEST(PanopticQualityTest, FromMasks) {
  LabelMask gt(20, 20), pred(20, 20);
  Fill(gt, 0, 0, 10, 10, 1);
  Fill(pred, 0, 0, 10, 6, 4);     // IoU 60/100
  Fill(pred, 15, 15, 3, 3, 5);    // stray prediction
  const auto m = MatchInstances(gt, pred);
  ASSERT_EQ(m.tp(), 1u);
  EXPECT_NEAR(m.pairs[0].iou, 0.6, 1e-15);
  EXPECT_NEAR(PanopticQuality(m), 0.4, 1e-12);
  EXPECT_NEAR(PairwiseMetrics(gt, pred).pq, 0.4, 1e-12);
}

TEST(PanopticQualityTest, BoundedBySqAndRq) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto gt = testing::RandomMask(10, 10, 5, gen());
    const auto pred = testing::RandomMask(10, 10, 5, gen());
    const auto m = MatchInstances(gt, pred);
    if (m.tp() == 0) continue;
    const double pq = PanopticQuality(m);
    EXPECT_NEAR(pq, SegmentationQuality(m) * RecognitionQuality(m), 1e-12);
    EXPECT_LE(pq, SegmentationQuality(m) + 1e-15);
    EXPECT_LE(pq, RecognitionQuality(m) + 1e-15);
  }
}

TEST(PairwiseMetricsTest, IdentityScoresOne) {
  const auto gt = testing::DiskMask(40, 40, 5, 1);
  const auto r = PairwiseMetrics(gt, gt);
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) EXPECT_EQ(MetricAt(r, k), 1.0);
}

TEST(PairwiseMetricsTest, HalfOverlapExample) {
  LabelMask gt(10, 20), pred(10, 20);
  Fill(gt, 0, 0, 10, 10, 1);   // 100 px
  Fill(pred, 0, 5, 10, 10, 1);  // 100 px, 50 overlap
  const auto r = PairwiseMetrics(gt, pred);
  EXPECT_NEAR(r.iou, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.dice, 0.5, 1e-12);
  EXPECT_NEAR(r.accuracy, 100.0 / 200.0, 1e-12);
}

TEST(PairwiseMetricsTest, EmptyConventions) {
  const LabelMask empty(8, 8);
  const auto both = PairwiseMetrics(empty, empty);
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) EXPECT_EQ(MetricAt(both, k), 1.0);

  LabelMask some(8, 8);
  Fill(some, 0, 0, 2, 2, 1);
  const auto hallucinated = PairwiseMetrics(empty, some);
  EXPECT_EQ(hallucinated.iou, 0.0);
  EXPECT_EQ(hallucinated.dice, 0.0);
  EXPECT_EQ(hallucinated.precision, 0.0);
  EXPECT_EQ(hallucinated.recall, 0.0);
  EXPECT_EQ(hallucinated.pq, 0.0);
  EXPECT_NEAR(hallucinated.accuracy, 60.0 / 64.0, 1e-15);

  const auto missed = PairwiseMetrics(some, empty);
  EXPECT_EQ(missed.iou, 0.0);
  EXPECT_EQ(missed.precision, 0.0);
  EXPECT_EQ(missed.recall, 0.0);
  EXPECT_EQ(missed.pq, 0.0);
  EXPECT_NEAR(missed.accuracy, 60.0 / 64.0, 1e-15);
}

TEST(PairwiseMetricsTest, DiceIouIdentityAndRange) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto gt = testing::RandomMask(9, 11, 4, gen());
    const auto pred = testing::RandomMask(9, 11, 4, gen());
    const auto r = PairwiseMetrics(gt, pred);
    ASSERT_NEAR(r.dice, 2.0 * r.iou / (1.0 + r.iou), 1e-12);
    for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
      ASSERT_GE(MetricAt(r, k), 0.0);
      ASSERT_LE(MetricAt(r, k), 1.0);
    }
  }
}

LabelMask Relabel(const LabelMask& m, const std::map<std::uint32_t, std::uint32_t>& to) {
  LabelMask out = m;
  for (auto& v : out.data()) {
    if (v) v = to.at(v);
  }
  return out;
}

LabelMask Transpose(const LabelMask& m) {
  LabelMask out(m.width(), m.height());
  for (std::size_t r = 0; r < m.height(); ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) out.at(c, r) = m.at(r, c);
  }
  return out;
}

TEST(PairwiseMetricsTest, InvariantUnderRelabelingAndTransposition) {
  std::mt19937_64 gen(19);
  std::map<std::uint32_t, std::uint32_t> perm;
  for (std::uint32_t l = 1; l <= 6; ++l) perm[l] = 1000 - 13 * l;
  for (int trial = 0; trial < 100; ++trial) {
    const auto gt = testing::RandomMask(10, 13, 6, gen());
    const auto pred = testing::RandomMask(10, 13, 6, gen());
    const auto base = PairwiseMetrics(gt, pred);
    EXPECT_EQ(PairwiseMetrics(Relabel(gt, perm), Relabel(pred, perm)), base);
    EXPECT_EQ(PairwiseMetrics(Transpose(gt), Transpose(pred)), base);
  }
}

TEST(AggregateTest, MeanAndPopulationStd) {
  ImageMetrics a, b;
  a.iou = 0.2;
  b.iou = 0.4;
  const auto report = Aggregate({{"a", a}, {"b", b}});
  EXPECT_NEAR(report["iou"].mean, 0.3, 1e-12);
  EXPECT_NEAR(report["iou"].std, 0.1, 1e-12);
  EXPECT_EQ(report.per_image.size(), 2u);
  EXPECT_THROW(report["f1"], InvalidArgument);
}

TEST(AggregateTest, SingleImageHasZeroStdAndEmptyThrows) {
  ImageMetrics a;
  a.pq = 0.7;
  const auto report = Aggregate({{"a", a}});
  EXPECT_EQ(report["pq"].mean, 0.7);
  EXPECT_EQ(report["pq"].std, 0.0);
  EXPECT_THROW(Aggregate({}), InvalidArgument);
}

TEST(AggregateTest, NearlyInvariantUnderPermutation) {
  ImageMetrics a, b, c;
  a.dice = 0.1;
  b.dice = 0.7;
  c.dice = 0.33;
  const auto x = Aggregate({{"a", a}, {"b", b}, {"c", c}});
  const auto y = Aggregate({{"c", c}, {"a", a}, {"b", b}});
  EXPECT_NEAR(x["dice"].mean, y["dice"].mean, 1e-12);
  EXPECT_NEAR(x["dice"].std, y["dice"].std, 1e-12);
}

}  // namespace
}  // namespace coresetkit::metrics
