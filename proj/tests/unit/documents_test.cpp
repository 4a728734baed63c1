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

#include "coresetkit/documents.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "coresetkit/error.hpp"
#include "synthetic.hpp"

namespace coresetkit::documents {
namespace {

using testing::TempDir;

TEST(DocumentsTest, DumpIsIndentedWithTrailingNewline) {
  EXPECT_EQ(Dump({{"a", 1}}), "{\n  \"a\": 1\n}\n");
}

TEST(DocumentsTest, AtomicWriteLeavesNoTemporaries) {
  TempDir dir("doc");
  WriteTextAtomic(dir / "x.txt", "one");
  WriteTextAtomic(dir / "x.txt", "two");
  EXPECT_EQ(ReadText(dir / "x.txt"), "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(ReadText(dir / "missing"), IoError);
}

TEST(DocumentsTest, FormatNumberIsShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(1.0), "1");
  EXPECT_EQ(FormatNumber(1e-4), "1e-04");
  EXPECT_EQ(FormatNumber(250.0), "250");
  EXPECT_EQ(FormatNumber(1.0 / 3.0), "0.3333333333333333");
}

TEST(DocumentsTest, CoresetRoundTripAndIndexForm) {
  const auto m = testing::RandomMatrix(12, 3, 2);
  const auto bins = dq::FormBins(m, 3);
  const auto sel = dq::SampleCoreset(bins, 0.5, 4);
  const auto doc = MakeCoresetDocument(m, bins, sel);
  EXPECT_EQ(doc.method, "dq");
  EXPECT_EQ(doc.selection.size(), sel.selected.size());
  const auto j = ToJson(doc);
  EXPECT_EQ(j["kind"], "coreset");
  const auto back = CoresetFromJson(j);
  EXPECT_EQ(back.bins, doc.bins);
  EXPECT_EQ(back.selection, doc.selection);
  EXPECT_EQ(back.rate, 0.5);
  EXPECT_EQ(BinsByIndex(m, back.bins), bins);
  EXPECT_EQ(SelectionByIndex(m, back, bins).selected, sel.selected);
  EXPECT_EQ(PatchListingFromJson(j), doc.selection);

  auto bad = doc;
  bad.selection.push_back("nope:0:0");
  EXPECT_THROW(SelectionByIndex(m, bad, bins), FormatError);
}

TEST(DocumentsTest, LedgerAndMixListings) {
  PatchLedger ledger{224, 112, "images", "masks", {{"a:0:0", "a:0:0.png", "a:0:0.tif"}}};
  const auto lj = ToJson(ledger);
  EXPECT_EQ(lj["count"], 1);
  EXPECT_EQ(PatchListingFromJson(lj), std::vector<std::string>{"a:0:0"});
  EXPECT_EQ(LedgerFromJson(lj).entries[0].mask, "a:0:0.tif");

  replay::ReplayMix mix{0.1, {"s:0:0"}, {"t:0:0", "t:0:112"}, "c.json"};
  const auto mj = ToJson(mix);
  EXPECT_EQ(mj["counts"]["total"], 3);
  EXPECT_EQ(PatchListingFromJson(mj), (std::vector<std::string>{"s:0:0", "t:0:0", "t:0:112"}));
  EXPECT_EQ(MixFromJson(mj).provenance, "c.json");

  EXPECT_EQ(PatchListingFromJson({{"patches", {"x:1:2"}}}), std::vector<std::string>{"x:1:2"});
  EXPECT_THROW(PatchListingFromJson({{"kind", "other"}}), FormatError);
  EXPECT_THROW(PatchListingFromJson({{"kind", "coreset"}}), FormatError);
}

TEST(DocumentsTest, ReportJsonAndCsv) {
  metrics::ImageMetrics a{0.5, 2.0 / 3.0, 1.0, 0.5, 0.9, 0.25};
  metrics::ImageMetrics b{1, 1, 1, 1, 1, 1};
  const auto report = metrics::Aggregate({{"img_a", a}, {"img_b", b}});
  const auto back = ReportFromJson(ToJson(report));
  ASSERT_EQ(back.per_image.size(), 2u);
  EXPECT_EQ(back.per_image[0].values, a);
  EXPECT_EQ(back["iou"].mean, report["iou"].mean);
  EXPECT_EQ(ToJson(report)["std"], "population");

  const std::string csv = ToCsv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "image,iou,dice,precision,recall,accuracy,pq");
  EXPECT_NE(csv.find("\nimg_a,0.5,0.6666666666666666,1,0.5,0.9,0.25\n"), std::string::npos);
  EXPECT_NE(csv.find("\nMEAN,0.75,"), std::string::npos);
  EXPECT_NE(csv.find("\nSTD,0.25,"), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
}

}  // namespace
}  // namespace coresetkit::documents
