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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coresetkit/dq.hpp"
#include "coresetkit/embeddings.hpp"
#include "coresetkit/metrics.hpp"
#include "coresetkit/replay.hpp"

// JSON/CSV documents exchanged between the CLI commands and the trainer.
// Every subset listing (patches.json, coreset.json, mix.json) carries a
// "kind" field; ReadPatchListing knows where each kind keeps its patch ids,
// and falls back to a bare "patches" array for hand-written listings.
namespace coresetkit::documents {

// Serialized JSON with two-space indentation and a trailing newline.
std::string Dump(const nlohmann::json& j);

std::string ReadText(const std::filesystem::path& path);
nlohmann::json ReadJson(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a partial document.
void WriteTextAtomic(const std::filesystem::path& path, std::string_view text);
void WriteJson(const std::filesystem::path& path, const nlohmann::json& j);

// Patch ids of any subset listing.
std::vector<std::string> ReadPatchListing(const std::filesystem::path& path);
std::vector<std::string> PatchListingFromJson(const nlohmann::json& j);

// --- patches.json -----------------------------------------------------------

struct LedgerEntry {
  std::string id;
  std::string image;  // file name relative to the ledger's image_dir
  std::string mask;   // file name relative to the ledger's mask_dir
};

struct PatchLedger {
  std::size_t window = 0;
  std::size_t stride = 0;
  std::string image_dir;
  std::string mask_dir;
  std::vector<LedgerEntry> entries;
};

nlohmann::json ToJson(const PatchLedger& ledger);
PatchLedger LedgerFromJson(const nlohmann::json& j);

// --- coreset.json -----------------------------------------------------------

struct CoresetDocument {
  std::string method;  // "dq" or "random"
  double rate = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::string>> bins;  // by patch id
  std::vector<std::string> selection;          // by patch id
};

CoresetDocument MakeCoresetDocument(const EmbeddingMatrix& m,
                                    const dq::BinPartition& bins,
                                    const dq::CoresetSelection& sel);
nlohmann::json ToJson(const CoresetDocument& doc);
CoresetDocument CoresetFromJson(const nlohmann::json& j);

// Index form against an embedding matrix; unknown ids throw FormatError.
dq::BinPartition BinsByIndex(const EmbeddingMatrix& m,
                             const std::vector<std::vector<std::string>>& bins);
dq::CoresetSelection SelectionByIndex(const EmbeddingMatrix& m,
                                      const CoresetDocument& doc,
                                      const dq::BinPartition& bins);

// --- mix.json ---------------------------------------------------------------

nlohmann::json ToJson(const replay::ReplayMix& mix);
replay::ReplayMix MixFromJson(const nlohmann::json& j);

// --- report.json / report.csv ----------------------------------------------

nlohmann::json ToJson(const metrics::MetricsReport& report);
metrics::MetricsReport ReportFromJson(const nlohmann::json& j);

// Columns image,iou,dice,precision,recall,accuracy,pq then MEAN and STD rows.
std::string ToCsv(const metrics::MetricsReport& report);

// Shortest decimal text that round-trips the double.
std::string FormatNumber(double value);

}  // namespace coresetkit::documents
