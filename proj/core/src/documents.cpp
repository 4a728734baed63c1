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

#include <charconv>
#include <fstream>
#include <iterator>
#include <unordered_map>

#include "coresetkit/error.hpp"

namespace coresetkit::documents {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> StringArray(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw FormatError(std::string("missing array '") + key + "'");
  }
  std::vector<std::string> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    if (!v.is_string()) throw FormatError(std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void ExpectKind(const json& j, std::string_view kind) {
  if (!j.is_object() || j.value("kind", "") != kind) {
    throw FormatError("expected a '" + std::string(kind) + "' document");
  }
}

std::unordered_map<std::string_view, std::size_t> IndexOf(const EmbeddingMatrix& m) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) index.emplace(m.id(i), i);
  return index;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json ReadJson(const fs::path& path) {
  const std::string text = ReadText(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void WriteTextAtomic(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

void WriteJson(const fs::path& path, const json& j) { WriteTextAtomic(path, Dump(j)); }

std::vector<std::string> PatchListingFromJson(const json& j) {
  if (!j.is_object()) throw FormatError("patch listing must be a JSON object");
  const std::string kind = j.value("kind", "");
  if (kind == "patches") {
    std::vector<std::string> ids;
    for (const auto& entry : LedgerFromJson(j).entries) ids.push_back(entry.id);
    return ids;
  }
  if (kind == "coreset") return StringArray(j, "selection");
  if (kind == "replay_mix") return MixFromJson(j).Entries();
  if (j.contains("patches")) return StringArray(j, "patches");
  throw FormatError("unrecognised patch listing (kind '" + kind + "')");
}

std::vector<std::string> ReadPatchListing(const fs::path& path) {
  try {
    return PatchListingFromJson(ReadJson(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

json ToJson(const PatchLedger& ledger) {
  json entries = json::array();
  for (const auto& e : ledger.entries) {
    entries.push_back({{"id", e.id}, {"image", e.image}, {"mask", e.mask}});
  }
  return {{"kind", "patches"},
          {"window", ledger.window},
          {"stride", ledger.stride},
          {"image_dir", ledger.image_dir},
          {"mask_dir", ledger.mask_dir},
          {"count", ledger.entries.size()},
          {"entries", std::move(entries)}};
}

PatchLedger LedgerFromJson(const json& j) {
  ExpectKind(j, "patches");
  PatchLedger ledger;
  try {
    ledger.window = j.at("window").get<std::size_t>();
    ledger.stride = j.at("stride").get<std::size_t>();
    ledger.image_dir = j.at("image_dir").get<std::string>();
    ledger.mask_dir = j.at("mask_dir").get<std::string>();
    for (const auto& e : j.at("entries")) {
      ledger.entries.push_back({e.at("id").get<std::string>(),
                                e.at("image").get<std::string>(),
                                e.at("mask").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed patch ledger: ") + e.what());
  }
  return ledger;
}

CoresetDocument MakeCoresetDocument(const EmbeddingMatrix& m,
                                    const dq::BinPartition& bins,
                                    const dq::CoresetSelection& sel) {
  CoresetDocument doc;
  doc.method = "dq";
  doc.rate = sel.rate;
  doc.seed = sel.seed;
  for (const auto& bin : bins.bins) {
    auto& ids = doc.bins.emplace_back();
    for (std::size_t idx : bin) ids.push_back(m.id(idx));
  }
  for (std::size_t idx : sel.selected) doc.selection.push_back(m.id(idx));
  return doc;
}

json ToJson(const CoresetDocument& doc) {
  return {{"kind", "coreset"},
          {"method", doc.method},
          {"rate", doc.rate},
          {"seed", doc.seed},
          {"n_bins", doc.bins.size()},
          {"bins", doc.bins},
          {"count", doc.selection.size()},
          {"selection", doc.selection}};
}

CoresetDocument CoresetFromJson(const json& j) {
  ExpectKind(j, "coreset");
  CoresetDocument doc;
  try {
    doc.method = j.at("method").get<std::string>();
    doc.rate = j.at("rate").get<double>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.bins = j.at("bins").get<std::vector<std::vector<std::string>>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed coreset: ") + e.what());
  }
  doc.selection = StringArray(j, "selection");
  return doc;
}

dq::BinPartition BinsByIndex(const EmbeddingMatrix& m,
                             const std::vector<std::vector<std::string>>& bins) {
  const auto index = IndexOf(m);
  dq::BinPartition out;
  out.source_n = m.rows();
  for (const auto& bin : bins) {
    auto& dst = out.bins.emplace_back();
    for (const auto& id : bin) {
      const auto it = index.find(id);
      if (it == index.end()) throw FormatError("bin lists unknown patch id '" + id + "'");
      dst.push_back(it->second);
    }
  }
  return out;
}

dq::CoresetSelection SelectionByIndex(const EmbeddingMatrix& m,
                                      const CoresetDocument& doc,
                                      const dq::BinPartition& bins) {
  const auto index = IndexOf(m);
  std::vector<std::size_t> bin_of(m.rows(), bins.bins.size());
  for (std::size_t b = 0; b < bins.bins.size(); ++b) {
    for (std::size_t idx : bins.bins[b]) bin_of[idx] = b;
  }
  dq::CoresetSelection sel;
  sel.rate = doc.rate;
  sel.seed = doc.seed;
  for (const auto& id : doc.selection) {
    const auto it = index.find(id);
    if (it == index.end()) throw FormatError("selection lists unknown patch id '" + id + "'");
    const std::size_t idx = it->second;
    const std::size_t b = bin_of[idx];
    if (sel.per_bin.empty() || sel.per_bin.back().bin != b) sel.per_bin.push_back({b, {}});
    sel.per_bin.back().indices.push_back(idx);
    sel.selected.push_back(idx);
  }
  return sel;
}

json ToJson(const replay::ReplayMix& mix) {
  return {{"kind", "replay_mix"},
          {"source_rate", mix.source_rate},
          {"provenance", mix.provenance},
          {"counts",
           {{"source", mix.source_patches.size()},
            {"target", mix.target_patches.size()},
            {"total", mix.size()}}},
          {"source_patches", mix.source_patches},
          {"target_patches", mix.target_patches}};
}

replay::ReplayMix MixFromJson(const json& j) {
  ExpectKind(j, "replay_mix");
  replay::ReplayMix mix;
  try {
    mix.source_rate = j.at("source_rate").get<double>();
    mix.provenance = j.value("provenance", "");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed replay mix: ") + e.what());
  }
  mix.source_patches = StringArray(j, "source_patches");
  mix.target_patches = StringArray(j, "target_patches");
  return mix;
}

json ToJson(const metrics::MetricsReport& report) {
  json rows = json::array();
  for (const auto& row : report.per_image) {
    json r = {{"image", row.image}};
    for (std::size_t k = 0; k < metrics::kMetricNames.size(); ++k) {
      r[std::string(metrics::kMetricNames[k])] = metrics::MetricAt(row.values, k);
    }
    rows.push_back(std::move(r));
  }
  json aggregate = json::object();
  for (std::size_t k = 0; k < metrics::kMetricNames.size(); ++k) {
    aggregate[std::string(metrics::kMetricNames[k])] = {
        {"mean", report.aggregate[k].mean}, {"std", report.aggregate[k].std}};
  }
  return {{"kind", "metrics_report"},
          {"std", "population"},
          {"images", report.per_image.size()},
          {"per_image", std::move(rows)},
          {"aggregate", std::move(aggregate)}};
}

metrics::MetricsReport ReportFromJson(const json& j) {
  ExpectKind(j, "metrics_report");
  std::vector<metrics::NamedMetrics> rows;
  try {
    for (const auto& r : j.at("per_image")) {
      metrics::NamedMetrics row;
      row.image = r.at("image").get<std::string>();
      row.values.iou = r.at("iou").get<double>();
      row.values.dice = r.at("dice").get<double>();
      row.values.precision = r.at("precision").get<double>();
      row.values.recall = r.at("recall").get<double>();
      row.values.accuracy = r.at("accuracy").get<double>();
      row.values.pq = r.at("pq").get<double>();
      rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed metrics report: ") + e.what());
  }
  return metrics::Aggregate(std::move(rows));
}

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InvalidArgument("cannot format number");
  return std::string(buf, ptr);
}

std::string ToCsv(const metrics::MetricsReport& report) {
  std::string out = "image";
  for (auto name : metrics::kMetricNames) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (const auto& row : report.per_image) {
    out += CsvField(row.image);
    for (std::size_t k = 0; k < metrics::kMetricNames.size(); ++k) {
      out += ',' + FormatNumber(metrics::MetricAt(row.values, k));
    }
    out += '\n';
  }
  out += "MEAN";
  for (const auto& a : report.aggregate) out += ',' + FormatNumber(a.mean);
  out += "\nSTD";
  for (const auto& a : report.aggregate) out += ',' + FormatNumber(a.std);
  out += '\n';
  return out;
}

}  // namespace coresetkit::documents
