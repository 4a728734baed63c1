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

#include "coresetkit/embeddings.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "coresetkit/error.hpp"

namespace coresetkit {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

std::uint32_t ToLittleEndian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) |
           (v >> 24);
  }
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim,
                                 std::vector<float> data,
                                 std::vector<std::string> ids,
                                 nlohmann::json metadata)
    : rows_(rows),
      dim_(dim),
      data_(std::move(data)),
      ids_(std::move(ids)),
      metadata_(std::move(metadata)) {
  if (rows_ == 0 || dim_ == 0) {
    throw InvalidArgument("embedding matrix needs n >= 1 and d >= 1");
  }
  if (data_.size() != rows_ * dim_) {
    throw InvalidArgument("embedding data holds " +
                          std::to_string(data_.size()) + " values, expected " +
                          std::to_string(rows_ * dim_));
  }
  if (ids_.size() != rows_) {
    throw InvalidArgument("embedding matrix has " + std::to_string(rows_) +
                          " rows but " + std::to_string(ids_.size()) + " ids");
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids_.size());
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) {
      throw InvalidArgument("duplicate patch id '" + id + "'");
    }
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw InvalidArgument("non-finite embedding value in row " +
                            std::to_string(i / dim_));
    }
  }
  if (!metadata_.is_object()) {
    throw InvalidArgument("embedding metadata must be a JSON object");
  }
}

double EmbeddingMatrix::SquaredDistance(std::size_t a, std::size_t b) const {
  const float* pa = data_.data() + a * dim_;
  const float* pb = data_.data() + b * dim_;
  double sum = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double diff = static_cast<double>(pa[k]) - static_cast<double>(pb[k]);
    sum += diff * diff;
  }
  return sum;
}

std::string EncodeEmbeddings(const EmbeddingMatrix& m) {
  nlohmann::json header = {
      {"format", kEmbeddingFormatName},
      {"version", kEmbeddingFormatVersion},
      {"n", m.rows()},
      {"d", m.dim()},
      {"dtype", "f32"},
      {"ids", m.ids()},
      {"metadata", m.metadata()},
  };
  std::string out = header.dump();
  out.push_back('\n');
  const std::size_t offset = out.size();
  out.resize(offset + m.data().size() * 4);
  char* dst = out.data() + offset;
  for (float value : m.data()) {
    const std::uint32_t bits = ToLittleEndian(std::bit_cast<std::uint32_t>(value));
    std::memcpy(dst, &bits, 4);
    dst += 4;
  }
  return out;
}

EmbeddingMatrix DecodeEmbeddings(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw FormatError("embedding file has no header line");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed embedding header: ") + e.what());
  }
  if (!header.is_object() || header.value("format", "") != kEmbeddingFormatName) {
    throw FormatError("not a coresetkit embedding file");
  }
  if (header.value("version", 0) != kEmbeddingFormatVersion) {
    throw FormatError("unsupported embedding format version");
  }
  if (header.value("dtype", "") != "f32") {
    throw FormatError("unsupported embedding dtype");
  }
  const auto& jn = header["n"];
  const auto& jd = header["d"];
  const auto& jids = header["ids"];
  if (!jn.is_number_unsigned() || !jd.is_number_unsigned() || !jids.is_array()) {
    throw FormatError("embedding header needs unsigned n, d and an ids array");
  }
  const auto n = jn.get<std::size_t>();
  const auto d = jd.get<std::size_t>();
  if (jids.size() != n) {
    throw FormatError("embedding header lists " + std::to_string(jids.size()) +
                      " ids for n=" + std::to_string(n));
  }
  const auto payload = bytes.substr(newline + 1);
  if (d != 0 && n > std::numeric_limits<std::size_t>::max() / 4 / d) {
    throw FormatError("embedding header dimensions overflow");
  }
  if (payload.size() != n * d * 4) {
    throw FormatError("embedding payload has " + std::to_string(payload.size()) +
                      " bytes, header implies " + std::to_string(n * d * 4));
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& id : jids) {
    if (!id.is_string()) throw FormatError("embedding ids must be strings");
    ids.push_back(id.get<std::string>());
  }
  std::vector<float> data(n * d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, payload.data() + 4 * i, 4);
    data[i] = std::bit_cast<float>(ToLittleEndian(bits));
  }
  nlohmann::json metadata = header.contains("metadata") ? header["metadata"]
                                                        : nlohmann::json::object();
  try {
    return EmbeddingMatrix(n, d, std::move(data), std::move(ids),
                           std::move(metadata));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

void WriteEmbeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  const std::string bytes = EncodeEmbeddings(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

EmbeddingMatrix ReadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes{std::istreambuf_iterator<char>(in),
                    std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("failed reading " + path.string());
  return DecodeEmbeddings(bytes);
}

}  // namespace coresetkit
