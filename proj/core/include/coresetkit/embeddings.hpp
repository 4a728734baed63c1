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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace coresetkit {

// n x d single-precision feature matrix, row-major, with one unique patch id
// per row. Immutable once constructed; the constructor enforces every
// invariant (n >= 1, d >= 1, finite values, ids unique and sized n).
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data,
                  std::vector<std::string> ids,
                  nlohmann::json metadata = nlohmann::json::object());

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const float> data() const { return data_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }

  // Free-form provenance recorded by the producer (e.g. preprocessing).
  const nlohmann::json& metadata() const { return metadata_; }

  // Squared Euclidean distance between two rows, accumulated in double over
  // feature index order.
  double SquaredDistance(std::size_t a, std::size_t b) const;

  friend bool operator==(const EmbeddingMatrix&,
                         const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t dim_;
  std::vector<float> data_;
  std::vector<std::string> ids_;
  nlohmann::json metadata_;
};

inline constexpr int kEmbeddingFormatVersion = 1;
inline constexpr const char* kEmbeddingFormatName = "coresetkit-emb";

// `.emb` layout: one UTF-8 JSON header line terminated by '\n', then the
// float32 payload in little-endian row-major order (n * d * 4 bytes).
//
// Header keys: format, version, n, d, dtype ("f32"), ids, metadata.
void WriteEmbeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix ReadEmbeddings(const std::filesystem::path& path);

// In-memory variants of the above, used by the file functions.
std::string EncodeEmbeddings(const EmbeddingMatrix& m);
EmbeddingMatrix DecodeEmbeddings(std::string_view bytes);

}  // namespace coresetkit
