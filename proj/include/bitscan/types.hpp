/*
 * Copyright 2026 The bitscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

/** \file types.hpp
 *  \brief Core value vocabulary: embeddings, packed binary codes, corpus and
 *         query records, relevance judgments, and ranked result lists.
 *
 *  Every type here is an immutable value object after construction and safe
 *  to share across threads.
 */

#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitscan/errors.hpp"

namespace bitscan {

/** Flat string-to-string document metadata. Ordered for stable serialization. */
using Metadata = std::map<std::string, std::string>;

/** Dense float embedding. Storage is float32; arithmetic that matters
 *  (cosine, calibration statistics) accumulates in double. */
struct EmbeddingVector {
  std::vector<float> values;

  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<float> v) : values(std::move(v)) {}
  EmbeddingVector(std::initializer_list<float> v) : values(v) {}

  [[nodiscard]] std::uint32_t dim() const {
    return static_cast<std::uint32_t>(values.size());
  }
};

/** Throws unless `v` has the expected dimension and only finite values. */
inline void validate_vector(const EmbeddingVector& v,
                            std::uint32_t expected_dim) {
  if (v.dim() != expected_dim) {
    throw DimensionMismatch(v.dim(), expected_dim);
  }
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (!std::isfinite(v.values[i])) {
      throw NonFiniteValue(i);
    }
  }
}

/** One bit per dimension, packed little-endian into 64-bit words.
 *
 *  Invariants maintained by every constructor and mutator:
 *   - words().size() == (dim + 63) / 64
 *   - all bits at positions >= dim are zero
 *
 *  Padding is forced to zero at construction, never masked at read, so the
 *  distance kernels can stay branch-free.
 */
class BinaryCode {
 public:
  BinaryCode() = default;

  /** All-zero code of `dim` bits. */
  explicit BinaryCode(std::uint32_t dim)
      : dim_(dim), words_(words_needed(dim), 0) {}

  /** Reconstructs a code from raw words; padding bits are cleared. */
  BinaryCode(std::uint32_t dim, std::span<const std::uint64_t> words)
      : dim_(dim), words_(words.begin(), words.end()) {
    if (words_.size() != words_needed(dim)) {
      throw InvalidParams("word count " + std::to_string(words_.size()) +
                          " does not match dim " + std::to_string(dim));
    }
    mask_padding();
  }

  [[nodiscard]] static constexpr std::size_t words_needed(std::uint32_t dim) {
    return (static_cast<std::size_t>(dim) + 63) / 64;
  }

  /** Mask selecting the meaningful bits of the final word. */
  [[nodiscard]] static constexpr std::uint64_t tail_mask(std::uint32_t dim) {
    const std::uint32_t used = dim & 63u;
    return used == 0 ? ~0ull : (~0ull >> (64 - used));
  }

  [[nodiscard]] std::uint32_t dim() const { return dim_; }
  [[nodiscard]] std::size_t word_count() const { return words_.size(); }
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }
  [[nodiscard]] const std::uint64_t* data() const { return words_.data(); }

  [[nodiscard]] bool bit(std::uint32_t i) const {
    assert(i < dim_);
    return (words_[i >> 6] >> (i & 63u)) & 1u;
  }

  void set_bit(std::uint32_t i) {
    assert(i < dim_);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63u);
  }

  void clear_bit(std::uint32_t i) {
    assert(i < dim_);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63u));
  }

  friend bool operator==(const BinaryCode& a, const BinaryCode& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_;
  }

 private:
  void mask_padding() {
    if (!words_.empty()) {
      words_.back() &= tail_mask(dim_);
    }
  }

  std::uint32_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

/** One corpus document: id, embedding, optional flat metadata. */
struct CorpusRecord {
  std::string doc_id;
  EmbeddingVector vector;
  Metadata metadata;
};

/** One query: id, embedding, optional natural-language instruction. */
struct QueryRecord {
  std::string query_id;
  EmbeddingVector vector;
  std::string instruction;
};

/** Graded relevance labels keyed by (query_id, doc_id).
 *  Absent pairs have grade 0. Grades are non-negative integers. */
class RelevanceJudgments {
 public:
  using GradeMap = std::unordered_map<std::string, std::uint32_t>;

  /** Registers a judgment; duplicate (query, doc) pairs are rejected. */
  void add(const std::string& query_id, const std::string& doc_id,
           std::uint32_t grade) {
    auto [it, inserted] = entries_[query_id].emplace(doc_id, grade);
    (void)it;
    if (!inserted) {
      throw DuplicateQrel(query_id, doc_id);
    }
  }

  [[nodiscard]] std::uint32_t grade(const std::string& query_id,
                                    const std::string& doc_id) const {
    auto q = entries_.find(query_id);
    if (q == entries_.end()) return 0;
    auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
  }

  /** All judgments for one query, or nullptr if the query is unjudged. */
  [[nodiscard]] const GradeMap* for_query(const std::string& query_id) const {
    auto q = entries_.find(query_id);
    return q == entries_.end() ? nullptr : &q->second;
  }

  /** Number of docs with grade > 0 for this query. */
  [[nodiscard]] std::size_t total_relevant(const std::string& query_id) const {
    auto q = entries_.find(query_id);
    if (q == entries_.end()) return 0;
    std::size_t n = 0;
    for (const auto& [doc, g] : q->second) {
      (void)doc;
      if (g > 0) ++n;
    }
    return n;
  }

  [[nodiscard]] std::size_t query_count() const { return entries_.size(); }
  [[nodiscard]] std::size_t pair_count() const {
    std::size_t n = 0;
    for (const auto& [q, m] : entries_) {
      (void)q;
      n += m.size();
    }
    return n;
  }

 private:
  std::unordered_map<std::string, GradeMap> entries_;
};

/** One retrieved document with its ranking score and raw distance. */
struct ScoredHit {
  std::string doc_id;
  double score = 0.0;
  double distance = 0.0;
};

/** Ordered results for one query: score descending, ties by the order in
 *  which documents were inserted. */
struct RankedList {
  std::string query_id;
  std::vector<ScoredHit> hits;
  std::uint32_t k = 0;  // requested depth
};

}  // namespace bitscan
