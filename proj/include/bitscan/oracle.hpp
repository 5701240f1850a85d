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

/** \file oracle.hpp
 *  \brief Exact full-precision baseline: exhaustive float cosine scan.
 *
 *  This is the ground truth the binary engine is measured against, so it
 *  optimizes for trustworthiness over speed: double accumulation
 *  throughout, no approximation, loud failure on zero-norm inputs.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "bitscan/errors.hpp"
#include "bitscan/topk.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

/** Cosine similarity in [-1, 1]. Rejects zero-norm inputs: the quotient is
 *  undefined there and a silent convention would poison the baseline. */
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(a.dim(), b.dim());
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double x = a.values[i];
    const double y = b.values[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0) throw ZeroNorm("lhs");
  if (nb == 0.0) throw ZeroNorm("rhs");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/** Exhaustive top-k by descending cosine, ties by insertion ordinal. */
inline RankedList exact_search(std::span<const CorpusRecord> corpus,
                               const QueryRecord& query, std::uint32_t k) {
  if (k < 1) {
    throw InvalidParams("k must be >= 1");
  }
  struct Entry {
    double score;
    std::size_t ord;
  };
  struct Better {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.score != b.score) return a.score > b.score;
      return a.ord < b.ord;
    }
  };
  double qnorm = 0.0;
  for (const float x : query.vector.values) {
    qnorm += static_cast<double>(x) * static_cast<double>(x);
  }
  if (qnorm == 0.0) {
    throw ZeroNorm(query.query_id);
  }

  TopK<Entry, Better> selector(k);
  for (std::size_t ord = 0; ord < corpus.size(); ++ord) {
    double score;
    try {
      score = cosine(query.vector, corpus[ord].vector);
    } catch (const ZeroNorm&) {
      // query norm is known nonzero, so the offender is the document
      throw ZeroNorm(corpus[ord].doc_id);
    }
    selector.offer({score, ord});
  }

  RankedList out;
  out.query_id = query.query_id;
  out.k = k;
  for (const Entry& e : selector.take_sorted()) {
    out.hits.push_back({corpus[e.ord].doc_id, e.score, 1.0 - e.score});
  }
  return out;
}

/** Fraction of the oracle's top-k the candidate list also retrieved. */
inline double recall_vs_oracle(const RankedList& binary_results,
                               const RankedList& oracle_results,
                               std::uint32_t k) {
  if (binary_results.query_id != oracle_results.query_id) {
    throw QueryMismatch(binary_results.query_id, oracle_results.query_id);
  }
  if (k < 1) {
    throw InvalidParams("k must be >= 1");
  }
  std::unordered_set<std::string_view> oracle_top;
  const std::size_t ok =
      std::min<std::size_t>(k, oracle_results.hits.size());
  for (std::size_t i = 0; i < ok; ++i) {
    oracle_top.insert(oracle_results.hits[i].doc_id);
  }
  const std::size_t bk =
      std::min<std::size_t>(k, binary_results.hits.size());
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < bk; ++i) {
    overlap += oracle_top.count(binary_results.hits[i].doc_id);
  }
  return static_cast<double>(overlap) / static_cast<double>(k);
}

}  // namespace bitscan
