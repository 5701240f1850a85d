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

/** \file synthetic.hpp
 *  \brief Deterministic clustered corpus generator for benchmarks.
 *
 *  The construction, fixed so a seed reproduces bit-identical data on any
 *  IEEE-754 platform:
 *   - random stream: splitmix64; uniform doubles are (x >> 11) * 2^-53
 *   - gaussian: sum of 12 uniforms minus 6 (Irwin-Hall approximation).
 *     Chosen over Box-Muller because it avoids libm transcendentals whose
 *     rounding differs across platforms; sqrt is correctly rounded
 *     everywhere, so normalization is exact too.
 *   - cluster centers: gaussian vectors normalized to the unit sphere
 *   - documents: center + magnitude * unit_direction, with magnitude
 *     spread * (0.25 + 3.5u) for uniform u, so noise radii vary widely
 *     and the nearest-neighbor structure is well conditioned
 *   - queries: one per cluster, the exact center
 *   - judgments: every same-cluster doc is grade 1; the quarter of the
 *     cluster closest to the query by exact cosine (ties by insertion
 *     order) is upgraded to grade 2
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bitscan/errors.hpp"
#include "bitscan/oracle.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

/** splitmix64: the fixed random stream behind synthetic data. */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /** Uniform double in [0, 1), 53 significant bits. */
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /** Irwin-Hall(12) gaussian approximation: mean 0, variance 1. */
  double next_gaussian() {
    double sum = 0.0;
    for (int i = 0; i < 12; ++i) sum += next_double();
    return sum - 6.0;
  }

 private:
  std::uint64_t state_;
};

struct SyntheticParams {
  std::uint32_t clusters = 10;
  std::uint32_t per_cluster = 1000;
  std::uint32_t dim = 1536;
  double spread = 0.1;
  std::uint64_t seed = 42;
};

struct SyntheticDataset {
  std::vector<CorpusRecord> corpus;
  std::vector<QueryRecord> queries;
  RelevanceJudgments qrels;
};

namespace detail {

inline std::vector<float> unit_gaussian_vector(SplitMix64& rng,
                                               std::uint32_t dim) {
  std::vector<double> g(dim);
  double norm_sq = 0.0;
  for (std::uint32_t i = 0; i < dim; ++i) {
    g[i] = rng.next_gaussian();
    norm_sq += g[i] * g[i];
  }
  // Irwin-Hall over >= 8 dims makes an exactly-zero vector unreachable in
  // practice; regenerate on the degenerate draw anyway.
  if (norm_sq == 0.0) {
    return unit_gaussian_vector(rng, dim);
  }
  const double inv_norm = 1.0 / std::sqrt(norm_sq);
  std::vector<float> out(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    out[i] = static_cast<float>(g[i] * inv_norm);
  }
  return out;
}

}  // namespace detail

/** Generates a clustered corpus, one query per cluster, and graded labels.
 *  Deterministic given the seed. spread 0 collapses every document onto
 *  its cluster center. */
inline SyntheticDataset generate_synthetic(const SyntheticParams& params) {
  if (params.clusters < 2) {
    throw InvalidParams("clusters must be >= 2");
  }
  if (params.per_cluster < 1) {
    throw InvalidParams("per_cluster must be >= 1");
  }
  if (params.dim < 8) {
    throw InvalidParams("dim must be >= 8");
  }
  if (params.spread < 0.0 || !std::isfinite(params.spread)) {
    throw InvalidParams("spread must be finite and >= 0");
  }

  SplitMix64 rng(params.seed);
  SyntheticDataset out;
  out.corpus.reserve(static_cast<std::size_t>(params.clusters) *
                     params.per_cluster);
  out.queries.reserve(params.clusters);

  for (std::uint32_t c = 0; c < params.clusters; ++c) {
    const std::vector<float> center =
        detail::unit_gaussian_vector(rng, params.dim);

    QueryRecord query;
    query.query_id = "q" + std::to_string(c);
    query.vector = EmbeddingVector(center);

    const std::size_t cluster_first = out.corpus.size();
    for (std::uint32_t d = 0; d < params.per_cluster; ++d) {
      const std::vector<float> direction =
          detail::unit_gaussian_vector(rng, params.dim);
      const double magnitude =
          params.spread * (0.25 + 3.5 * rng.next_double());
      CorpusRecord rec;
      rec.doc_id = "c" + std::to_string(c) + "_d" + std::to_string(d);
      rec.vector.values.resize(params.dim);
      for (std::uint32_t i = 0; i < params.dim; ++i) {
        rec.vector.values[i] = static_cast<float>(
            static_cast<double>(center[i]) +
            magnitude * static_cast<double>(direction[i]));
      }
      rec.metadata.emplace("cluster", std::to_string(c));
      out.corpus.push_back(std::move(rec));
    }

    // grade 1 for the cluster, grade 2 for the nearest quarter by cosine
    struct Scored {
      double score;
      std::size_t ord;
    };
    std::vector<Scored> scored;
    scored.reserve(params.per_cluster);
    for (std::size_t ord = cluster_first; ord < out.corpus.size(); ++ord) {
      scored.push_back({cosine(query.vector, out.corpus[ord].vector), ord});
    }
    std::sort(scored.begin(), scored.end(),
              [](const Scored& a, const Scored& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.ord < b.ord;
              });
    const std::size_t quartile = params.per_cluster / 4;
    for (std::size_t rank = 0; rank < scored.size(); ++rank) {
      const std::uint32_t grade = rank < quartile ? 2 : 1;
      out.qrels.add(query.query_id, out.corpus[scored[rank].ord].doc_id,
                    grade);
    }

    out.queries.push_back(std::move(query));
  }
  return out;
}

}  // namespace bitscan
