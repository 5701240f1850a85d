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

/** \file engine.hpp
 *  \brief Index-free binary search engine: append-only namespaces with
 *         tombstone deletes, snapshot-isolated exhaustive scans, and the
 *         instrumented twelve-stage query pipeline.
 *
 *  Writes append a packed code and publish a new row count with release
 *  semantics; a query loads the count once with acquire semantics and scans
 *  exactly that prefix. Readers never block the writer and vice versa.
 *  There is no index to build or rebuild: a document is queryable the
 *  moment insert() returns, and a delete takes effect the moment remove()
 *  returns.
 */

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitscan/append_column.hpp"
#include "bitscan/binarizer.hpp"
#include "bitscan/distance.hpp"
#include "bitscan/errors.hpp"
#include "bitscan/topk.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

/** How final scores are computed after candidate selection. */
enum class Scoring : std::uint8_t {
  kHammingOnly = 0,  ///< score = dim - hamming (uniform agreement)
  kIts = 1,          ///< entropy-weighted bit agreement
};

/** Query pipeline stages, in execution order. */
enum class Stage : std::size_t {
  kAuthorize = 0,
  kParseValidate,
  kValidateNamespace,
  kPrepareVector,
  kFetchData,
  kCalculateDistance,
  kSelectCandidates,
  kCalculateScores,
  kFetchCompleteData,
  kApplyMetadataFilter,
  kReorderFilter,
  kFormatResponse,
};

/** Per-stage wall-clock durations for one query, in milliseconds.
 *  Stages are timed back to back from one boundary timestamp to the next,
 *  so total() accounts for the full pipeline wall time. */
struct StageTimings {
  static constexpr std::size_t kCount = 12;

  static constexpr std::array<std::string_view, kCount> kNames = {
      "authorize",        "parse_validate",    "validate_namespace",
      "prepare_vector",   "fetch_data",        "calculate_distance",
      "select_candidates", "calculate_scores", "fetch_complete_data",
      "apply_metadata_filter", "reorder_filter", "format_response",
  };

  std::array<double, kCount> ms{};

  [[nodiscard]] double operator[](Stage s) const {
    return ms[static_cast<std::size_t>(s)];
  }
  double& at(Stage s) { return ms[static_cast<std::size_t>(s)]; }

  [[nodiscard]] double total() const {
    double t = 0.0;
    for (double v : ms) t += v;
    return t;
  }
};

/** One search call. `metadata_filter` keeps only hits whose metadata
 *  contains every listed key with exactly the listed value. `query_id` is
 *  echoed into the response for downstream evaluation. */
struct SearchRequest {
  std::string namespace_name;
  std::string query_id;
  EmbeddingVector query_vector;
  std::uint32_t top_k = 100;
  Metadata metadata_filter;
  Scoring scoring = Scoring::kHammingOnly;
};

struct SearchResponse {
  RankedList ranked;
  StageTimings timings;
};

/** Occupancy and footprint counters. Byte figures cover live codes;
 *  float_equivalent_bytes is the float32 footprint of the same payload. */
struct NamespaceStats {
  std::uint64_t live = 0;
  std::uint64_t tombstones = 0;
  std::uint64_t code_bytes = 0;
  std::uint64_t float_equivalent_bytes = 0;
  double compression_ratio = 0.0;
};

class Namespace;

/** Read view over one published prefix of a namespace's append log. */
struct Snapshot {
  const Namespace* ns = nullptr;
  std::uint64_t count = 0;
};

/** One named collection of binarized documents.
 *
 *  Storage is append-only: every insert gets the next ordinal, deletes set
 *  a tombstone flag and never move data, so ordinals are stable for the
 *  life of the namespace. The quantizer is frozen at creation; query
 *  vectors are binarized with the same model as documents.
 */
class Namespace {
 public:
  Namespace(std::string name, std::uint32_t dim, QuantizerModel quantizer)
      : name_(std::move(name)),
        dim_(dim),
        words_(BinaryCode::words_needed(dim)),
        quantizer_(std::move(quantizer)),
        codes_(words_) {
    if (quantizer_.dim != dim_) {
      throw DimensionMismatch(quantizer_.dim, dim_);
    }
  }

  Namespace(const Namespace&) = delete;
  Namespace& operator=(const Namespace&) = delete;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::uint32_t dim() const { return dim_; }
  [[nodiscard]] std::size_t code_words() const { return words_; }
  [[nodiscard]] const QuantizerModel& quantizer() const { return quantizer_; }

  /** Binarizes and appends one document. O(dim): no index maintenance.
   *  The document is visible to every search that starts after return. */
  std::uint64_t insert(const CorpusRecord& rec) {
    if (rec.vector.dim() != dim_) {
      throw DimensionMismatch(rec.vector.dim(), dim_);
    }
    BinaryCode code = binarize(rec.vector, quantizer_);
    return insert_code(rec.doc_id, code, rec.metadata);
  }

  /** Appends an already-binarized document (bulk load path). */
  std::uint64_t insert_code(const std::string& doc_id, const BinaryCode& code,
                            Metadata metadata = {}) {
    if (code.dim() != dim_) {
      throw DimensionMismatch(code.dim(), dim_);
    }
    if (doc_id.empty()) {
      throw InvalidParams("doc_id must be nonempty");
    }
    std::lock_guard<std::mutex> lock(write_mu_);
    if (live_ids_.count(doc_id) != 0) {
      throw DuplicateDocId(doc_id);
    }
    const std::uint64_t ord = published_.load(std::memory_order_relaxed);
    std::uint64_t* dst = codes_.ensure_row(ord);
    std::memcpy(dst, code.data(), words_ * sizeof(std::uint64_t));
    *doc_ids_.ensure_row(ord) = doc_id;
    *metadata_.ensure_row(ord) = std::move(metadata);
    tombstones_.ensure_row(ord)->store(0, std::memory_order_relaxed);
    live_ids_.emplace(doc_id, ord);
    live_.fetch_add(1, std::memory_order_relaxed);
    published_.store(ord + 1, std::memory_order_release);
    return ord;
  }

  /** Tombstones a live document. The ordinal is never reused; the same
   *  doc_id may be inserted again later under a new ordinal. */
  void remove(const std::string& doc_id) {
    std::lock_guard<std::mutex> lock(write_mu_);
    auto it = live_ids_.find(doc_id);
    if (it == live_ids_.end()) {
      throw UnknownDocId(doc_id);
    }
    tombstones_.row(it->second)->store(1, std::memory_order_release);
    live_ids_.erase(it);
    live_.fetch_sub(1, std::memory_order_relaxed);
    dead_.fetch_add(1, std::memory_order_relaxed);
  }

  [[nodiscard]] Snapshot snapshot() const {
    return Snapshot{this, published_.load(std::memory_order_acquire)};
  }

  [[nodiscard]] NamespaceStats stats() const {
    NamespaceStats s;
    s.live = live_.load(std::memory_order_relaxed);
    s.tombstones = dead_.load(std::memory_order_relaxed);
    s.code_bytes = s.live * words_ * sizeof(std::uint64_t);
    s.float_equivalent_bytes = s.live * std::uint64_t{dim_} * sizeof(float);
    s.compression_ratio =
        s.code_bytes == 0
            ? 0.0
            : static_cast<double>(s.float_equivalent_bytes) /
                  static_cast<double>(s.code_bytes);
    return s;
  }

  // Row accessors, valid for ordinals below a snapshot's count.
  [[nodiscard]] const std::uint64_t* code_at(std::uint64_t ord) const {
    return codes_.row(ord);
  }
  [[nodiscard]] const std::string& doc_id_at(std::uint64_t ord) const {
    return *doc_ids_.row(ord);
  }
  [[nodiscard]] const Metadata& metadata_at(std::uint64_t ord) const {
    return *metadata_.row(ord);
  }
  [[nodiscard]] bool tombstoned(std::uint64_t ord) const {
    return tombstones_.row(ord)->load(std::memory_order_acquire) != 0;
  }

  /** Contiguous code chunks covering the first `count` ordinals. */
  template <typename Fn>
  void for_each_code_chunk(std::uint64_t count, Fn&& fn) const {
    codes_.for_each_chunk(count, std::forward<Fn>(fn));
  }

 private:
  std::string name_;
  std::uint32_t dim_;
  std::size_t words_;
  QuantizerModel quantizer_;

  AppendColumn<std::uint64_t> codes_;
  AppendColumn<std::string> doc_ids_;
  AppendColumn<Metadata> metadata_;
  AppendColumn<std::atomic<std::uint8_t>> tombstones_;

  std::atomic<std::uint64_t> published_{0};
  std::atomic<std::uint64_t> live_{0};
  std::atomic<std::uint64_t> dead_{0};

  std::mutex write_mu_;
  std::unordered_map<std::string, std::uint64_t> live_ids_;  // under write_mu_
};

/** Engine entry point: owns namespaces and runs the query pipeline. */
class Store {
 public:
  Store() = default;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  Namespace& create_namespace(const std::string& name, std::uint32_t dim,
                              QuantizerModel quantizer) {
    if (quantizer.dim != dim) {
      throw DimensionMismatch(quantizer.dim, dim);
    }
    std::unique_lock lock(mu_);
    if (namespaces_.count(name) != 0) {
      throw NameConflict(name);
    }
    auto ns = std::make_unique<Namespace>(name, dim, std::move(quantizer));
    Namespace& ref = *ns;
    namespaces_.emplace(name, std::move(ns));
    return ref;
  }

  [[nodiscard]] bool has_namespace(const std::string& name) const {
    std::shared_lock lock(mu_);
    return namespaces_.count(name) != 0;
  }

  [[nodiscard]] Namespace& get_namespace(const std::string& name) {
    std::shared_lock lock(mu_);
    auto it = namespaces_.find(name);
    if (it == namespaces_.end()) {
      throw UnknownNamespace(name);
    }
    return *it->second;
  }

  [[nodiscard]] std::vector<std::string> namespace_names() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> names;
    names.reserve(namespaces_.size());
    for (const auto& [name, ns] : namespaces_) {
      (void)ns;
      names.push_back(name);
    }
    return names;
  }

  /** Runs the twelve-stage pipeline:
   *  authorize -> parse_validate -> validate_namespace -> prepare_vector ->
   *  fetch_data -> calculate_distance -> select_candidates ->
   *  calculate_scores -> fetch_complete_data -> apply_metadata_filter ->
   *  reorder_filter -> format_response.
   *
   *  The distance stage scans every published code (exhaustive, no early
   *  exit). Candidate selection keeps the max(top_k, 100) live documents
   *  with the smallest Hamming distance, ties broken by ascending ordinal.
   *  Scores are entropy-weighted agreement when scoring == kIts, otherwise
   *  dim - distance. The metadata filter runs after selection and may
   *  leave fewer than top_k hits when it is selective.
   */
  SearchResponse search(const SearchRequest& req) {
    using Clock = std::chrono::steady_clock;
    SearchResponse resp;
    Clock::time_point mark = Clock::now();
    auto close_stage = [&resp, &mark](Stage s) {
      const Clock::time_point now = Clock::now();
      resp.timings.at(s) =
          std::chrono::duration<double, std::milli>(now - mark).count();
      mark = now;
    };

    // authorize: admission gate. Local deployments accept every caller.
    if (closed_.load(std::memory_order_relaxed)) {
      throw InvalidParams("store is closed");
    }
    close_stage(Stage::kAuthorize);

    // parse_validate: request shape.
    if (req.top_k < 1) {
      throw InvalidParams("top_k must be >= 1");
    }
    for (std::size_t i = 0; i < req.query_vector.values.size(); ++i) {
      if (!std::isfinite(req.query_vector.values[i])) {
        throw NonFiniteValue(i);
      }
    }
    close_stage(Stage::kParseValidate);

    // validate_namespace: lookup and dimension check.
    Namespace& ns = get_namespace(req.namespace_name);
    if (req.query_vector.dim() != ns.dim()) {
      throw DimensionMismatch(req.query_vector.dim(), ns.dim());
    }
    close_stage(Stage::kValidateNamespace);

    // prepare_vector: binarize the query with the namespace's model.
    const BinaryCode query_code = binarize(req.query_vector, ns.quantizer());
    close_stage(Stage::kPrepareVector);

    // fetch_data: pin one consistent prefix of the append log.
    const Snapshot snap = ns.snapshot();
    close_stage(Stage::kFetchData);

    // calculate_distance: exhaustive Hamming scan over the snapshot. The
    // distance buffer is per-thread scratch, reused across queries so the
    // stage measures the scan itself rather than allocator traffic.
    static thread_local std::vector<std::uint32_t> distances;
    if (distances.size() < snap.count) {
      distances.resize(snap.count);
    }
    ns.for_each_code_chunk(
        snap.count, [&](const std::uint64_t* words, std::uint64_t first,
                        std::size_t rows) {
          const CodeBlockView block{words, rows, ns.dim()};
          batch_hamming(query_code, block,
                        std::span<std::uint32_t>(distances.data() + first,
                                                 rows));
        });
    close_stage(Stage::kCalculateDistance);

    // select_candidates: smallest distance first, ties by ordinal.
    struct Candidate {
      std::uint32_t dist;
      std::uint64_t ord;
    };
    struct CandidateBetter {
      bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.ord < b.ord;
      }
    };
    const std::size_t pool_size =
        std::max<std::size_t>(req.top_k, kCandidatePool);
    TopK<Candidate, CandidateBetter> selector(pool_size);
    for (std::uint64_t ord = 0; ord < snap.count; ++ord) {
      if (ns.tombstoned(ord)) continue;
      selector.offer({distances[ord], ord});
    }
    std::vector<Candidate> pool = selector.take_sorted();
    close_stage(Stage::kSelectCandidates);

    // calculate_scores: final ranking score per candidate.
    struct Ranked {
      double score;
      std::uint32_t dist;
      std::uint64_t ord;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(pool.size());
    const std::span<const double> weights(ns.quantizer().weights);
    for (const Candidate& c : pool) {
      double score;
      if (req.scoring == Scoring::kIts) {
        score = its_score_words(query_code.data(), ns.code_at(c.ord),
                                ns.dim(), weights);
      } else {
        score = static_cast<double>(ns.dim()) - static_cast<double>(c.dist);
      }
      ranked.push_back({score, c.dist, c.ord});
    }
    close_stage(Stage::kCalculateScores);

    // fetch_complete_data: resolve ids and metadata for the pool.
    std::vector<const Metadata*> pool_metadata;
    pool_metadata.reserve(ranked.size());
    for (const Ranked& r : ranked) {
      pool_metadata.push_back(&ns.metadata_at(r.ord));
    }
    close_stage(Stage::kFetchCompleteData);

    // apply_metadata_filter: equality constraints, all must match.
    if (!req.metadata_filter.empty()) {
      std::size_t kept = 0;
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        const Metadata& md = *pool_metadata[i];
        bool match = true;
        for (const auto& [key, value] : req.metadata_filter) {
          auto it = md.find(key);
          if (it == md.end() || it->second != value) {
            match = false;
            break;
          }
        }
        if (match) {
          ranked[kept] = ranked[i];
          pool_metadata[kept] = pool_metadata[i];
          ++kept;
        }
      }
      ranked.resize(kept);
      pool_metadata.resize(kept);
    }
    close_stage(Stage::kApplyMetadataFilter);

    // reorder_filter: final score order, truncated to top_k.
    std::sort(ranked.begin(), ranked.end(),
              [](const Ranked& a, const Ranked& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.ord < b.ord;
              });
    if (ranked.size() > static_cast<std::size_t>(req.top_k)) {
      ranked.resize(req.top_k);
    }
    close_stage(Stage::kReorderFilter);

    // format_response: materialize doc ids into the ranked list.
    resp.ranked.query_id = req.query_id;
    resp.ranked.k = req.top_k;
    resp.ranked.hits.reserve(ranked.size());
    for (const Ranked& r : ranked) {
      resp.ranked.hits.push_back(
          {ns.doc_id_at(r.ord), r.score, static_cast<double>(r.dist)});
    }
    close_stage(Stage::kFormatResponse);
    return resp;
  }

 private:
  static constexpr std::size_t kCandidatePool = 100;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Namespace>> namespaces_;
  std::atomic<bool> closed_{false};
};

}  // namespace bitscan
