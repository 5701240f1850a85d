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

#include <catch2/catch.hpp>

#include <atomic>
#include <chrono>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "bitscan/engine.hpp"
#include "support/oracles.hpp"

using namespace bitscan;

namespace {

CorpusRecord make_record(const std::string& id, EmbeddingVector v,
                         Metadata md = {}) {
  return CorpusRecord{id, std::move(v), std::move(md)};
}

SearchRequest make_request(const std::string& ns, EmbeddingVector v,
                           std::uint32_t k = 100) {
  SearchRequest req;
  req.namespace_name = ns;
  req.query_vector = std::move(v);
  req.top_k = k;
  return req;
}

bool same_response(const RankedList& a, const RankedList& b) {
  if (a.hits.size() != b.hits.size()) return false;
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    if (a.hits[i].doc_id != b.hits[i].doc_id) return false;
    if (a.hits[i].score != b.hits[i].score) return false;
    if (a.hits[i].distance != b.hits[i].distance) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("namespace creation enforces uniqueness and dimensions") {
  Store store;
  REQUIRE_NOTHROW(store.create_namespace("legal", 1536, make_sign_model(1536)));
  REQUIRE_THROWS_AS(store.create_namespace("legal", 16, make_sign_model(16)),
                    NameConflict);
  REQUIRE_THROWS_AS(store.create_namespace("other", 16, make_sign_model(8)),
                    DimensionMismatch);
  CHECK(store.has_namespace("legal"));
  CHECK_FALSE(store.has_namespace("other"));
}

TEST_CASE("insert assigns ordinals in append order") {
  Store store;
  Namespace& ns = store.create_namespace("t", 4, make_sign_model(4));
  CHECK(ns.insert(make_record("a", {1, -1, 1, -1})) == 0);
  CHECK(ns.insert(make_record("b", {1, 1, 1, 1})) == 1);
  REQUIRE_THROWS_AS(ns.insert(make_record("a", {0, 0, 0, 0})),
                    DuplicateDocId);
  REQUIRE_THROWS_AS(ns.insert(make_record("c", {1, 2})), DimensionMismatch);
}

TEST_CASE("a fresh insert is immediately queryable at rank one") {
  std::mt19937_64 rng(41);
  Store store;
  Namespace& ns = store.create_namespace("t", 64, make_sign_model(64));
  for (int i = 0; i < 50; ++i) {
    ns.insert(make_record("seed" + std::to_string(i),
                          testsupport::random_vector(rng, 64)));
  }
  const EmbeddingVector probe = testsupport::random_vector(rng, 64);
  ns.insert(make_record("fresh", probe));
  const SearchResponse resp = store.search(make_request("t", probe, 5));
  REQUIRE_FALSE(resp.ranked.hits.empty());
  CHECK(resp.ranked.hits[0].doc_id == "fresh");
  CHECK(resp.ranked.hits[0].distance == 0.0);
}

TEST_CASE("self-match ranks first in a small namespace") {
  Store store;
  Namespace& ns = store.create_namespace("t", 8, make_sign_model(8));
  ns.insert(make_record("A", {1, 1, 1, 1, -1, -1, -1, -1}));
  ns.insert(make_record("B", {-1, -1, 1, 1, 1, 1, -1, -1}));
  ns.insert(make_record("C", {-1, -1, -1, -1, 1, 1, 1, 1}));
  const SearchResponse resp =
      store.search(make_request("t", {-1, -1, 1, 1, 1, 1, -1, -1}, 3));
  REQUIRE(resp.ranked.hits.size() == 3);
  CHECK(resp.ranked.hits[0].doc_id == "B");
  CHECK(resp.ranked.hits[0].distance == 0.0);
}

TEST_CASE("deleted documents never reappear; ids may be reused") {
  Store store;
  Namespace& ns = store.create_namespace("t", 4, make_sign_model(4));
  ns.insert(make_record("a", {1, 1, 1, 1}));
  ns.insert(make_record("b", {-1, -1, -1, -1}));
  ns.remove("a");
  REQUIRE_THROWS_AS(ns.remove("a"), UnknownDocId);
  REQUIRE_THROWS_AS(ns.remove("zzz"), UnknownDocId);

  const SearchResponse resp = store.search(make_request("t", {1, 1, 1, 1}, 10));
  REQUIRE(resp.ranked.hits.size() == 1);
  CHECK(resp.ranked.hits[0].doc_id == "b");

  // re-insert under a new ordinal
  CHECK(ns.insert(make_record("a", {1, 1, 1, 1})) == 2);
  const SearchResponse again =
      store.search(make_request("t", {1, 1, 1, 1}, 10));
  REQUIRE(again.ranked.hits.size() == 2);
  CHECK(again.ranked.hits[0].doc_id == "a");
}

TEST_CASE("search validates its inputs") {
  Store store;
  store.create_namespace("t", 4, make_sign_model(4));
  REQUIRE_THROWS_AS(store.search(make_request("nope", {1, 1, 1, 1})),
                    UnknownNamespace);
  REQUIRE_THROWS_AS(store.search(make_request("t", {1, 1})),
                    DimensionMismatch);
  SearchRequest bad_k = make_request("t", {1, 1, 1, 1});
  bad_k.top_k = 0;
  REQUIRE_THROWS_AS(store.search(bad_k), InvalidParams);
  SearchRequest bad_vec = make_request(
      "t", {1, std::numeric_limits<float>::quiet_NaN(), 1, 1});
  REQUIRE_THROWS_AS(store.search(bad_vec), NonFiniteValue);
}

TEST_CASE("searching an empty namespace returns an empty list") {
  Store store;
  store.create_namespace("t", 4, make_sign_model(4));
  const SearchResponse resp = store.search(make_request("t", {1, 1, 1, 1}));
  CHECK(resp.ranked.hits.empty());
}

TEST_CASE("metadata filter keeps only matching hits") {
  std::mt19937_64 rng(42);
  Store store;
  Namespace& ns = store.create_namespace("t", 32, make_sign_model(32));
  for (int i = 0; i < 40; ++i) {
    Metadata md{{"lang", i % 3 == 0 ? "de" : "en"},
                {"tier", i % 2 == 0 ? "a" : "b"}};
    ns.insert(make_record("d" + std::to_string(i),
                          testsupport::random_vector(rng, 32), md));
  }
  SearchRequest req = make_request("t", testsupport::random_vector(rng, 32), 20);
  req.metadata_filter = {{"lang", "de"}};
  const SearchResponse resp = store.search(req);
  REQUIRE_FALSE(resp.ranked.hits.empty());
  // 14 of 40 docs carry lang=de; the filter may under-fill top_k
  CHECK(resp.ranked.hits.size() <= 20);
  // every surviving hit matches the constraint: verify through a
  // two-constraint query as well
  req.metadata_filter = {{"lang", "de"}, {"tier", "a"}};
  const SearchResponse both = store.search(req);
  for (const auto& hit : both.ranked.hits) {
    const int i = std::stoi(hit.doc_id.substr(1));
    CHECK(i % 3 == 0);
    CHECK(i % 2 == 0);
  }
}

TEST_CASE("repeated searches are byte-identical") {
  std::mt19937_64 rng(43);
  Store store;
  Namespace& ns = store.create_namespace("t", 96, make_sign_model(96));
  for (int i = 0; i < 500; ++i) {
    ns.insert(make_record("d" + std::to_string(i),
                          testsupport::random_vector(rng, 96)));
  }
  SearchRequest req = make_request("t", testsupport::random_vector(rng, 96), 50);
  req.scoring = Scoring::kIts;
  const SearchResponse first = store.search(req);
  for (int trial = 0; trial < 5; ++trial) {
    const SearchResponse again = store.search(req);
    REQUIRE(same_response(first.ranked, again.ranked));
  }
}

TEST_CASE("uniform its scoring orders exactly like hamming scoring") {
  std::mt19937_64 rng(44);
  Store store;
  // sign model: every weight is 1, so its must reduce to hamming
  Namespace& ns = store.create_namespace("t", 48, make_sign_model(48));
  for (int i = 0; i < 300; ++i) {
    ns.insert(make_record("d" + std::to_string(i),
                          testsupport::random_vector(rng, 48)));
  }
  for (int trial = 0; trial < 50; ++trial) {
    SearchRequest req =
        make_request("t", testsupport::random_vector(rng, 48), 300);
    req.scoring = Scoring::kHammingOnly;
    const SearchResponse by_hamming = store.search(req);
    req.scoring = Scoring::kIts;
    const SearchResponse by_its = store.search(req);
    REQUIRE(by_hamming.ranked.hits.size() == by_its.ranked.hits.size());
    for (std::size_t i = 0; i < by_hamming.ranked.hits.size(); ++i) {
      REQUIRE(by_hamming.ranked.hits[i].doc_id ==
              by_its.ranked.hits[i].doc_id);
    }
  }
}

TEST_CASE("stats report exact compression numbers") {
  std::mt19937_64 rng(45);
  Store store;
  Namespace& ns = store.create_namespace("t", 1536, make_sign_model(1536));
  const NamespaceStats empty = ns.stats();
  CHECK(empty.live == 0);
  CHECK(empty.code_bytes == 0);
  CHECK(empty.compression_ratio == 0.0);

  for (int i = 0; i < 10; ++i) {
    ns.insert(make_record("d" + std::to_string(i),
                          testsupport::random_vector(rng, 1536)));
  }
  const NamespaceStats full = ns.stats();
  CHECK(full.live == 10);
  CHECK(full.tombstones == 0);
  CHECK(full.code_bytes == 1920);
  CHECK(full.float_equivalent_bytes == 61440);
  CHECK(full.compression_ratio == 32.0);

  ns.remove("d3");
  ns.remove("d7");
  const NamespaceStats after = ns.stats();
  CHECK(after.live == 8);
  CHECK(after.tombstones == 2);
}

TEST_CASE("stage timings cover the whole search call") {
  std::mt19937_64 rng(46);
  Store store;
  Namespace& ns = store.create_namespace("t", 1536, make_sign_model(1536));
  for (int i = 0; i < 20000; ++i) {
    ns.insert(make_record("d" + std::to_string(i),
                          testsupport::random_vector(rng, 1536)));
  }
  const SearchRequest req =
      make_request("t", testsupport::random_vector(rng, 1536), 100);

  // warm up allocators and caches, then measure
  (void)store.search(req);
  const auto start = std::chrono::steady_clock::now();
  const SearchResponse resp = store.search(req);
  const double wall =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();

  const double sum = resp.timings.total();
  for (double stage_ms : resp.timings.ms) {
    CHECK(stage_ms >= 0.0);
  }
  CHECK(sum <= wall);
  CHECK(wall - sum <= 0.05 * wall);
}

TEST_CASE("a search concurrent with inserts sees a clean prefix") {
  // All documents share one vector, so every hit has distance zero and the
  // result is the first min(k, published) ordinals: any torn read would
  // show up as a gap or reordering in the returned ids.
  Store store;
  Namespace& ns = store.create_namespace("t", 64, make_sign_model(64));
  const EmbeddingVector shared_vec(std::vector<float>(64, 1.0f));
  constexpr int kDocs = 4000;

  std::atomic<bool> writer_done{false};
  std::thread writer([&] {
    for (int i = 0; i < kDocs; ++i) {
      ns.insert(make_record("d" + std::to_string(i), shared_vec));
    }
    writer_done.store(true);
  });

  std::size_t last_seen = 0;
  while (!writer_done.load()) {
    const SearchResponse resp =
        store.search(make_request("t", shared_vec, kDocs));
    const auto n = resp.ranked.hits.size();
    REQUIRE(n >= last_seen);  // prefixes only grow
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(resp.ranked.hits[i].doc_id == "d" + std::to_string(i));
    }
    last_seen = n;
  }
  writer.join();

  const SearchResponse final_resp =
      store.search(make_request("t", shared_vec, kDocs));
  CHECK(final_resp.ranked.hits.size() == kDocs);
}

TEST_CASE("echoes the request query id") {
  Store store;
  Namespace& ns = store.create_namespace("t", 4, make_sign_model(4));
  ns.insert(make_record("a", {1, 1, 1, 1}));
  SearchRequest req = make_request("t", {1, 1, 1, 1}, 1);
  req.query_id = "q42";
  CHECK(store.search(req).ranked.query_id == "q42");
}
