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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "bitscan/engine.hpp"
#include "bitscan/index_file.hpp"
#include "bitscan/jsonl.hpp"
#include "bitscan/metrics.hpp"
#include "bitscan/oracle.hpp"
#include "bitscan/synthetic.hpp"
#include "support/oracles.hpp"

using namespace bitscan;

namespace {

std::filesystem::path test_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "bitscan_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_file(const std::string& name,
                                 const std::string& contents) {
  const auto path = test_dir() / name;
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << contents;
  return path;
}

bool responses_identical(const RankedList& a, const RankedList& b) {
  if (a.hits.size() != b.hits.size()) return false;
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    if (a.hits[i].doc_id != b.hits[i].doc_id) return false;
    if (a.hits[i].score != b.hits[i].score) return false;
    if (a.hits[i].distance != b.hits[i].distance) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("corpus loader accepts well-formed lines") {
  const auto path = write_file(
      "corpus_ok.jsonl",
      R"({"id":"d1","vector":[1.0,2.0,3.0,4.0]})"
      "\n"
      R"({"id":"d2","vector":[0.5,-1.5,0.0,9.25],"metadata":{"lang":"de"}})"
      "\n");
  const auto records = load_corpus_jsonl(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].doc_id == "d1");
  CHECK(records[0].vector.dim() == 4);
  CHECK(records[1].metadata.at("lang") == "de");
}

TEST_CASE("corpus loader reports the failing line number") {
  const auto path = write_file(
      "corpus_missing_id.jsonl",
      R"({"id":"d1","vector":[1,2]})"
      "\n"
      R"({"id":"d2","vector":[3,4]})"
      "\n"
      R"({"vector":[5,6]})"
      "\n");
  try {
    load_corpus_jsonl(path);
    FAIL("expected MalformedLine");
  } catch (const MalformedLine& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("missing id") != std::string::npos);
  }
}

TEST_CASE("corpus loader rejects inconsistent dimensions") {
  const auto path = write_file(
      "corpus_ragged.jsonl",
      R"({"id":"d1","vector":[1,2,3,4]})"
      "\n"
      R"({"id":"d2","vector":[1,2,3]})"
      "\n");
  try {
    load_corpus_jsonl(path);
    FAIL("expected InconsistentDim");
  } catch (const InconsistentDim& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("corpus loader rejects duplicates, bad json, bad metadata") {
  REQUIRE_THROWS_AS(
      load_corpus_jsonl(write_file("corpus_dup.jsonl",
                                   R"({"id":"d1","vector":[1]})"
                                   "\n"
                                   R"({"id":"d1","vector":[2]})"
                                   "\n")),
      MalformedLine);
  REQUIRE_THROWS_AS(
      load_corpus_jsonl(write_file("corpus_garbage.jsonl", "not json\n")),
      MalformedLine);
  REQUIRE_THROWS_AS(
      load_corpus_jsonl(write_file(
          "corpus_badmeta.jsonl",
          R"({"id":"d1","vector":[1],"metadata":{"n":7}})"
          "\n")),
      MalformedLine);
  REQUIRE_THROWS_AS(load_corpus_jsonl(test_dir() / "does_not_exist.jsonl"),
                    IoError);
}

TEST_CASE("query loader handles instructions and blank lines") {
  const auto path = write_file(
      "queries.jsonl",
      R"({"qid":"q1","vector":[1,0],"instruction":"find the statutes"})"
      "\n\n"
      R"({"qid":"q2","vector":[0,1]})"
      "\n");
  const auto queries = load_queries_jsonl(path);
  REQUIRE(queries.size() == 2);
  CHECK(queries[0].instruction == "find the statutes");
  CHECK(queries[1].instruction.empty());
}

TEST_CASE("qrels loader enforces schema and uniqueness") {
  const auto good = write_file("qrels.jsonl",
                               R"({"qid":"q1","doc_id":"d9","rel":2})"
                               "\n"
                               R"({"qid":"q1","doc_id":"d7","rel":0})"
                               "\n");
  const RelevanceJudgments qrels = load_qrels_jsonl(good);
  CHECK(qrels.grade("q1", "d9") == 2);
  CHECK(qrels.grade("q1", "d7") == 0);

  REQUIRE_THROWS_AS(
      load_qrels_jsonl(write_file("qrels_dup.jsonl",
                                  R"({"qid":"q1","doc_id":"d9","rel":2})"
                                  "\n"
                                  R"({"qid":"q1","doc_id":"d9","rel":1})"
                                  "\n")),
      DuplicateQrel);
  REQUIRE_THROWS_AS(
      load_qrels_jsonl(write_file("qrels_neg.jsonl",
                                  R"({"qid":"q1","doc_id":"d9","rel":-1})"
                                  "\n")),
      MalformedLine);
}

TEST_CASE("index round-trip reproduces search responses exactly") {
  std::mt19937_64 rng(71);
  std::vector<EmbeddingVector> calibration;
  for (int i = 0; i < 64; ++i) {
    calibration.push_back(testsupport::random_vector(rng, 100));
  }
  const QuantizerModel model = calibrate_mib(calibration);

  Store store;
  Namespace& ns = store.create_namespace("orig", 100, model);
  for (int i = 0; i < 120; ++i) {
    Metadata md;
    if (i % 3 == 0) md["parity"] = std::to_string(i % 2);
    ns.insert({"d" + std::to_string(i),
               testsupport::random_vector(rng, 100), md});
  }
  ns.remove("d13");
  ns.remove("d77");

  const auto path = test_dir() / "roundtrip.idx";
  save_index(ns, path);
  Namespace& loaded = load_index(path, store, "loaded");

  CHECK(loaded.stats().live == 118);
  CHECK(loaded.stats().tombstones == 0);  // compacted on save

  for (int trial = 0; trial < 20; ++trial) {
    SearchRequest req;
    req.query_vector = testsupport::random_vector(rng, 100);
    req.top_k = 25;
    req.scoring = trial % 2 == 0 ? Scoring::kIts : Scoring::kHammingOnly;
    req.namespace_name = "orig";
    const SearchResponse before = store.search(req);
    req.namespace_name = "loaded";
    const SearchResponse after = store.search(req);
    REQUIRE(responses_identical(before.ranked, after.ranked));
  }

  // metadata survives: filtered searches agree too
  SearchRequest req;
  req.query_vector = testsupport::random_vector(rng, 100);
  req.top_k = 40;
  req.metadata_filter = {{"parity", "0"}};
  req.namespace_name = "orig";
  const SearchResponse before = store.search(req);
  req.namespace_name = "loaded";
  const SearchResponse after = store.search(req);
  REQUIRE(responses_identical(before.ranked, after.ranked));
}

TEST_CASE("sign-mode index stores mode byte zero") {
  std::mt19937_64 rng(72);
  Store store;
  Namespace& ns = store.create_namespace("s", 64, make_sign_model(64));
  ns.insert({"d0", testsupport::random_vector(rng, 64), {}});
  const auto path = test_dir() / "signmode.idx";
  save_index(ns, path);

  std::ifstream in(path, std::ios::binary);
  std::vector<char> head(25);
  in.read(head.data(), 25);
  CHECK(std::string(head.data(), 8) == "BSCANIDX");
  CHECK(head[24] == 0);  // mode byte after magic + version + dim + count
}

TEST_CASE("corrupting any byte fails the checksum") {
  std::mt19937_64 rng(73);
  Store store;
  Namespace& ns = store.create_namespace("c", 64, make_sign_model(64));
  for (int i = 0; i < 10; ++i) {
    ns.insert({"d" + std::to_string(i),
               testsupport::random_vector(rng, 64), {}});
  }
  const auto path = test_dir() / "corrupt.idx";
  save_index(ns, path);

  auto bytes = [&] {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  }();
  // flip one bit in the codes region (well past the header)
  const std::size_t victim = bytes.size() / 2;
  bytes[victim] = static_cast<char>(bytes[victim] ^ 0x10);
  const auto bad = test_dir() / "corrupt_flipped.idx";
  std::ofstream(bad, std::ios::binary)
      .write(bytes.data(), static_cast<std::streamsize>(bytes.size()));

  Store fresh;
  REQUIRE_THROWS_AS(load_index(bad, fresh, "x"), ChecksumMismatch);
}

TEST_CASE("wrong magic bytes are rejected before anything else") {
  const auto path = write_file("notanindex.idx", "JUNKJUNKmorejunkhere");
  Store store;
  REQUIRE_THROWS_AS(load_index(path, store, "x"), UnsupportedVersion);
}

TEST_CASE("truncated index files are rejected") {
  std::mt19937_64 rng(74);
  Store store;
  Namespace& ns = store.create_namespace("t", 64, make_sign_model(64));
  ns.insert({"d0", testsupport::random_vector(rng, 64), {}});
  const auto path = test_dir() / "full.idx";
  save_index(ns, path);

  auto bytes = [&] {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  }();
  const auto cut = test_dir() / "cut.idx";
  std::ofstream(cut, std::ios::binary)
      .write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  Store fresh;
  REQUIRE_THROWS_AS(load_index(cut, fresh, "x"), ChecksumMismatch);
}

TEST_CASE("synthetic generation is deterministic for a fixed seed") {
  SyntheticParams params;
  params.clusters = 3;
  params.per_cluster = 20;
  params.dim = 32;
  params.spread = 0.2;
  params.seed = 99;
  const SyntheticDataset a = generate_synthetic(params);
  const SyntheticDataset b = generate_synthetic(params);
  REQUIRE(a.corpus.size() == b.corpus.size());
  for (std::size_t i = 0; i < a.corpus.size(); ++i) {
    CHECK(a.corpus[i].doc_id == b.corpus[i].doc_id);
    REQUIRE(a.corpus[i].vector.values == b.corpus[i].vector.values);
  }
  for (std::size_t i = 0; i < a.queries.size(); ++i) {
    REQUIRE(a.queries[i].vector.values == b.queries[i].vector.values);
  }

  SyntheticParams other = params;
  other.seed = 100;
  const SyntheticDataset c = generate_synthetic(other);
  CHECK(a.corpus[0].vector.values != c.corpus[0].vector.values);
}

TEST_CASE("zero spread collapses documents onto their centers") {
  SyntheticParams params;
  params.clusters = 3;
  params.per_cluster = 8;
  params.dim = 16;
  params.spread = 0.0;
  params.seed = 5;
  const SyntheticDataset data = generate_synthetic(params);
  for (std::size_t c = 0; c < data.queries.size(); ++c) {
    for (std::uint32_t d = 0; d < params.per_cluster; ++d) {
      const auto& doc = data.corpus[c * params.per_cluster + d];
      REQUIRE(doc.vector.values == data.queries[c].vector.values);
    }
    const RankedList oracle =
        exact_search(data.corpus, data.queries[c], 10);
    CHECK(ndcg_at_k(oracle, data.qrels, 10) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("oracle ndcg on the clustered benchmark is essentially perfect") {
  SyntheticParams params;
  params.clusters = 10;
  params.per_cluster = 100;
  params.dim = 1536;
  params.spread = 0.1;
  params.seed = 42;
  const SyntheticDataset data = generate_synthetic(params);
  double total = 0.0;
  for (const QueryRecord& q : data.queries) {
    const RankedList oracle = exact_search(data.corpus, q, 10);
    total += ndcg_at_k(oracle, data.qrels, 10);
  }
  CHECK(total / static_cast<double>(data.queries.size()) >= 0.99);
}

TEST_CASE("synthetic generator rejects bad parameters") {
  SyntheticParams params;
  params.clusters = 1;
  REQUIRE_THROWS_AS(generate_synthetic(params), InvalidParams);
  params.clusters = 2;
  params.dim = 4;
  REQUIRE_THROWS_AS(generate_synthetic(params), InvalidParams);
  params.dim = 8;
  params.spread = -0.5;
  REQUIRE_THROWS_AS(generate_synthetic(params), InvalidParams);
}
