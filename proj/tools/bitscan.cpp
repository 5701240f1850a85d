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

// bitscan CLI: generate / build / search / eval / bench / parity / compact.
//
// Conventions:
//   - data goes to the requested output files or stdout; diagnostics to stderr
//   - exit 0 on success, 2 on usage errors, 1 on runtime errors
//   - every command is deterministic for fixed inputs and seeds; wall-clock
//     measurements are isolated in their own files/columns
//   - BITSCAN_THREADS caps per-query parallelism (0 or unset = one thread
//     per hardware core)

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bitscan/bitscan.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::size_t worker_count() {
  if (const char* env = std::getenv("BITSCAN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<std::size_t>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/** Runs fn(i) for i in [0, count) across the worker pool. fn must only
 *  write to per-i slots so results are identical at any thread count. */
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw bitscan::IoError(path.string(), "cannot open for writing");
  }
  return out;
}

nlohmann::json vector_to_json(const bitscan::EmbeddingVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (float x : v.values) {
    arr.push_back(static_cast<double>(x));
  }
  return arr;
}

void write_timing_header(std::ostream& os) {
  os << "qid";
  for (const auto name : bitscan::StageTimings::kNames) {
    os << ',' << name << "_ms";
  }
  os << ",total_ms\n";
}

void write_timing_row(std::ostream& os, const std::string& qid,
                      const bitscan::StageTimings& t) {
  os << qid;
  char buf[32];
  for (double v : t.ms) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    os << ',' << buf;
  }
  std::snprintf(buf, sizeof(buf), "%.6f", t.total());
  os << ',' << buf << '\n';
}

bitscan::Metadata parse_filters(const std::vector<std::string>& raw) {
  bitscan::Metadata filter;
  for (const std::string& pair : raw) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--filter", "expected key=value: " + pair);
    }
    filter[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return filter;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string out_dir;
  bitscan::SyntheticParams params;
};

int cmd_generate(const GenerateArgs& args) {
  const bitscan::SyntheticDataset data =
      bitscan::generate_synthetic(args.params);
  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);

  {
    std::ofstream out = open_out(dir / "corpus.jsonl");
    for (const auto& rec : data.corpus) {
      nlohmann::json j;
      j["id"] = rec.doc_id;
      j["vector"] = vector_to_json(rec.vector);
      if (!rec.metadata.empty()) {
        j["metadata"] = rec.metadata;
      }
      out << j.dump() << '\n';
    }
  }
  {
    std::ofstream out = open_out(dir / "queries.jsonl");
    for (const auto& q : data.queries) {
      nlohmann::json j;
      j["qid"] = q.query_id;
      j["vector"] = vector_to_json(q.vector);
      out << j.dump() << '\n';
    }
  }
  {
    std::ofstream out = open_out(dir / "qrels.jsonl");
    for (const auto& q : data.queries) {
      const auto* grades = data.qrels.for_query(q.query_id);
      if (grades == nullptr) continue;
      // deterministic file order: sort doc ids
      std::vector<std::pair<std::string, std::uint32_t>> rows(grades->begin(),
                                                              grades->end());
      std::sort(rows.begin(), rows.end());
      for (const auto& [doc_id, rel] : rows) {
        nlohmann::json j;
        j["qid"] = q.query_id;
        j["doc_id"] = doc_id;
        j["rel"] = rel;
        out << j.dump() << '\n';
      }
    }
  }
  std::cerr << "wrote " << data.corpus.size() << " docs, "
            << data.queries.size() << " queries to " << args.out_dir << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
  std::string corpus_path;
  std::string out_path;
  std::string mode = "sign";
  std::uint32_t dim = 0;  // 0 = infer from corpus
};

int cmd_build(const BuildArgs& args) {
  const auto t_load = Clock::now();
  std::vector<bitscan::CorpusRecord> corpus =
      bitscan::load_corpus_jsonl(args.corpus_path);
  if (corpus.empty()) {
    throw bitscan::InvalidParams("corpus is empty: " + args.corpus_path);
  }
  const std::uint32_t dim = args.dim != 0 ? args.dim : corpus.front().vector.dim();
  const double load_ms = ms_since(t_load);

  const auto t_create = Clock::now();
  bitscan::QuantizerModel model;
  if (args.mode == "mib") {
    std::vector<bitscan::EmbeddingVector> vectors;
    vectors.reserve(corpus.size());
    for (const auto& rec : corpus) vectors.push_back(rec.vector);
    model = bitscan::calibrate_mib(vectors);
  } else {
    model = bitscan::make_sign_model(dim);
  }
  bitscan::Store store;
  bitscan::Namespace& ns = store.create_namespace("default", dim, model);
  const double create_ms = ms_since(t_create);

  const auto t_insert = Clock::now();
  for (const auto& rec : corpus) {
    ns.insert(rec);
  }
  const double insert_ms = ms_since(t_insert);

  const auto t_save = Clock::now();
  bitscan::save_index(ns, args.out_path);
  const double save_ms = ms_since(t_save);

  const bitscan::NamespaceStats stats = ns.stats();
  std::cout << "docs," << stats.live << '\n'
            << "dim," << dim << '\n'
            << "mode," << args.mode << '\n'
            << "code_bytes," << stats.code_bytes << '\n'
            << "float_equivalent_bytes," << stats.float_equivalent_bytes
            << '\n'
            << "compression_ratio," << stats.compression_ratio << '\n'
            << "load_ms," << load_ms << '\n'
            << "index_creation_ms," << create_ms << '\n'
            << "vector_insertion_ms," << insert_ms << '\n'
            << "save_ms," << save_ms << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string index_path;
  std::string queries_path;
  std::string out_path = "results.jsonl";
  std::string timing_path = "timings.csv";
  std::uint32_t top_k = 100;
  std::string scoring = "hamming";
  std::vector<std::string> filters;
};

int cmd_search(const SearchArgs& args) {
  bitscan::Store store;
  bitscan::load_index(args.index_path, store, "default");
  const std::vector<bitscan::QueryRecord> queries =
      bitscan::load_queries_jsonl(args.queries_path);
  const bitscan::Metadata filter = parse_filters(args.filters);
  const bitscan::Scoring scoring = args.scoring == "its"
                                       ? bitscan::Scoring::kIts
                                       : bitscan::Scoring::kHammingOnly;

  std::vector<bitscan::SearchResponse> responses(queries.size());
  parallel_for(queries.size(), [&](std::size_t i) {
    bitscan::SearchRequest req;
    req.namespace_name = "default";
    req.query_id = queries[i].query_id;
    req.query_vector = queries[i].vector;
    req.top_k = args.top_k;
    req.metadata_filter = filter;
    req.scoring = scoring;
    responses[i] = store.search(req);
  });

  std::ofstream results = open_out(args.out_path);
  std::ofstream timings = open_out(args.timing_path);
  write_timing_header(timings);
  for (std::size_t i = 0; i < responses.size(); ++i) {
    nlohmann::json line;
    line["qid"] = responses[i].ranked.query_id;
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& hit : responses[i].ranked.hits) {
      hits.push_back({{"doc_id", hit.doc_id}, {"score", hit.score}});
    }
    line["hits"] = hits;
    results << line.dump() << '\n';
    write_timing_row(timings, responses[i].ranked.query_id,
                     responses[i].timings);
  }
  std::cerr << "searched " << queries.size() << " queries\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string results_path;
  std::string qrels_path;
  std::string out_path;
  std::vector<std::uint32_t> ks = {1, 3, 5, 10, 100};
  std::string dataset = "dataset";
  std::string platform = "bitscan";
};

std::vector<bitscan::RankedList> load_results_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw bitscan::IoError(path.string(), "cannot open for reading");
  }
  std::vector<bitscan::RankedList> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("qid") ||
        !j.contains("hits") || !j["hits"].is_array()) {
      throw bitscan::MalformedLine(line_no, "expected {qid, hits:[...]}");
    }
    bitscan::RankedList ranked;
    ranked.query_id = j["qid"].get<std::string>();
    for (const auto& h : j["hits"]) {
      if (!h.contains("doc_id") || !h.contains("score")) {
        throw bitscan::MalformedLine(line_no, "hit missing doc_id or score");
      }
      ranked.hits.push_back(
          {h["doc_id"].get<std::string>(), h["score"].get<double>(), 0.0});
    }
    ranked.k = static_cast<std::uint32_t>(ranked.hits.size());
    results.push_back(std::move(ranked));
  }
  return results;
}

int cmd_eval(const EvalArgs& args) {
  const std::vector<bitscan::RankedList> results =
      load_results_jsonl(args.results_path);
  const bitscan::RelevanceJudgments qrels =
      bitscan::load_qrels_jsonl(args.qrels_path);

  std::vector<std::string> unjudged;
  const bitscan::MetricReport report = bitscan::compute_metric_report(
      results, qrels, args.ks, args.dataset, args.platform, &unjudged);
  for (const std::string& qid : unjudged) {
    std::cerr << "warning: query " << qid
              << " has no relevance judgments; scored 0\n";
  }

  if (args.out_path.empty()) {
    bitscan::write_metric_csv(report, std::cout);
  } else {
    std::ofstream out = open_out(args.out_path);
    bitscan::write_metric_csv(report, out);
    std::cout << bitscan::format_metric_table(report);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::vector<std::uint64_t> sizes;
  std::uint32_t dim = 1536;
  std::uint32_t repeat = 3;
  std::uint64_t seed = 42;
  std::uint32_t queries = 50;
};

bitscan::EmbeddingVector random_vector(bitscan::SplitMix64& rng,
                                       std::uint32_t dim) {
  bitscan::EmbeddingVector v;
  v.values.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    v.values[i] = static_cast<float>(rng.next_gaussian());
  }
  return v;
}

int cmd_bench(const BenchArgs& args) {
  if (args.sizes.empty()) {
    throw bitscan::InvalidParams("at least one size required");
  }
  for (std::size_t i = 1; i < args.sizes.size(); ++i) {
    if (args.sizes[i] <= args.sizes[i - 1]) {
      throw bitscan::InvalidParams("sizes must be strictly ascending");
    }
  }

  std::cout << "size,stage,mean_ms,median_ms,min_ms,max_ms,std_ms\n";
  std::vector<double> distance_means;
  std::vector<double> insert_medians;

  for (const std::uint64_t size : args.sizes) {
    bitscan::Store store;
    const std::string ns_name = "bench_" + std::to_string(size);
    bitscan::Namespace& ns = store.create_namespace(
        ns_name, args.dim, bitscan::make_sign_model(args.dim));

    bitscan::SplitMix64 rng(args.seed);
    for (std::uint64_t d = 0; d < size; ++d) {
      bitscan::CorpusRecord rec;
      rec.doc_id = "d" + std::to_string(d);
      rec.vector = random_vector(rng, args.dim);
      ns.insert(rec);
    }

    // per-insert latency once the namespace holds `size` docs
    const std::uint64_t probe = std::min<std::uint64_t>(1000, size);
    std::vector<double> insert_ms(probe);
    for (std::uint64_t p = 0; p < probe; ++p) {
      bitscan::CorpusRecord rec;
      rec.doc_id = "probe" + std::to_string(p);
      rec.vector = random_vector(rng, args.dim);
      const auto t0 = Clock::now();
      ns.insert(rec);
      insert_ms[p] = ms_since(t0);
    }
    std::sort(insert_ms.begin(), insert_ms.end());
    const double median_insert =
        probe % 2 == 1 ? insert_ms[probe / 2]
                       : 0.5 * (insert_ms[probe / 2 - 1] + insert_ms[probe / 2]);
    insert_medians.push_back(median_insert);

    std::vector<bitscan::EmbeddingVector> query_vectors;
    query_vectors.reserve(args.queries);
    for (std::uint32_t q = 0; q < args.queries; ++q) {
      query_vectors.push_back(random_vector(rng, args.dim));
    }

    std::vector<bitscan::StageTimings> samples;
    samples.resize(static_cast<std::size_t>(args.repeat) * args.queries);
    for (std::uint32_t r = 0; r < args.repeat; ++r) {
      parallel_for(args.queries, [&](std::size_t qi) {
        bitscan::SearchRequest req;
        req.namespace_name = ns_name;
        req.query_vector = query_vectors[qi];
        req.top_k = 100;
        samples[static_cast<std::size_t>(r) * args.queries + qi] =
            store.search(req).timings;
      });
    }

    const bitscan::LatencySummary summary = bitscan::latency_summary(samples);
    for (std::size_t s = 0; s < bitscan::StageTimings::kCount; ++s) {
      const auto& st = summary.per_stage[s];
      std::cout << size << ',' << bitscan::StageTimings::kNames[s] << ','
                << st.mean << ',' << st.median << ',' << st.min << ','
                << st.max << ',' << st.std << '\n';
    }
    std::cout << size << ",total," << summary.total.mean << ','
              << summary.total.median << ',' << summary.total.min << ','
              << summary.total.max << ',' << summary.total.std << '\n';
    distance_means.push_back(
        summary.per_stage[static_cast<std::size_t>(
                              bitscan::Stage::kCalculateDistance)]
            .mean);
  }

  std::cout << "\nscaling\n";
  for (std::size_t i = 1; i < args.sizes.size(); ++i) {
    const double size_ratio = static_cast<double>(args.sizes[i]) /
                              static_cast<double>(args.sizes[0]);
    const double time_ratio = distance_means[i] / distance_means[0];
    std::cout << "distance_mean_ratio," << args.sizes[0] << "->"
              << args.sizes[i] << ',' << time_ratio << ",size_ratio,"
              << size_ratio << '\n';
  }
  std::cout << "insert_median_ms," << args.sizes.front() << ','
            << insert_medians.front() << '\n';
  std::cout << "insert_median_ms," << args.sizes.back() << ','
            << insert_medians.back() << '\n';
  if (insert_medians.front() > 0.0) {
    std::cout << "insert_median_ratio,"
              << insert_medians.back() / insert_medians.front() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// parity

struct ParityArgs {
  std::string corpus_path;
  std::string queries_path;
  std::string qrels_path;
  std::string mode = "mib";
  std::string out_path;
};

int cmd_parity(const ParityArgs& args) {
  const std::vector<bitscan::CorpusRecord> corpus =
      bitscan::load_corpus_jsonl(args.corpus_path);
  const std::vector<bitscan::QueryRecord> queries =
      bitscan::load_queries_jsonl(args.queries_path);
  const bitscan::RelevanceJudgments qrels =
      bitscan::load_qrels_jsonl(args.qrels_path);
  if (corpus.empty()) {
    throw bitscan::InvalidParams("corpus is empty");
  }
  const std::uint32_t dim = corpus.front().vector.dim();

  bitscan::QuantizerModel model;
  if (args.mode == "mib") {
    std::vector<bitscan::EmbeddingVector> vectors;
    vectors.reserve(corpus.size());
    for (const auto& rec : corpus) vectors.push_back(rec.vector);
    model = bitscan::calibrate_mib(vectors);
  } else {
    model = bitscan::make_sign_model(dim);
  }
  bitscan::Store store;
  bitscan::Namespace& ns = store.create_namespace("parity", dim, model);
  for (const auto& rec : corpus) ns.insert(rec);

  struct Row {
    std::string qid;
    double ndcg_binary;
    double ndcg_oracle;
    double recall;
  };
  std::vector<Row> rows(queries.size());
  parallel_for(queries.size(), [&](std::size_t i) {
    bitscan::SearchRequest req;
    req.namespace_name = "parity";
    req.query_id = queries[i].query_id;
    req.query_vector = queries[i].vector;
    req.top_k = 100;
    req.scoring = bitscan::Scoring::kIts;
    const bitscan::RankedList binary = store.search(req).ranked;
    const bitscan::RankedList oracle =
        bitscan::exact_search(corpus, queries[i], 100);
    rows[i] = {queries[i].query_id,
               bitscan::ndcg_at_k(binary, qrels, 10),
               bitscan::ndcg_at_k(oracle, qrels, 10),
               bitscan::recall_vs_oracle(binary, oracle, 100)};
  });

  std::ostringstream csv;
  csv << "qid,ndcg10_binary,ndcg10_oracle,delta,recall_vs_oracle100\n";
  double sum_b = 0.0, sum_o = 0.0, sum_r = 0.0;
  for (const Row& row : rows) {
    csv << row.qid << ',' << row.ndcg_binary << ',' << row.ndcg_oracle << ','
        << (row.ndcg_oracle - row.ndcg_binary) << ',' << row.recall << '\n';
    sum_b += row.ndcg_binary;
    sum_o += row.ndcg_oracle;
    sum_r += row.recall;
  }
  const auto n = static_cast<double>(rows.empty() ? 1 : rows.size());
  csv << "mean," << sum_b / n << ',' << sum_o / n << ','
      << (sum_o - sum_b) / n << ',' << sum_r / n << '\n';

  if (args.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out = open_out(args.out_path);
    out << csv.str();
    std::cout << "mean_ndcg10_binary," << sum_b / n << '\n'
              << "mean_ndcg10_oracle," << sum_o / n << '\n'
              << "mean_recall_vs_oracle100," << sum_r / n << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compact

struct CompactArgs {
  std::string index_path;
  std::string out_path;
};

int cmd_compact(const CompactArgs& args) {
  bitscan::Store store;
  bitscan::Namespace& ns = bitscan::load_index(args.index_path, store, "c");
  bitscan::save_index(ns, args.out_path);
  const bitscan::NamespaceStats stats = ns.stats();
  std::cerr << "compacted " << stats.live << " live docs to " << args.out_path
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bitscan: exhaustive binary vector search engine"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate =
      app.add_subcommand("generate", "write a synthetic clustered dataset");
  generate->add_option("--out-dir", gen.out_dir, "output directory")
      ->required();
  generate->add_option("--clusters", gen.params.clusters, "cluster count");
  generate->add_option("--per-cluster", gen.params.per_cluster,
                       "documents per cluster");
  generate->add_option("--dim", gen.params.dim, "vector dimension");
  generate->add_option("--spread", gen.params.spread, "noise radius scale");
  generate->add_option("--seed", gen.params.seed, "random seed");

  BuildArgs build;
  CLI::App* build_cmd =
      app.add_subcommand("build", "binarize a corpus into an index file");
  build_cmd->add_option("--corpus", build.corpus_path, "corpus JSONL")
      ->required();
  build_cmd->add_option("--out", build.out_path, "index file")->required();
  build_cmd->add_option("--mode", build.mode, "sign|mib")
      ->check(CLI::IsMember({"sign", "mib"}));
  build_cmd->add_option("--dim", build.dim, "expected dimension (0 = infer)");

  SearchArgs search;
  CLI::App* search_cmd =
      app.add_subcommand("search", "run queries against an index file");
  search_cmd->add_option("--index", search.index_path, "index file")
      ->required();
  search_cmd->add_option("--queries", search.queries_path, "queries JSONL")
      ->required();
  search_cmd->add_option("--out", search.out_path, "results JSONL");
  search_cmd->add_option("--timing-csv", search.timing_path,
                         "per-query stage timings CSV");
  search_cmd->add_option("--top-k", search.top_k, "results per query");
  search_cmd->add_option("--scoring", search.scoring, "hamming|its")
      ->check(CLI::IsMember({"hamming", "its"}));
  search_cmd->add_option("--filter", search.filters,
                         "metadata equality filter key=value (repeatable)");

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score results against judgments");
  eval_cmd->add_option("--results", eval.results_path, "results JSONL")
      ->required();
  eval_cmd->add_option("--qrels", eval.qrels_path, "qrels JSONL")->required();
  eval_cmd->add_option("--out", eval.out_path, "metric CSV (default stdout)");
  eval_cmd->add_option("--k-list", eval.ks, "cutoffs")->delimiter(',');
  eval_cmd->add_option("--dataset", eval.dataset, "dataset label");
  eval_cmd->add_option("--platform", eval.platform, "platform label");

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "scan-scaling and insert-latency report");
  bench_cmd->add_option("--sizes", bench.sizes, "corpus sizes, ascending")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--dim", bench.dim, "vector dimension");
  bench_cmd->add_option("--repeat", bench.repeat, "repeats per query");
  bench_cmd->add_option("--seed", bench.seed, "random seed");
  bench_cmd->add_option("--queries", bench.queries, "queries per size");

  ParityArgs parity;
  CLI::App* parity_cmd = app.add_subcommand(
      "parity", "binary engine vs exact float cosine on one dataset");
  parity_cmd->add_option("--corpus", parity.corpus_path, "corpus JSONL")
      ->required();
  parity_cmd->add_option("--queries", parity.queries_path, "queries JSONL")
      ->required();
  parity_cmd->add_option("--qrels", parity.qrels_path, "qrels JSONL")
      ->required();
  parity_cmd->add_option("--mode", parity.mode, "sign|mib")
      ->check(CLI::IsMember({"sign", "mib"}));
  parity_cmd->add_option("--out", parity.out_path, "CSV output path");

  CompactArgs compact;
  CLI::App* compact_cmd = app.add_subcommand(
      "compact", "rewrite an index file, dropping tombstoned rows");
  compact_cmd->add_option("--index", compact.index_path, "input index file")
      ->required();
  compact_cmd->add_option("--out", compact.out_path, "output index file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (build_cmd->parsed()) return cmd_build(build);
    if (search_cmd->parsed()) return cmd_search(search);
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (parity_cmd->parsed()) return cmd_parity(parity);
    if (compact_cmd->parsed()) return cmd_compact(compact);
  } catch (const bitscan::InvalidParams& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const bitscan::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
