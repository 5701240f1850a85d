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

/** \file metrics.hpp
 *  \brief Graded-relevance retrieval metrics (NDCG, MAP, recall, precision
 *         at k) and latency statistics over pipeline stage timings.
 *
 *  Conventions, applied uniformly:
 *   - gain is exponential: 2^rel - 1; unjudged documents have grade 0
 *   - NDCG of a query with no judged documents is 0, and such queries
 *     still count toward means
 *   - average precision is normalized by min(total_relevant, k) so that
 *     AP@k never exceeds 1
 *   - standard deviations are population, not sample
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "bitscan/engine.hpp"
#include "bitscan/errors.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

/** Discounted cumulative gain at cutoff k:
 *  sum over ranks i of (2^rel_i - 1) / log2(i + 1), 1-based ranks. */
inline double dcg_at_k(const RankedList& ranked,
                       const RelevanceJudgments& qrels, std::uint32_t k) {
  if (k < 1) {
    throw InvalidParams("k must be >= 1");
  }
  const std::size_t depth = std::min<std::size_t>(k, ranked.hits.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    const std::uint32_t rel = qrels.grade(ranked.query_id,
                                          ranked.hits[i].doc_id);
    if (rel > 0) {
      dcg += (std::exp2(static_cast<double>(rel)) - 1.0) /
             std::log2(static_cast<double>(i) + 2.0);
    }
  }
  return dcg;
}

/** Ideal DCG at k: gains of this query's judged grades, sorted descending. */
inline double idcg_at_k(const RelevanceJudgments& qrels,
                        const std::string& query_id, std::uint32_t k) {
  if (k < 1) {
    throw InvalidParams("k must be >= 1");
  }
  const auto* grades = qrels.for_query(query_id);
  if (grades == nullptr) return 0.0;
  std::vector<std::uint32_t> sorted;
  sorted.reserve(grades->size());
  for (const auto& [doc, g] : *grades) {
    (void)doc;
    sorted.push_back(g);
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t depth = std::min<std::size_t>(k, sorted.size());
  double idcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (sorted[i] > 0) {
      idcg += (std::exp2(static_cast<double>(sorted[i])) - 1.0) /
              std::log2(static_cast<double>(i) + 2.0);
    }
  }
  return idcg;
}

/** NDCG at k in [0, 1]; 0 when the query has no judged documents. */
inline double ndcg_at_k(const RankedList& ranked,
                        const RelevanceJudgments& qrels, std::uint32_t k) {
  const double idcg = idcg_at_k(qrels, ranked.query_id, k);
  if (idcg == 0.0) return 0.0;
  return dcg_at_k(ranked, qrels, k) / idcg;
}

struct PrecisionRecallAp {
  double precision = 0.0;
  double recall = 0.0;
  double average_precision = 0.0;
};

/** Binary-relevance metrics at cutoff k; "relevant" means grade > 0. */
inline PrecisionRecallAp precision_recall_map(const RankedList& ranked,
                                              const RelevanceJudgments& qrels,
                                              std::uint32_t k) {
  if (k < 1) {
    throw InvalidParams("k must be >= 1");
  }
  const std::size_t total_relevant = qrels.total_relevant(ranked.query_id);
  const std::size_t depth = std::min<std::size_t>(k, ranked.hits.size());

  std::size_t hits_so_far = 0;
  double ap_sum = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (qrels.grade(ranked.query_id, ranked.hits[i].doc_id) > 0) {
      ++hits_so_far;
      ap_sum += static_cast<double>(hits_so_far) /
                (static_cast<double>(i) + 1.0);
    }
  }

  PrecisionRecallAp out;
  out.precision = static_cast<double>(hits_so_far) / static_cast<double>(k);
  out.recall = total_relevant == 0
                   ? 0.0
                   : static_cast<double>(hits_so_far) /
                         static_cast<double>(total_relevant);
  const std::size_t ap_norm = std::min<std::size_t>(total_relevant, k);
  out.average_precision =
      ap_norm == 0 ? 0.0 : ap_sum / static_cast<double>(ap_norm);
  return out;
}

/** Mean/median/min/max/population-std bundle. */
struct StatSummary {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;
};

namespace detail {

inline StatSummary summarize(std::vector<double>& values) {
  StatSummary s;
  const std::size_t n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(n));
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  // even-count median is the mean of the two middle values
  s.median = (n % 2 == 1)
                 ? values[n / 2]
                 : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return s;
}

}  // namespace detail

/** Per-stage and total latency statistics over a query population. */
struct LatencySummary {
  std::array<StatSummary, StageTimings::kCount> per_stage{};
  StatSummary total{};
  std::size_t samples = 0;
};

inline LatencySummary latency_summary(std::span<const StageTimings> samples) {
  if (samples.empty()) {
    throw EmptySamples();
  }
  LatencySummary out;
  out.samples = samples.size();
  std::vector<double> values(samples.size());
  for (std::size_t stage = 0; stage < StageTimings::kCount; ++stage) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      values[i] = samples[i].ms[stage];
    }
    out.per_stage[stage] = detail::summarize(values);
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = samples[i].total();
  }
  out.total = detail::summarize(values);
  return out;
}

/** Metric table over one result set: per-query rows plus a mean row, for
 *  ndcg/map/recall/precision at each requested cutoff. */
struct MetricReport {
  struct Row {
    std::string query_id;
    std::vector<double> ndcg;       // indexed like ks
    std::vector<double> map;        // per-query value is average precision
    std::vector<double> recall;
    std::vector<double> precision;
  };

  std::string dataset;
  std::string platform;
  std::vector<std::uint32_t> ks;
  std::vector<Row> per_query;
  Row mean;
};

/** Evaluates ranked lists against judgments at each cutoff in `ks`.
 *  Queries absent from the judgments score 0 everywhere and are listed in
 *  `unjudged_out` when provided. */
inline MetricReport compute_metric_report(
    std::span<const RankedList> results, const RelevanceJudgments& qrels,
    std::span<const std::uint32_t> ks, std::string dataset,
    std::string platform, std::vector<std::string>* unjudged_out = nullptr) {
  MetricReport report;
  report.dataset = std::move(dataset);
  report.platform = std::move(platform);
  report.ks.assign(ks.begin(), ks.end());
  report.mean.query_id = "mean";
  report.mean.ndcg.assign(ks.size(), 0.0);
  report.mean.map.assign(ks.size(), 0.0);
  report.mean.recall.assign(ks.size(), 0.0);
  report.mean.precision.assign(ks.size(), 0.0);

  for (const RankedList& ranked : results) {
    if (qrels.for_query(ranked.query_id) == nullptr &&
        unjudged_out != nullptr) {
      unjudged_out->push_back(ranked.query_id);
    }
    MetricReport::Row row;
    row.query_id = ranked.query_id;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      const std::uint32_t k = ks[ki];
      const double ndcg = ndcg_at_k(ranked, qrels, k);
      const PrecisionRecallAp pra = precision_recall_map(ranked, qrels, k);
      row.ndcg.push_back(ndcg);
      row.map.push_back(pra.average_precision);
      row.recall.push_back(pra.recall);
      row.precision.push_back(pra.precision);
      report.mean.ndcg[ki] += ndcg;
      report.mean.map[ki] += pra.average_precision;
      report.mean.recall[ki] += pra.recall;
      report.mean.precision[ki] += pra.precision;
    }
    report.per_query.push_back(std::move(row));
  }

  if (!report.per_query.empty()) {
    const auto n = static_cast<double>(report.per_query.size());
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      report.mean.ndcg[ki] /= n;
      report.mean.map[ki] /= n;
      report.mean.recall[ki] /= n;
      report.mean.precision[ki] /= n;
    }
  }
  return report;
}

namespace detail {

inline void write_metric_rows(std::ostream& os, const MetricReport& report,
                              const MetricReport::Row& row) {
  static constexpr std::array<std::string_view, 4> kMetrics = {
      "ndcg", "map", "recall", "precision"};
  for (std::size_t mi = 0; mi < kMetrics.size(); ++mi) {
    const std::vector<double>& values =
        mi == 0 ? row.ndcg
                : mi == 1 ? row.map : mi == 2 ? row.recall : row.precision;
    for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
      os << report.dataset << ',' << report.platform << ',' << kMetrics[mi]
         << ',' << report.ks[ki] << ',' << std::setprecision(10)
         << values[ki] << ',' << row.query_id << '\n';
    }
  }
}

}  // namespace detail

/** CSV emission. Column order: dataset, platform, metric, k, value, then a
 *  trailing query_id column ("mean" for the aggregate rows). */
inline void write_metric_csv(const MetricReport& report, std::ostream& os) {
  os << "dataset,platform,metric,k,value,query_id\n";
  for (const auto& row : report.per_query) {
    detail::write_metric_rows(os, report, row);
  }
  detail::write_metric_rows(os, report, report.mean);
}

/** Aligned text table of the mean values only:
 *  dataset, platform, metric, k, value. */
inline std::string format_metric_table(const MetricReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "dataset" << std::setw(12) << "platform"
     << std::setw(11) << "metric" << std::right << std::setw(5) << "k"
     << std::setw(12) << "value" << '\n';
  static constexpr std::array<std::string_view, 4> kMetrics = {
      "ndcg", "map", "recall", "precision"};
  for (std::size_t mi = 0; mi < kMetrics.size(); ++mi) {
    const std::vector<double>& values =
        mi == 0 ? report.mean.ndcg
                : mi == 1 ? report.mean.map
                          : mi == 2 ? report.mean.recall
                                    : report.mean.precision;
    for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
      os << std::left << std::setw(16) << report.dataset << std::setw(12)
         << report.platform << std::setw(11) << kMetrics[mi] << std::right
         << std::setw(5) << report.ks[ki] << std::setw(12) << std::fixed
         << std::setprecision(6) << values[ki] << '\n';
      os.unsetf(std::ios::fixed);
    }
  }
  return os.str();
}

}  // namespace bitscan
