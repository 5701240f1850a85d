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

/** \file jsonl.hpp
 *  \brief JSONL loaders for corpora, query sets, and relevance judgments.
 *
 *  Schemas, one JSON object per line (blank lines are ignored):
 *    corpus:  {"id": str, "vector": [num...], "metadata": {str: str}?}
 *    queries: {"qid": str, "vector": [num...], "instruction": str?}
 *    qrels:   {"qid": str, "doc_id": str, "rel": int >= 0}
 *
 *  Loading is all-or-nothing: the first malformed line aborts with its
 *  line number and nothing is returned.
 */

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "bitscan/errors.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

namespace detail {

inline bool blank_line(const std::string& line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

inline nlohmann::json parse_line(const std::string& line,
                                 std::size_t line_no) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw MalformedLine(line_no, "not a JSON object");
  }
  return j;
}

inline std::string require_string(const nlohmann::json& j, const char* key,
                                  std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw MalformedLine(line_no, std::string("missing ") + key);
  }
  if (!it->is_string()) {
    throw MalformedLine(line_no, std::string(key) + " must be a string");
  }
  std::string value = it->get<std::string>();
  if (value.empty()) {
    throw MalformedLine(line_no, std::string(key) + " must be nonempty");
  }
  return value;
}

inline EmbeddingVector require_vector(const nlohmann::json& j,
                                      std::size_t line_no) {
  auto it = j.find("vector");
  if (it == j.end()) {
    throw MalformedLine(line_no, "missing vector");
  }
  if (!it->is_array() || it->empty()) {
    throw MalformedLine(line_no, "vector must be a nonempty array");
  }
  EmbeddingVector v;
  v.values.reserve(it->size());
  for (const auto& elem : *it) {
    if (!elem.is_number()) {
      throw MalformedLine(line_no, "vector must contain only numbers");
    }
    const auto x = elem.get<double>();
    if (!std::isfinite(x)) {
      throw MalformedLine(line_no, "vector contains a non-finite value");
    }
    v.values.push_back(static_cast<float>(x));
  }
  return v;
}

inline std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(path.string(), "cannot open for reading");
  }
  return in;
}

}  // namespace detail

/** Loads a corpus; all vectors must share one dimension. */
inline std::vector<CorpusRecord> load_corpus_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in = detail::open_for_read(path);
  std::vector<CorpusRecord> records;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  std::uint32_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_line(line)) continue;
    const nlohmann::json j = detail::parse_line(line, line_no);

    CorpusRecord rec;
    rec.doc_id = detail::require_string(j, "id", line_no);
    if (!seen_ids.insert(rec.doc_id).second) {
      throw MalformedLine(line_no, "duplicate id: " + rec.doc_id);
    }
    rec.vector = detail::require_vector(j, line_no);
    if (dim == 0) {
      dim = rec.vector.dim();
    } else if (rec.vector.dim() != dim) {
      throw InconsistentDim(line_no);
    }
    if (auto it = j.find("metadata"); it != j.end()) {
      if (!it->is_object()) {
        throw MalformedLine(line_no, "metadata must be an object");
      }
      for (const auto& [key, value] : it->items()) {
        if (!value.is_string()) {
          throw MalformedLine(line_no, "metadata values must be strings");
        }
        rec.metadata.emplace(key, value.get<std::string>());
      }
    }
    records.push_back(std::move(rec));
  }
  if (in.bad()) {
    throw IoError(path.string(), "read failure");
  }
  return records;
}

/** Loads a query set; all vectors must share one dimension. */
inline std::vector<QueryRecord> load_queries_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in = detail::open_for_read(path);
  std::vector<QueryRecord> queries;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  std::uint32_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_line(line)) continue;
    const nlohmann::json j = detail::parse_line(line, line_no);

    QueryRecord rec;
    rec.query_id = detail::require_string(j, "qid", line_no);
    if (!seen_ids.insert(rec.query_id).second) {
      throw MalformedLine(line_no, "duplicate qid: " + rec.query_id);
    }
    rec.vector = detail::require_vector(j, line_no);
    if (dim == 0) {
      dim = rec.vector.dim();
    } else if (rec.vector.dim() != dim) {
      throw InconsistentDim(line_no);
    }
    if (auto it = j.find("instruction"); it != j.end()) {
      if (!it->is_string()) {
        throw MalformedLine(line_no, "instruction must be a string");
      }
      rec.instruction = it->get<std::string>();
    }
    queries.push_back(std::move(rec));
  }
  if (in.bad()) {
    throw IoError(path.string(), "read failure");
  }
  return queries;
}

/** Loads graded relevance labels; duplicate (qid, doc_id) pairs rejected. */
inline RelevanceJudgments load_qrels_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in = detail::open_for_read(path);
  RelevanceJudgments qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_line(line)) continue;
    const nlohmann::json j = detail::parse_line(line, line_no);

    const std::string qid = detail::require_string(j, "qid", line_no);
    const std::string doc_id = detail::require_string(j, "doc_id", line_no);
    auto it = j.find("rel");
    if (it == j.end()) {
      throw MalformedLine(line_no, "missing rel");
    }
    if (!it->is_number_integer()) {
      throw MalformedLine(line_no, "rel must be an integer");
    }
    const auto rel = it->get<std::int64_t>();
    if (rel < 0) {
      throw MalformedLine(line_no, "rel must be non-negative");
    }
    qrels.add(qid, doc_id, static_cast<std::uint32_t>(rel));
  }
  if (in.bad()) {
    throw IoError(path.string(), "read failure");
  }
  return qrels;
}

}  // namespace bitscan
