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

/** \file errors.hpp
 *  \brief Exception hierarchy shared by every bitscan component.
 *
 *  All failures surface as subclasses of bitscan::Error so callers can
 *  catch broadly (CLI) or narrowly (tests, embedding applications).
 */

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bitscan {

/** Root of the bitscan exception hierarchy. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** A vector, code, or model was used with an incompatible dimension. */
class DimensionMismatch final : public Error {
 public:
  DimensionMismatch(std::size_t found_dim, std::size_t expected_dim)
      : Error("dimension mismatch: found " + std::to_string(found_dim) +
              ", expected " + std::to_string(expected_dim)),
        found(found_dim),
        expected(expected_dim) {}

  std::size_t found;
  std::size_t expected;
};

/** A vector contains NaN or infinity. */
class NonFiniteValue final : public Error {
 public:
  explicit NonFiniteValue(std::size_t at_index)
      : Error("non-finite value at index " + std::to_string(at_index)),
        index(at_index) {}

  std::size_t index;
};

/** Calibration was attempted on fewer than two vectors. */
class EmptyCorpus final : public Error {
 public:
  EmptyCorpus() : Error("calibration requires at least two vectors") {}
};

/** Namespace name already registered. */
class NameConflict final : public Error {
 public:
  explicit NameConflict(const std::string& name)
      : Error("namespace already exists: " + name) {}
};

/** Insert with a doc_id that is already live. */
class DuplicateDocId final : public Error {
 public:
  explicit DuplicateDocId(const std::string& doc_id)
      : Error("doc_id already live: " + doc_id) {}
};

/** Delete of a doc_id that is not live. */
class UnknownDocId final : public Error {
 public:
  explicit UnknownDocId(const std::string& doc_id)
      : Error("unknown doc_id: " + doc_id) {}
};

/** Lookup of a namespace that was never created. */
class UnknownNamespace final : public Error {
 public:
  explicit UnknownNamespace(const std::string& name)
      : Error("unknown namespace: " + name) {}
};

/** Cosine similarity is undefined for zero-norm vectors. */
class ZeroNorm final : public Error {
 public:
  explicit ZeroNorm(const std::string& id)
      : Error("zero-norm vector: " + id) {}
};

/** Two ranked lists for different queries were compared. */
class QueryMismatch final : public Error {
 public:
  QueryMismatch(const std::string& a, const std::string& b)
      : Error("query_id mismatch: '" + a + "' vs '" + b + "'") {}
};

/** File could not be opened, read, or written. */
class IoError final : public Error {
 public:
  IoError(const std::string& path, const std::string& detail)
      : Error("io error on " + path + ": " + detail) {}
};

/** A JSONL line violates the expected schema. */
class MalformedLine final : public Error {
 public:
  MalformedLine(std::size_t line_number, const std::string& reason)
      : Error("line " + std::to_string(line_number) + ": " + reason),
        line(line_number) {}

  std::size_t line;
};

/** A JSONL vector disagrees with the dimension established earlier. */
class InconsistentDim final : public Error {
 public:
  explicit InconsistentDim(std::size_t line_number)
      : Error("line " + std::to_string(line_number) +
              ": vector dimension differs from earlier lines"),
        line(line_number) {}

  std::size_t line;
};

/** The same (query_id, doc_id) pair was judged twice. */
class DuplicateQrel final : public Error {
 public:
  DuplicateQrel(const std::string& qid, const std::string& doc_id)
      : Error("duplicate qrel for (" + qid + ", " + doc_id + ")") {}
};

/** Stored checksum does not match the file contents. */
class ChecksumMismatch final : public Error {
 public:
  ChecksumMismatch() : Error("index checksum mismatch") {}
};

/** Magic bytes or format version not recognized. */
class UnsupportedVersion final : public Error {
 public:
  explicit UnsupportedVersion(const std::string& detail)
      : Error("unsupported index file: " + detail) {}
};

/** Index payload is internally inconsistent despite a valid checksum. */
class CorruptIndex final : public Error {
 public:
  explicit CorruptIndex(const std::string& detail)
      : Error("corrupt index file: " + detail) {}
};

/** Caller-supplied parameters are out of range. */
class InvalidParams final : public Error {
 public:
  explicit InvalidParams(const std::string& detail)
      : Error("invalid parameters: " + detail) {}
};

/** Statistics requested over an empty sample set. */
class EmptySamples final : public Error {
 public:
  EmptySamples() : Error("latency summary requires at least one sample") {}
};

}  // namespace bitscan
