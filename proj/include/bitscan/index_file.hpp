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

/** \file index_file.hpp
 *  \brief Bit-exact on-disk index format.
 *
 *  Layout, all integers little-endian:
 *    magic            8 bytes, "BSCANIDX"
 *    format_version   u32 (currently 1)
 *    dim              u32
 *    count            u64 (live documents; tombstones are compacted away)
 *    mode             u8  (0 = sign, 1 = mib)
 *    thresholds       dim x f32
 *    weights          dim x f32
 *    bit_frequencies  dim x f32
 *    codes            count x ceil(dim/64) u64
 *    doc_id table     count x (u32 length + UTF-8 bytes)
 *    metadata blob    count x (u32 length + UTF-8 JSON; length 0 = none)
 *    checksum         u64 FNV-1a over every preceding byte
 *
 *  The in-memory scoring weights are rederived from the stored f32 bit
 *  frequencies on load, so search responses are identical before a save
 *  and after the matching load.
 */

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bitscan/binarizer.hpp"
#include "bitscan/engine.hpp"
#include "bitscan/errors.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

inline constexpr std::string_view kIndexMagic = "BSCANIDX";
inline constexpr std::uint32_t kIndexFormatVersion = 1;

/** FNV-1a, 64-bit. Stable across platforms; documented offset basis and
 *  prime so other implementations can interoperate. */
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ull;
  static constexpr std::uint64_t kPrime = 0x100000001b3ull;

  void update(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= bytes[i];
      hash_ *= kPrime;
    }
  }

  [[nodiscard]] std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = kOffsetBasis;
};

namespace detail {

class ChecksummingWriter {
 public:
  ChecksummingWriter(std::ostream& os, const std::string& path)
      : os_(os), path_(path) {}

  void bytes(const void* data, std::size_t size) {
    hash_.update(data, size);
    os_.write(static_cast<const char*>(data),
              static_cast<std::streamsize>(size));
    if (!os_) {
      throw IoError(path_, "write failure");
    }
  }

  void u8(std::uint8_t v) { bytes(&v, 1); }

  void u32(std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = (v >> (8 * i)) & 0xff;
    bytes(buf, 4);
  }

  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = (v >> (8 * i)) & 0xff;
    bytes(buf, 8);
  }

  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }

  void length_prefixed(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    if (!s.empty()) bytes(s.data(), s.size());
  }

  /** Writes the digest itself (not folded into the hash). */
  void finish() {
    const std::uint64_t digest = hash_.digest();
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = (digest >> (8 * i)) & 0xff;
    os_.write(reinterpret_cast<const char*>(buf), 8);
    if (!os_) {
      throw IoError(path_, "write failure");
    }
  }

 private:
  Fnv1a64 hash_;
  std::ostream& os_;
  std::string path_;
};

class Cursor {
 public:
  Cursor(const unsigned char* data, std::size_t size)
      : data_(data), size_(size) {}

  void bytes(void* out, std::size_t n) {
    if (pos_ + n > size_) {
      throw CorruptIndex("payload shorter than declared lengths");
    }
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }

  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }

  std::uint32_t u32() {
    unsigned char buf[4];
    bytes(buf, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{buf[i]} << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    unsigned char buf[8];
    bytes(buf, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
    return v;
  }

  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::string length_prefixed() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    if (n != 0) bytes(s.data(), n);
    return s;
  }

  [[nodiscard]] bool exhausted() const { return pos_ == size_; }

 private:
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/** Writes the live contents of a namespace. Tombstoned rows are dropped
 *  (compaction happens on save); live rows keep their relative order, so
 *  reloaded results rank identically. */
inline void save_index(const Namespace& ns,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(path.string(), "cannot open for writing");
  }
  detail::ChecksummingWriter w(out, path.string());

  const Snapshot snap = ns.snapshot();
  std::vector<std::uint64_t> live;
  for (std::uint64_t ord = 0; ord < snap.count; ++ord) {
    if (!ns.tombstoned(ord)) live.push_back(ord);
  }

  const QuantizerModel& q = ns.quantizer();
  w.bytes(kIndexMagic.data(), kIndexMagic.size());
  w.u32(kIndexFormatVersion);
  w.u32(ns.dim());
  w.u64(live.size());
  w.u8(static_cast<std::uint8_t>(q.mode));
  for (float t : q.thresholds) w.f32(t);
  for (double wt : q.weights) w.f32(static_cast<float>(wt));
  for (float f : q.bit_frequencies) w.f32(f);

  const std::size_t words = ns.code_words();
  for (std::uint64_t ord : live) {
    const std::uint64_t* code = ns.code_at(ord);
    for (std::size_t i = 0; i < words; ++i) {
      w.u64(code[i]);
    }
  }
  for (std::uint64_t ord : live) {
    w.length_prefixed(ns.doc_id_at(ord));
  }
  for (std::uint64_t ord : live) {
    const Metadata& md = ns.metadata_at(ord);
    if (md.empty()) {
      w.length_prefixed({});
    } else {
      w.length_prefixed(nlohmann::json(md).dump());
    }
  }
  w.finish();
  out.close();
  if (!out) {
    throw IoError(path.string(), "close failure");
  }
}

/** Reads an index file and registers its contents as a new namespace. */
inline Namespace& load_index(const std::filesystem::path& path, Store& store,
                             const std::string& namespace_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path.string(), "cannot open for reading");
  }
  std::vector<unsigned char> data(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError(path.string(), "read failure");
  }

  if (data.size() < kIndexMagic.size() + 4 ||
      std::memcmp(data.data(), kIndexMagic.data(), kIndexMagic.size()) != 0) {
    throw UnsupportedVersion("bad magic bytes");
  }
  if (data.size() < kIndexMagic.size() + 4 + 8) {
    throw ChecksumMismatch();
  }

  // checksum covers everything but the trailing digest
  Fnv1a64 hash;
  hash.update(data.data(), data.size() - 8);
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) {
    stored |= std::uint64_t{data[data.size() - 8 + i]} << (8 * i);
  }
  if (hash.digest() != stored) {
    throw ChecksumMismatch();
  }

  detail::Cursor cur(data.data(), data.size() - 8);
  unsigned char magic[8];
  cur.bytes(magic, 8);
  const std::uint32_t version = cur.u32();
  if (version != kIndexFormatVersion) {
    throw UnsupportedVersion("format version " + std::to_string(version));
  }
  const std::uint32_t dim = cur.u32();
  const std::uint64_t count = cur.u64();
  const std::uint8_t mode = cur.u8();
  if (dim == 0) {
    throw CorruptIndex("dim is zero");
  }
  if (mode > 1) {
    throw CorruptIndex("unknown mode byte " + std::to_string(mode));
  }

  QuantizerModel q;
  q.mode = static_cast<QuantizerMode>(mode);
  q.dim = dim;
  q.thresholds.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) q.thresholds[i] = cur.f32();
  for (std::uint32_t i = 0; i < dim; ++i) cur.f32();  // stored weights
  q.bit_frequencies.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) q.bit_frequencies[i] = cur.f32();
  rederive_weights(q);

  const std::size_t words = BinaryCode::words_needed(dim);
  std::vector<std::vector<std::uint64_t>> codes(count);
  for (std::uint64_t d = 0; d < count; ++d) {
    codes[d].resize(words);
    for (std::size_t i = 0; i < words; ++i) {
      codes[d][i] = cur.u64();
    }
  }
  std::vector<std::string> doc_ids(count);
  for (std::uint64_t d = 0; d < count; ++d) {
    doc_ids[d] = cur.length_prefixed();
    if (doc_ids[d].empty()) {
      throw CorruptIndex("empty doc_id");
    }
  }
  std::vector<Metadata> metadata(count);
  for (std::uint64_t d = 0; d < count; ++d) {
    const std::string blob = cur.length_prefixed();
    if (blob.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(blob, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw CorruptIndex("metadata blob is not a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
      if (!value.is_string()) {
        throw CorruptIndex("metadata values must be strings");
      }
      metadata[d].emplace(key, value.get<std::string>());
    }
  }
  if (!cur.exhausted()) {
    throw CorruptIndex("trailing bytes after metadata blob");
  }

  Namespace& ns = store.create_namespace(namespace_name, dim, std::move(q));
  for (std::uint64_t d = 0; d < count; ++d) {
    ns.insert_code(doc_ids[d], BinaryCode(dim, codes[d]),
                   std::move(metadata[d]));
  }
  return ns;
}

}  // namespace bitscan
