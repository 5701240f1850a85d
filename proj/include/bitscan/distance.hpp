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

/** \file distance.hpp
 *  \brief Bitwise distance kernels over packed codes: Hamming distance,
 *         batch scanning, and entropy-weighted agreement scoring.
 *
 *  All kernels assume the BinaryCode padding invariant (bits >= dim are
 *  zero), which keeps the per-word loop branch-free. There is no early-exit
 *  thresholding: scan time is data-independent, so identical inputs always
 *  take the same path and produce identical results.
 */

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

#if defined(__AVX512VPOPCNTDQ__) && defined(__AVX512VL__)
#define BITSCAN_HAS_AVX512_POPCNT 1
#include <immintrin.h>
#else
#define BITSCAN_HAS_AVX512_POPCNT 0
#endif

#include "bitscan/errors.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

/** Non-owning view over `count` codes packed back to back, each
 *  `BinaryCode::words_needed(dim)` words wide. */
struct CodeBlockView {
  const std::uint64_t* words = nullptr;
  std::size_t count = 0;
  std::uint32_t dim = 0;

  [[nodiscard]] std::size_t words_per_code() const {
    return BinaryCode::words_needed(dim);
  }
  [[nodiscard]] const std::uint64_t* code(std::size_t i) const {
    return words + i * words_per_code();
  }
};

namespace detail {

/** XOR-popcount over `nwords` words. Scalar path, unrolled by four. */
inline std::uint32_t hamming_words_scalar(const std::uint64_t* a,
                                          const std::uint64_t* b,
                                          std::size_t nwords) {
  std::uint64_t acc0 = 0, acc1 = 0, acc2 = 0, acc3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= nwords; i += 4) {
    acc0 += std::popcount(a[i] ^ b[i]);
    acc1 += std::popcount(a[i + 1] ^ b[i + 1]);
    acc2 += std::popcount(a[i + 2] ^ b[i + 2]);
    acc3 += std::popcount(a[i + 3] ^ b[i + 3]);
  }
  for (; i < nwords; ++i) {
    acc0 += std::popcount(a[i] ^ b[i]);
  }
  return static_cast<std::uint32_t>(acc0 + acc1 + acc2 + acc3);
}

#if BITSCAN_HAS_AVX512_POPCNT
inline std::uint32_t hamming_words_avx512(const std::uint64_t* a,
                                          const std::uint64_t* b,
                                          std::size_t nwords) {
  __m512i acc = _mm512_setzero_si512();
  std::size_t i = 0;
  for (; i + 8 <= nwords; i += 8) {
    __m512i va = _mm512_loadu_si512(a + i);
    __m512i vb = _mm512_loadu_si512(b + i);
    acc = _mm512_add_epi64(acc, _mm512_popcnt_epi64(_mm512_xor_si512(va, vb)));
  }
  auto total = static_cast<std::uint32_t>(_mm512_reduce_add_epi64(acc));
  return total + hamming_words_scalar(a + i, b + i, nwords - i);
}
#endif

}  // namespace detail

/** Raw word-level Hamming distance; callers guarantee matching widths and
 *  the zero-padding invariant. */
inline std::uint32_t hamming_words(const std::uint64_t* a,
                                   const std::uint64_t* b,
                                   std::size_t nwords) {
#if BITSCAN_HAS_AVX512_POPCNT
  return detail::hamming_words_avx512(a, b, nwords);
#else
  return detail::hamming_words_scalar(a, b, nwords);
#endif
}

/** Hamming distance between two codes of equal dimension. */
inline std::uint32_t hamming(const BinaryCode& a, const BinaryCode& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(a.dim(), b.dim());
  }
  return hamming_words(a.data(), b.data(), a.word_count());
}

/** Entropy-weighted bit agreement.
 *
 *  score = sum over dimensions i of weights[i] * [q_i == d_i], so a pair
 *  that agrees everywhere scores sum(weights) and uniform unit weights
 *  reduce the ordering to ascending Hamming distance. Dimensions that are
 *  near-constant across the calibration corpus contribute almost nothing;
 *  near-uniform dimensions contribute most.
 */
inline double its_score_words(const std::uint64_t* qw, const std::uint64_t* dw,
                              std::uint32_t dim,
                              std::span<const double> weights) {
  double score = 0.0;
  const std::size_t nwords = BinaryCode::words_needed(dim);
  for (std::size_t w = 0; w < nwords; ++w) {
    // agreement bits, with padding masked out of the final word
    std::uint64_t agree = ~(qw[w] ^ dw[w]);
    if (w + 1 == nwords) {
      agree &= BinaryCode::tail_mask(dim);
    }
    const std::size_t base = w << 6;
    while (agree != 0) {
      const int bit = std::countr_zero(agree);
      score += weights[base + static_cast<std::size_t>(bit)];
      agree &= agree - 1;
    }
  }
  return score;
}

inline double its_score(const BinaryCode& q, const BinaryCode& d,
                        std::span<const double> weights) {
  if (q.dim() != d.dim()) {
    throw DimensionMismatch(q.dim(), d.dim());
  }
  if (weights.size() != q.dim()) {
    throw DimensionMismatch(weights.size(), q.dim());
  }
  return its_score_words(q.data(), d.data(), q.dim(), weights);
}

/** Distances from one query code to every code in a packed block.
 *  out[j] == hamming(q, block[j]), bit-exact with the scalar kernel. */
inline void batch_hamming(const BinaryCode& q, const CodeBlockView& block,
                          std::span<std::uint32_t> out) {
  if (q.dim() != block.dim) {
    throw DimensionMismatch(q.dim(), block.dim);
  }
  if (out.size() < block.count) {
    throw InvalidParams("output buffer smaller than code block");
  }
  const std::size_t wpc = block.words_per_code();
  const std::uint64_t* qw = q.data();
  const std::uint64_t* row = block.words;
  for (std::size_t j = 0; j < block.count; ++j, row += wpc) {
    out[j] = hamming_words(qw, row, wpc);
  }
}

}  // namespace bitscan
