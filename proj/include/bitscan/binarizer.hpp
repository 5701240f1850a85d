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

/** \file binarizer.hpp
 *  \brief Float-to-binary quantization: sign thresholding and calibrated
 *         median thresholding ("mib" mode), plus the per-dimension
 *         information weights consumed by entropy-weighted rescoring.
 *
 *  The "mib" calibrator is this project's own construction, not a
 *  reimplementation of any vendor quantizer: it places each threshold at the
 *  per-dimension corpus median, which maximizes the marginal Shannon entropy
 *  of every output bit. A dimension whose bits split 50/50 across the corpus
 *  carries one full bit of information; a constant dimension carries zero
 *  and gets weight zero.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "bitscan/errors.hpp"
#include "bitscan/types.hpp"

namespace bitscan {

/** Shannon entropy of a Bernoulli(p) bit, in bits. 0*log2(0) := 0. */
inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

/** Quantization mode. Values double as the on-disk mode byte. */
enum class QuantizerMode : std::uint8_t {
  kSign = 0,  ///< threshold 0 on every dimension
  kMib = 1,   ///< calibrated per-dimension median thresholds
};

/** Per-dimension thresholds plus the calibration statistics that drive
 *  entropy-weighted scoring. Immutable once built; weights are frozen at
 *  calibration time and not updated by later inserts.
 *
 *  Thresholds and bit frequencies are held at float32 (their on-disk
 *  precision); weights are derived from the float32 frequencies in double,
 *  so a save/load round trip reproduces them exactly.
 */
struct QuantizerModel {
  QuantizerMode mode = QuantizerMode::kSign;
  std::uint32_t dim = 0;
  std::vector<float> thresholds;       ///< length dim; all zero in sign mode
  std::vector<float> bit_frequencies;  ///< P(bit i == 1) over the calibration corpus
  std::vector<double> weights;         ///< binary_entropy(bit_frequencies[i])
};

/** Sign-threshold model: thresholds 0, uniform weights (frequency 1/2). */
inline QuantizerModel make_sign_model(std::uint32_t dim) {
  QuantizerModel m;
  m.mode = QuantizerMode::kSign;
  m.dim = dim;
  m.thresholds.assign(dim, 0.0f);
  m.bit_frequencies.assign(dim, 0.5f);
  m.weights.assign(dim, 1.0);
  return m;
}

/** Rebuilds the derived weights from stored float32 frequencies.
 *  Used by the index loader so weights match calibration bit-exactly. */
inline void rederive_weights(QuantizerModel& m) {
  m.weights.resize(m.bit_frequencies.size());
  for (std::size_t i = 0; i < m.bit_frequencies.size(); ++i) {
    m.weights[i] = binary_entropy(static_cast<double>(m.bit_frequencies[i]));
  }
}

/** Sign binarization: bit i = 1 iff v[i] >= 0. */
inline BinaryCode binarize_sign(const EmbeddingVector& v) {
  validate_vector(v, v.dim());  // finiteness only; dim is self-consistent
  BinaryCode code(v.dim());
  for (std::uint32_t i = 0; i < v.dim(); ++i) {
    if (v.values[i] >= 0.0f) code.set_bit(i);
  }
  return code;
}

/** Threshold binarization: bit i = 1 iff v[i] >= thresholds[i]. */
inline BinaryCode binarize_mib(const EmbeddingVector& v,
                               const QuantizerModel& m) {
  if (v.dim() != m.dim) {
    throw DimensionMismatch(v.dim(), m.dim);
  }
  validate_vector(v, m.dim);
  BinaryCode code(m.dim);
  for (std::uint32_t i = 0; i < m.dim; ++i) {
    if (v.values[i] >= m.thresholds[i]) code.set_bit(i);
  }
  return code;
}

/** Binarizes with whichever mode the model was calibrated for. */
inline BinaryCode binarize(const EmbeddingVector& v, const QuantizerModel& m) {
  // Sign-mode thresholds are all zero, so one code path serves both modes.
  return binarize_mib(v, m);
}

/** Calibrates median thresholds and entropy weights over a corpus sample.
 *
 *  thresholds[i]      = lower median of column i (the lower middle order
 *                       statistic for even counts, so the threshold is
 *                       always an attained corpus value)
 *  bit_frequencies[i] = fraction of the sample with values[i] >= threshold
 *  weights[i]         = binary_entropy(bit_frequencies[i])
 *
 *  Requires at least two vectors, all of one dimension.
 */
inline QuantizerModel calibrate_mib(
    std::span<const EmbeddingVector> corpus_vectors) {
  if (corpus_vectors.size() < 2) {
    throw EmptyCorpus();
  }
  const std::uint32_t dim = corpus_vectors.front().dim();
  for (const auto& v : corpus_vectors) {
    validate_vector(v, dim);
  }

  QuantizerModel m;
  m.mode = QuantizerMode::kMib;
  m.dim = dim;
  m.thresholds.resize(dim);
  m.bit_frequencies.resize(dim);
  m.weights.resize(dim);

  const std::size_t n = corpus_vectors.size();
  std::vector<float> column(n);
  for (std::uint32_t d = 0; d < dim; ++d) {
    for (std::size_t j = 0; j < n; ++j) {
      column[j] = corpus_vectors[j].values[d];
    }
    // lower median: element at index (n-1)/2 of the sorted column
    auto mid = column.begin() + static_cast<std::ptrdiff_t>((n - 1) / 2);
    std::nth_element(column.begin(), mid, column.end());
    const float threshold = *mid;

    std::size_t ones = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (corpus_vectors[j].values[d] >= threshold) ++ones;
    }
    const float freq =
        static_cast<float>(static_cast<double>(ones) / static_cast<double>(n));

    m.thresholds[d] = threshold;
    m.bit_frequencies[d] = freq;
    m.weights[d] = binary_entropy(static_cast<double>(freq));
  }
  return m;
}

}  // namespace bitscan
