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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bitscan/binarizer.hpp"
#include "support/oracles.hpp"

using namespace bitscan;

namespace {

std::vector<bool> bits_of(const BinaryCode& code) {
  std::vector<bool> out(code.dim());
  for (std::uint32_t i = 0; i < code.dim(); ++i) out[i] = code.bit(i);
  return out;
}

}  // namespace

TEST_CASE("sign binarization thresholds at zero, zero maps to one") {
  const BinaryCode code = binarize_sign(EmbeddingVector{-0.5f, 0.0f, 0.3f, -0.1f});
  CHECK(bits_of(code) == std::vector<bool>{false, true, true, false});
}

TEST_CASE("sign binarization of the all-zero vector is all ones") {
  const BinaryCode code = binarize_sign(EmbeddingVector(std::vector<float>(8, 0.0f)));
  CHECK(bits_of(code) == std::vector<bool>(8, true));
}

TEST_CASE("sign binarization below threshold is all zeros") {
  const BinaryCode code = binarize_sign(EmbeddingVector{-1.0f, -1.0f, -1.0f});
  CHECK(bits_of(code) == std::vector<bool>(3, false));
}

TEST_CASE("sign binarization rejects non-finite input") {
  EmbeddingVector v{0.0f, std::numeric_limits<float>::quiet_NaN()};
  REQUIRE_THROWS_AS(binarize_sign(v), NonFiniteValue);
}

TEST_CASE("calibration: median threshold, frequency, entropy weight") {
  // column 0: [0.1, 0.2, 0.9] -> median 0.2, two of three at/above
  // column 1: constant -> zero information
  const std::vector<EmbeddingVector> corpus = {
      {0.1f, 5.0f}, {0.2f, 5.0f}, {0.9f, 5.0f}};
  const QuantizerModel m = calibrate_mib(corpus);

  CHECK(m.mode == QuantizerMode::kMib);
  CHECK(m.dim == 2);
  CHECK(m.thresholds[0] == 0.2f);
  CHECK(m.bit_frequencies[0] == Approx(2.0 / 3.0).margin(1e-7));
  CHECK(m.weights[0] == Approx(0.9182958340544896).margin(1e-6));
  CHECK(m.thresholds[1] == 5.0f);
  CHECK(m.bit_frequencies[1] == 1.0f);
  CHECK(m.weights[1] == 0.0);
}

TEST_CASE("calibration: two-point columns use the lower median") {
  const std::vector<EmbeddingVector> corpus = {{0.0f, 1.0f}, {1.0f, 0.0f}};
  const QuantizerModel m = calibrate_mib(corpus);
  CHECK(m.thresholds == std::vector<float>{0.0f, 0.0f});
  CHECK(m.bit_frequencies == std::vector<float>{1.0f, 1.0f});
  CHECK(m.weights == std::vector<double>{0.0, 0.0});
}

TEST_CASE("calibration rejects tiny or inconsistent corpora") {
  REQUIRE_THROWS_AS(calibrate_mib({}), EmptyCorpus);
  const std::vector<EmbeddingVector> one = {{1.0f, 2.0f}};
  REQUIRE_THROWS_AS(calibrate_mib(one), EmptyCorpus);
  const std::vector<EmbeddingVector> ragged = {{1.0f, 2.0f}, {1.0f}};
  REQUIRE_THROWS_AS(calibrate_mib(ragged), DimensionMismatch);
}

TEST_CASE("model invariant: weight equals entropy of frequency") {
  std::mt19937_64 rng(21);
  std::vector<EmbeddingVector> corpus;
  for (int i = 0; i < 33; ++i) {
    corpus.push_back(testsupport::random_vector(rng, 24));
  }
  const QuantizerModel m = calibrate_mib(corpus);
  for (std::uint32_t d = 0; d < m.dim; ++d) {
    CHECK(std::abs(m.weights[d] -
                   binary_entropy(static_cast<double>(m.bit_frequencies[d]))) <
          1e-12);
  }
}

TEST_CASE("threshold binarization compares with >=") {
  const QuantizerModel m = [] {
    QuantizerModel q;
    q.mode = QuantizerMode::kMib;
    q.dim = 2;
    q.thresholds = {0.2f, 0.2f};
    q.bit_frequencies = {0.5f, 0.5f};
    q.weights = {1.0, 1.0};
    return q;
  }();
  CHECK(bits_of(binarize_mib(EmbeddingVector{0.3f, 0.1f}, m)) ==
        std::vector<bool>{true, false});
  // boundary: equal to the threshold maps to one
  CHECK(bits_of(binarize_mib(EmbeddingVector{0.2f, 0.2f}, m)) ==
        std::vector<bool>{true, true});
  REQUIRE_THROWS_AS(binarize_mib(EmbeddingVector{0.1f}, m),
                    DimensionMismatch);
}

TEST_CASE("zero thresholds reduce to sign binarization") {
  std::mt19937_64 rng(22);
  QuantizerModel zero;
  zero.mode = QuantizerMode::kMib;
  zero.dim = 93;
  zero.thresholds.assign(93, 0.0f);
  zero.bit_frequencies.assign(93, 0.5f);
  zero.weights.assign(93, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const EmbeddingVector v = testsupport::random_vector(rng, 93);
    CHECK(binarize_mib(v, zero) == binarize_sign(v));
  }
}

TEST_CASE("median calibration keeps bit frequencies near one half") {
  // distinct column values, even count: frequency within 1/n of 1/2
  std::mt19937_64 rng(23);
  const std::size_t n = 100;
  std::vector<EmbeddingVector> corpus;
  for (std::size_t i = 0; i < n; ++i) {
    corpus.push_back(testsupport::random_vector(rng, 16));
  }
  const QuantizerModel m = calibrate_mib(corpus);
  const double slack = 1.0 / static_cast<double>(n);
  for (std::uint32_t d = 0; d < m.dim; ++d) {
    CHECK(m.bit_frequencies[d] >= 0.5 - slack);
    CHECK(m.bit_frequencies[d] <= 0.5 + slack);
    CHECK(m.weights[d] >= binary_entropy(0.5 - slack));
  }
}

TEST_CASE("crossing one threshold flips exactly that bit") {
  std::mt19937_64 rng(24);
  std::vector<EmbeddingVector> corpus;
  for (int i = 0; i < 51; ++i) {
    corpus.push_back(testsupport::random_vector(rng, 40));
  }
  const QuantizerModel m = calibrate_mib(corpus);

  for (int trial = 0; trial < 200; ++trial) {
    EmbeddingVector v = testsupport::random_vector(rng, 40);
    const BinaryCode before = binarize_mib(v, m);
    const auto d = static_cast<std::uint32_t>(rng() % 40);
    // push the value to the other side of threshold d
    v.values[d] = before.bit(d) ? m.thresholds[d] - 0.5f
                                : m.thresholds[d] + 0.5f;
    const BinaryCode after = binarize_mib(v, m);
    for (std::uint32_t i = 0; i < 40; ++i) {
      if (i == d) {
        CHECK(after.bit(i) != before.bit(i));
      } else {
        CHECK(after.bit(i) == before.bit(i));
      }
    }
  }
}

TEST_CASE("sign model carries uniform weights") {
  const QuantizerModel m = make_sign_model(12);
  CHECK(m.mode == QuantizerMode::kSign);
  CHECK(m.thresholds == std::vector<float>(12, 0.0f));
  CHECK(m.weights == std::vector<double>(12, 1.0));
}
