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

/** \file topk.hpp
 *  \brief Bounded top-k selection over a strict ranking relation.
 */

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace bitscan {

/** Keeps the k best entries under `Better`, a strict "ranks before"
 *  relation (it must order ties deterministically, e.g. by ordinal).
 *
 *  Internally a heap whose root is the worst retained entry, so offering
 *  n entries costs O(n log k).
 */
template <typename T, typename Better>
class TopK {
 public:
  explicit TopK(std::size_t k, Better better = Better{})
      : k_(k), better_(std::move(better)) {
    heap_.reserve(k);
  }

  void offer(const T& value) {
    if (k_ == 0) return;
    if (heap_.size() < k_) {
      heap_.push_back(value);
      std::push_heap(heap_.begin(), heap_.end(), better_);
      return;
    }
    if (better_(value, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), better_);
      heap_.back() = value;
      std::push_heap(heap_.begin(), heap_.end(), better_);
    }
  }

  [[nodiscard]] std::size_t size() const { return heap_.size(); }

  /** Extracts the retained entries, best first. Leaves the selector empty. */
  [[nodiscard]] std::vector<T> take_sorted() {
    // sort_heap orders ascending under Better-as-less-than: best first.
    std::sort_heap(heap_.begin(), heap_.end(), better_);
    return std::move(heap_);
  }

 private:
  std::size_t k_;
  Better better_;
  std::vector<T> heap_;
};

}  // namespace bitscan
