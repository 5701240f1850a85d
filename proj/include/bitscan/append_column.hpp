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

/** \file append_column.hpp
 *  \brief Append-only chunked column storage with stable row addresses.
 *
 *  Rows live in geometrically growing chunks that are allocated once and
 *  never moved or freed while the column exists, so readers can hold row
 *  pointers across concurrent appends. Chunk slot s holds
 *  kBaseRows << s rows; 48 slots cover ~2^57 rows.
 *
 *  Concurrency contract: one writer thread calls ensure_row/row-for-write;
 *  any number of readers access rows they learned about through an acquire
 *  load of an external row counter published after the write (see
 *  Namespace). The column itself does not count rows.
 */

#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>

namespace bitscan {

template <typename T>
class AppendColumn {
 public:
  static constexpr std::uint32_t kBaseRowsLog2 = 10;  // 1024 rows in slot 0
  static constexpr std::uint32_t kSlots = 48;

  /** `stride` = elements of T per row (e.g. words per packed code). */
  explicit AppendColumn(std::size_t stride = 1) : stride_(stride) {}

  AppendColumn(const AppendColumn&) = delete;
  AppendColumn& operator=(const AppendColumn&) = delete;

  ~AppendColumn() {
    for (auto& slot : chunks_) {
      delete[] slot.load(std::memory_order_relaxed);
    }
  }

  [[nodiscard]] std::size_t stride() const { return stride_; }

  /** Writer side: allocates the chunk containing `row` if needed and
   *  returns the row's first element. */
  T* ensure_row(std::uint64_t row) {
    const Location loc = locate(row);
    T* chunk = chunks_[loc.slot].load(std::memory_order_acquire);
    if (chunk == nullptr) {
      chunk = new T[rows_in_slot(loc.slot) * stride_]();
      chunks_[loc.slot].store(chunk, std::memory_order_release);
    }
    return chunk + loc.offset * stride_;
  }

  /** Reader side: row must already be published. */
  [[nodiscard]] const T* row(std::uint64_t r) const {
    const Location loc = locate(r);
    const T* chunk = chunks_[loc.slot].load(std::memory_order_acquire);
    return chunk + loc.offset * stride_;
  }

  [[nodiscard]] T* row(std::uint64_t r) {
    const Location loc = locate(r);
    T* chunk = chunks_[loc.slot].load(std::memory_order_acquire);
    return chunk + loc.offset * stride_;
  }

  /** Visits the first `row_count` rows as contiguous chunks:
   *  fn(const T* data, uint64_t first_row, size_t rows). */
  template <typename Fn>
  void for_each_chunk(std::uint64_t row_count, Fn&& fn) const {
    std::uint64_t first = 0;
    for (std::uint32_t slot = 0; first < row_count; ++slot) {
      const std::uint64_t in_slot = rows_in_slot(slot);
      const std::uint64_t rows =
          std::min<std::uint64_t>(in_slot, row_count - first);
      const T* chunk = chunks_[slot].load(std::memory_order_acquire);
      fn(chunk, first, static_cast<std::size_t>(rows));
      first += rows;
    }
  }

  [[nodiscard]] static constexpr std::uint64_t rows_in_slot(
      std::uint32_t slot) {
    return std::uint64_t{1} << (kBaseRowsLog2 + slot);
  }

 private:
  struct Location {
    std::uint32_t slot;
    std::uint64_t offset;
  };

  /** Slot s covers rows [kBase*(2^s - 1), kBase*(2^(s+1) - 1)). */
  [[nodiscard]] static constexpr Location locate(std::uint64_t row) {
    const std::uint64_t m = (row >> kBaseRowsLog2) + 1;
    const auto slot = static_cast<std::uint32_t>(std::bit_width(m) - 1);
    const std::uint64_t slot_first = ((std::uint64_t{1} << slot) - 1)
                                     << kBaseRowsLog2;
    return {slot, row - slot_first};
  }

  std::size_t stride_;
  std::array<std::atomic<T*>, kSlots> chunks_{};
};

}  // namespace bitscan
