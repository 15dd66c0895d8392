/*******************************************************************************
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
 *******************************************************************************/

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "pcmenc/core_model.hpp"

namespace pcmenc {

inline constexpr int kLineBits = 512;
inline constexpr int kLineWords = 8;
inline constexpr int kLineCells = 256;
inline constexpr int kWordCells = 32;

/// A 512-bit memory line held as eight 64-bit words w0..w7.
///
/// Bit and symbol order is big-endian over the whole line: w0 is the most
/// significant word, and symbol t occupies bits (63-2u, 62-2u) of word t/32
/// where u = t % 32. The hex form is 128 digits, w0 first.
class MemoryLine {
 public:
  constexpr MemoryLine() noexcept = default;
  constexpr explicit MemoryLine(const std::array<std::uint64_t, kLineWords>& words) noexcept
      : words_(words) {}

  static MemoryLine from_hex(std::string_view hex);
  std::string to_hex() const;

  constexpr std::uint64_t word(int i) const noexcept { return words_[i]; }
  constexpr void set_word(int i, std::uint64_t v) noexcept { words_[i] = v; }
  constexpr const std::array<std::uint64_t, kLineWords>& words() const noexcept { return words_; }

  Symbol symbol(int t) const noexcept {
    return static_cast<Symbol>((words_[t / kWordCells] >> (62 - 2 * (t % kWordCells))) & 3u);
  }
  /// Writes all 256 symbols in line order.
  void symbols(std::span<Symbol, kLineCells> out) const noexcept;
  static MemoryLine from_symbols(std::span<const Symbol, kLineCells> symbols) noexcept;

  MemoryLine operator~() const noexcept;
  MemoryLine operator^(const MemoryLine& o) const noexcept;
  friend bool operator==(const MemoryLine&, const MemoryLine&) noexcept = default;

  /// Little-endian memory image: word i at bytes [8i, 8i+8).
  void to_bytes(std::span<std::uint8_t, 64> out) const noexcept;
  static MemoryLine from_bytes(std::span<const std::uint8_t, 64> in) noexcept;

 private:
  std::array<std::uint64_t, kLineWords> words_{};
};

/// Symbols of one 64-bit word, most significant first.
void word_symbols(std::uint64_t word, std::span<Symbol, kWordCells> out) noexcept;
std::uint64_t word_from_symbols(std::span<const Symbol, kWordCells> symbols) noexcept;

}  // namespace pcmenc
