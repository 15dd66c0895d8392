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
#include <vector>

#include "pcmenc/codecs.hpp"
#include "pcmenc/kernels.hpp"

namespace pcmenc::detail {

using SymbolArray = std::array<std::uint8_t, kLineCells>;

inline SymbolArray line_symbols(const MemoryLine& line) {
  SymbolArray s;
  line.symbols(s);
  return s;
}

inline std::span<const std::uint8_t> as_bytes(std::span<const CellState> cells) {
  return {reinterpret_cast<const std::uint8_t*>(cells.data()), cells.size()};
}

inline kernels::StateLut lut_of(const CosetCandidate& c) { return c.lut(); }

void require_shape(const EncodedLine& old, std::size_t aux, bool flag, const char* scheme);

/// Packs bits (MSB of each pair first) into cells under the default mapping;
/// an odd trailing bit is padded with 0.
void pack_bits_c1(std::span<const std::uint8_t> bits, std::span<CellState> cells);
std::vector<std::uint8_t> unpack_bits_c1(std::span<const CellState> cells, std::size_t nbits);

/// Writes `symbols` under candidate `c` into `out`.
inline void write_mapped(std::span<const std::uint8_t> symbols, const CosetCandidate& c,
                         std::span<CellState> out) {
  for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = c.map(symbols[i]);
}

/// Sum of per-cell costs over [first, first + count).
inline std::int64_t range_sum(std::span<const std::int32_t> costs, int first, int count) {
  std::int64_t s = 0;
  for (int i = first; i < first + count; ++i) s += costs[i];
  return s;
}

void check_granularity_divides_line(int granularity, const char* scheme);

}  // namespace pcmenc::detail
