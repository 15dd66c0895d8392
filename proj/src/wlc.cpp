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

#include "pcmenc/wlc.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace pcmenc::wlc {

WlcConfig::WlcConfig(int k) : k_(k) {
  if (k < kMin || k > kMax)
    throw std::invalid_argument("WLC k must be in [2, 17], got " + std::to_string(k));
}

int uniform_prefix(std::uint64_t word) noexcept {
  // Leading run of the sign bit.
  return (word >> 63) ? std::countl_one(word) : std::countl_zero(word);
}

int line_uniform_prefix(const MemoryLine& line) noexcept {
  int k = 64;
  for (std::uint64_t w : line.words()) k = std::min(k, uniform_prefix(w));
  return k;
}

bool word_compressible(std::uint64_t word, const WlcConfig& cfg) noexcept {
  return uniform_prefix(word) >= cfg.k();
}

bool line_compressible(const MemoryLine& line, const WlcConfig& cfg) noexcept {
  return line_uniform_prefix(line) >= cfg.k();
}

CompressedWord compress_word(std::uint64_t word, const WlcConfig& cfg) {
  if (!word_compressible(word, cfg)) throw std::invalid_argument("word is not WLC-compressible");
  const int payload = cfg.payload_bits();
  return CompressedWord{word & ((std::uint64_t{1} << payload) - 1), 0};
}

std::uint64_t decompress_word(const CompressedWord& cw, const WlcConfig& cfg) noexcept {
  const int payload = cfg.payload_bits();
  const std::uint64_t mask = (std::uint64_t{1} << payload) - 1;
  const std::uint64_t low = cw.payload & mask;
  const bool sign = (low >> (payload - 1)) & 1u;
  return sign ? (low | ~mask) : low;
}

}  // namespace pcmenc::wlc
