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

#include <cstdint>

#include "pcmenc/line.hpp"

namespace pcmenc::wlc {

/// Word-level compression parameter: number of most significant bits that
/// must be uniform for a word to compress. Valid range [2, 17].
class WlcConfig {
 public:
  static constexpr int kMin = 2;
  static constexpr int kMax = 17;

  explicit WlcConfig(int k);
  int k() const noexcept { return k_; }
  int reclaimed_bits() const noexcept { return k_ - 1; }
  int payload_bits() const noexcept { return 65 - k_; }

 private:
  int k_;
};

/// A compressed word: the low 65-k bits of the original (its top bit acts as
/// the sign) and a (k-1)-bit field the caller may fill with auxiliary data.
struct CompressedWord {
  std::uint64_t payload = 0;
  std::uint64_t reclaimed = 0;
  friend bool operator==(const CompressedWord&, const CompressedWord&) = default;
};

bool word_compressible(std::uint64_t word, const WlcConfig& cfg) noexcept;
bool line_compressible(const MemoryLine& line, const WlcConfig& cfg) noexcept;

/// Throws std::invalid_argument if the word is not compressible.
CompressedWord compress_word(std::uint64_t word, const WlcConfig& cfg);
/// Sign-extends the payload's top bit over the k-1 reclaimed positions. The
/// reclaimed field is ignored.
std::uint64_t decompress_word(const CompressedWord& cw, const WlcConfig& cfg) noexcept;

/// Largest k (1..64) for which the word's top k bits are uniform.
int uniform_prefix(std::uint64_t word) noexcept;
/// Largest k for which the whole line compresses (minimum over its words).
int line_uniform_prefix(const MemoryLine& line) noexcept;

}  // namespace pcmenc::wlc
