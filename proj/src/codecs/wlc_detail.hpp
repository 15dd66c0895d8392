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

#include <vector>

#include "pcmenc/codecs.hpp"

namespace pcmenc::detail {

inline constexpr CellState kFlagCompressed = CellState::S1;
inline constexpr CellState kFlagUncompressed = CellState::S2;

/// Choices read back from one word's reclaimed field.
struct WordChoices {
  int group = 0;                // WLCRC only
  std::vector<int> candidates;  // per block, MS block first
};

const CandidateTable& wlc_table(Scheme s);

EncodedLine encode_uncompressed(const MemoryLine& line);
void emit_word(std::uint64_t word, const WordLayout& layout, std::uint64_t aux_value,
               std::span<const CosetCandidate* const> block_cands, std::span<CellState> out);
WordChoices read_word_choices(std::span<const CellState> cells, const WordLayout& layout, const SchemeConfig& cfg);

EncodedLine encode_wlcrc_with(const MemoryLine& line, const EncodedLine& old, const WordLayout& layout,
                              const EnergyModel& model, double threshold);
EncodedLine encode_wlc_table_with(const MemoryLine& line, const EncodedLine& old, const CandidateTable& table,
                                  const WordLayout& layout, const EnergyModel& model);
MemoryLine decode_wlc(const EncodedLine& enc, const SchemeConfig& cfg, const WordLayout& layout);

}  // namespace pcmenc::detail
