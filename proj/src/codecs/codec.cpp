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

#include <algorithm>
#include <limits>

#include "detail.hpp"
#include "pcmenc/wlc.hpp"
#include "wlc_detail.hpp"

namespace pcmenc {

using detail::SymbolArray;

namespace {

const CandidateTable& independent_table(Scheme s) {
  switch (s) {
    case Scheme::SixCosets: return six_cosets_table();
    case Scheme::FourCosets: return CandidateTable::four_cosets();
    case Scheme::ThreeCosets: return CandidateTable::three_cosets();
    default: throw std::logic_error("not an independent-table scheme");
  }
}

std::span<const MemoryLine> masks_of(const SchemeConfig& cfg) {
  return cfg.masks.empty() ? std::span<const MemoryLine>(default_xor_masks()) : std::span<const MemoryLine>(cfg.masks);
}

std::size_t aux_cells_for(const SchemeConfig& cfg) {
  const int blocks = kLineBits / cfg.granularity;
  switch (cfg.scheme) {
    case Scheme::Fnw: return static_cast<std::size_t>((blocks + 1) / 2);
    case Scheme::XorCoset: return 2;
    case Scheme::SixCosets:
    case Scheme::FourCosets:
    case Scheme::ThreeCosets:
      return independent_table(cfg.scheme).aux_cells_per_choice() * static_cast<std::size_t>(blocks);
    case Scheme::RestrictedLine: return static_cast<std::size_t>((blocks + 2) / 2);
    default: return 0;
  }
}

MemoryLine decode_c1_data(const EncodedLine& enc) {
  SymbolArray sym;
  invert_coset(candidate_c1(), enc.data(), std::span(sym));
  return MemoryLine::from_symbols(sym);
}

// Decodes the data cells block by block with per-block candidates.
MemoryLine decode_blocks(const EncodedLine& enc, int granularity, std::span<const CosetCandidate* const> per_block) {
  const int cells_per_block = granularity / 2;
  SymbolArray sym;
  for (std::size_t b = 0; b < per_block.size(); ++b) {
    const auto first = b * static_cast<std::size_t>(cells_per_block);
    invert_coset(*per_block[b], enc.data().subspan(first, cells_per_block),
                 std::span(sym).subspan(first, cells_per_block));
  }
  return MemoryLine::from_symbols(sym);
}

CosetCandidate complemented_c1() {
  std::array<CellState, 4> image{};
  for (Symbol s = 0; s < 4; ++s) image[s] = candidate_c1().map(static_cast<Symbol>(3 - s));
  return CosetCandidate(-1, image);
}

int xor_index(const EncodedLine& enc) {
  const auto bits = detail::unpack_bits_c1(enc.aux(), 4);
  return (bits[0] << 3) | (bits[1] << 2) | (bits[2] << 1) | bits[3];
}

}  // namespace

EncodedLine encode(const MemoryLine& line, const EncodedLine& old, const SchemeConfig& cfg, const EnergyModel& model) {
  switch (cfg.scheme) {
    case Scheme::Baseline: return encode_baseline(line);
    case Scheme::Fnw: return encode_fnw(line, old, model, cfg.granularity);
    case Scheme::XorCoset: return encode_xor_coset(line, old, masks_of(cfg), model);
    case Scheme::SixCosets: return encode_6cosets(line, old, cfg.granularity, model);
    case Scheme::FourCosets:
    case Scheme::ThreeCosets:
      return encode_table_cosets(line, old, independent_table(cfg.scheme), cfg.granularity, model);
    case Scheme::RestrictedLine: return encode_restricted_line(line, old, cfg.granularity, model);
    case Scheme::Wlcrc: return detail::encode_wlcrc_with(line, old, wlc_word_layout(cfg), model, cfg.threshold);
    case Scheme::WlcFourCosets:
    case Scheme::WlcThreeCosets:
    case Scheme::WlcOnly:
      return detail::encode_wlc_table_with(line, old, detail::wlc_table(cfg.scheme), wlc_word_layout(cfg), model);
  }
  throw std::logic_error("unhandled scheme");
}

MemoryLine decode(const EncodedLine& enc, const SchemeConfig& cfg) {
  const std::size_t aux = aux_cells_for(cfg);
  const bool flag = cfg.uses_wlc();
  if (enc.aux_count != aux || enc.has_flag != flag || enc.size() != kLineCells + aux + (flag ? 1 : 0))
    throw DecodeError(cfg.name() + ": encoded line has the wrong cell layout");

  switch (cfg.scheme) {
    case Scheme::Baseline: return decode_c1_data(enc);
    case Scheme::XorCoset: return decode_c1_data(enc) ^ masks_of(cfg)[static_cast<std::size_t>(xor_index(enc))];
    case Scheme::Fnw: {
      const int blocks = kLineBits / cfg.granularity;
      const auto flips = detail::unpack_bits_c1(enc.aux(), static_cast<std::size_t>(blocks));
      const CosetCandidate inv = complemented_c1();
      std::vector<const CosetCandidate*> per(blocks);
      for (int b = 0; b < blocks; ++b) per[b] = flips[b] ? &inv : &candidate_c1();
      return decode_blocks(enc, cfg.granularity, per);
    }
    case Scheme::SixCosets:
    case Scheme::FourCosets:
    case Scheme::ThreeCosets:
    case Scheme::RestrictedLine: {
      const auto ids = committed_candidates(enc, cfg);
      const auto& cands = cfg.scheme == Scheme::SixCosets      ? six_cosets_table().candidates()
                          : cfg.scheme == Scheme::FourCosets   ? CandidateTable::four_cosets().candidates()
                                                               : CandidateTable::three_cosets().candidates();
      std::vector<const CosetCandidate*> per(ids.size());
      for (std::size_t b = 0; b < ids.size(); ++b) per[b] = &cands[static_cast<std::size_t>(ids[b])];
      return decode_blocks(enc, cfg.granularity, per);
    }
    case Scheme::Wlcrc:
    case Scheme::WlcFourCosets:
    case Scheme::WlcThreeCosets:
    case Scheme::WlcOnly: return detail::decode_wlc(enc, cfg, wlc_word_layout(cfg));
  }
  throw std::logic_error("unhandled scheme");
}

std::vector<int> committed_candidates(const EncodedLine& enc, const SchemeConfig& cfg) {
  const int blocks = kLineBits / cfg.granularity;
  std::vector<int> ids;
  switch (cfg.scheme) {
    case Scheme::Baseline: return std::vector<int>(1, 0);
    case Scheme::XorCoset: return {xor_index(enc)};
    case Scheme::Fnw: {
      const auto flips = detail::unpack_bits_c1(enc.aux(), static_cast<std::size_t>(blocks));
      return {flips.begin(), flips.end()};
    }
    case Scheme::SixCosets:
    case Scheme::FourCosets:
    case Scheme::ThreeCosets: {
      const auto& table = independent_table(cfg.scheme);
      const std::size_t w = table.aux_cells_per_choice();
      for (int b = 0; b < blocks; ++b) {
        const int id = table.find_aux(enc.aux().subspan(static_cast<std::size_t>(b) * w, w));
        if (id < 0)
          throw DecodeError(cfg.name() + ": aux cells of block " + std::to_string(b) +
                            " are outside the candidate table's aux alphabet");
        ids.push_back(id);
      }
      return ids;
    }
    case Scheme::RestrictedLine: {
      const auto bits = detail::unpack_bits_c1(enc.aux(), 1 + static_cast<std::size_t>(blocks));
      for (int b = 0; b < blocks; ++b) ids.push_back(bits[1 + b] ? 1 + bits[0] : 0);
      return ids;
    }
    case Scheme::Wlcrc:
    case Scheme::WlcFourCosets:
    case Scheme::WlcThreeCosets:
    case Scheme::WlcOnly: {
      if (enc.flag() != detail::kFlagCompressed) return ids;
      const WordLayout layout = wlc_word_layout(cfg);
      for (int w = 0; w < kLineWords; ++w) {
        const auto wc = detail::read_word_choices(enc.data().subspan(w * kWordCells, kWordCells), layout, cfg);
        ids.insert(ids.end(), wc.candidates.begin(), wc.candidates.end());
      }
      return ids;
    }
  }
  return ids;
}

std::vector<int> committed_groups(const EncodedLine& enc, const SchemeConfig& cfg) {
  if (cfg.scheme == Scheme::RestrictedLine) return {detail::unpack_bits_c1(enc.aux(), 1)[0]};
  if (cfg.scheme != Scheme::Wlcrc) throw std::invalid_argument(cfg.name() + " has no coset groups");
  std::vector<int> groups;
  if (enc.flag() != detail::kFlagCompressed) return groups;
  const WordLayout layout = wlc_word_layout(cfg);
  for (int w = 0; w < kLineWords; ++w)
    groups.push_back(detail::read_word_choices(enc.data().subspan(w * kWordCells, kWordCells), layout, cfg).group);
  return groups;
}

BestChoice brute_force_best(std::span<const Symbol> block, std::span<const CellState> old,
                            std::span<const CosetCandidate> candidates, const EnergyModel& model) {
  if (block.size() != old.size()) throw std::invalid_argument("brute_force_best: size mismatch");
  BestChoice best;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    Energy cost;
    for (std::size_t i = 0; i < block.size(); ++i) cost += cell_write_energy(old[i], candidates[c].map(block[i]), model);
    if (best.index < 0 || cost < best.cost) best = {static_cast<int>(c), cost};
  }
  return best;
}

Codec::Codec(SchemeConfig cfg, EnergyModel model) : cfg_(std::move(cfg)), model_(std::move(model)) {
  cfg_.validate();
  aux_cells_ = aux_cells_for(cfg_);
  has_flag_ = cfg_.uses_wlc();
  if (has_flag_) layout_ = wlc_word_layout(cfg_);
}

EncodedLine Codec::initial_state() const { return EncodedLine(aux_cells_, has_flag_, CellState::S1); }

EncodedLine Codec::encode(const MemoryLine& line, const EncodedLine& old) const {
  if (layout_) {
    if (cfg_.scheme == Scheme::Wlcrc) return detail::encode_wlcrc_with(line, old, *layout_, model_, cfg_.threshold);
    return detail::encode_wlc_table_with(line, old, detail::wlc_table(cfg_.scheme), *layout_, model_);
  }
  return pcmenc::encode(line, old, cfg_, model_);
}

MemoryLine Codec::decode(const EncodedLine& enc) const {
  if (layout_) {
    if (enc.aux_count != 0 || !enc.has_flag || enc.size() != kLineCells + 1)
      throw DecodeError(cfg_.name() + ": encoded line has the wrong cell layout");
    return detail::decode_wlc(enc, cfg_, *layout_);
  }
  return pcmenc::decode(enc, cfg_);
}

bool Codec::is_compressed(const EncodedLine& enc) const {
  return has_flag_ && enc.flag() == detail::kFlagCompressed;
}

std::vector<Region> Codec::regions(const EncodedLine& enc) const {
  std::vector<Region> r(enc.size(), Region::Data);
  for (std::size_t i = kLineCells; i < kLineCells + std::size_t{enc.aux_count}; ++i) r[i] = Region::Aux;
  if (enc.has_flag) r.back() = Region::Flag;
  if (layout_ && is_compressed(enc))
    for (int w = 0; w < kLineWords; ++w)
      for (int c = 0; c < layout_->aux_cells; ++c) r[static_cast<std::size_t>(w * kWordCells + c)] = Region::Aux;
  return r;
}

}  // namespace pcmenc
