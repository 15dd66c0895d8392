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

// WLC-based encoders: each compressible line carries its coset choices in
// the reclaimed high bits of every word, plus one flag cell per line.

#include <cmath>
#include <limits>

#include "detail.hpp"
#include "pcmenc/wlc.hpp"
#include "wlc_detail.hpp"

namespace pcmenc {

using detail::SymbolArray;

namespace detail {

EncodedLine encode_uncompressed(const MemoryLine& line) {
  EncodedLine out(0, true);
  const SymbolArray sym = line_symbols(line);
  write_mapped(sym, candidate_c1(), out.data());
  out.set_flag(kFlagUncompressed);
  return out;
}

void emit_word(std::uint64_t word, const WordLayout& layout, std::uint64_t aux_value,
               std::span<const CosetCandidate* const> block_cands, std::span<CellState> out) {
  if (layout.aux_bits > 0) {
    const int shift = 64 - layout.aux_bits;
    const std::uint64_t mask = ~std::uint64_t{0} << shift;
    word = (word & ~mask) | (aux_value << shift);
  }
  std::array<Symbol, kWordCells> sym{};
  word_symbols(word, sym);
  const auto& c1 = candidate_c1();
  for (int c = 0; c < layout.aux_cells; ++c) out[c] = c1.map(sym[c]);
  for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
    const auto& blk = layout.blocks[b];
    for (int c = blk.first_cell; c < blk.first_cell + blk.cell_count; ++c) out[c] = block_cands[b]->map(sym[c]);
  }
}

WordChoices read_word_choices(std::span<const CellState> cells, const WordLayout& layout, const SchemeConfig& cfg) {
  const auto& c1 = candidate_c1();
  std::uint64_t top = 0;
  for (int c = 0; c < layout.aux_cells; ++c) top = (top << 2) | c1.unmap(cells[c]);
  const int top_bits = 2 * layout.aux_cells;
  const std::uint64_t aux = layout.aux_bits ? top >> (top_bits - layout.aux_bits) : 0;

  WordChoices wc;
  const auto nb = static_cast<int>(layout.blocks.size());
  wc.candidates.resize(layout.blocks.size(), 0);
  if (cfg.scheme == Scheme::Wlcrc) {
    wc.group = static_cast<int>((aux >> nb) & 1u);
    for (int b = 0; b < nb; ++b) {
      const bool other = (aux >> (nb - 1 - b)) & 1u;
      wc.candidates[b] = other ? 1 + wc.group : 0;
    }
  } else {
    const CandidateTable& table = wlc_table(cfg.scheme);
    const int bits = table.index_bits();
    for (int b = 0; b < nb; ++b) {
      if (!bits) continue;
      const auto field = static_cast<Symbol>((aux >> ((nb - 1 - b) * bits)) & 3u);
      const CellState state = c1.map(field);
      const int idx = table.find_aux(std::span<const CellState>(&state, 1));
      if (idx < 0)
        throw DecodeError(cfg.name() + ": reclaimed field of block " + std::to_string(b) + " holds " +
                          std::string(to_string(state)) + ", outside the candidate table's aux alphabet");
      wc.candidates[b] = idx;
    }
  }
  return wc;
}

const CandidateTable& wlc_table(Scheme s) {
  switch (s) {
    case Scheme::WlcFourCosets: return CandidateTable::four_cosets();
    case Scheme::WlcThreeCosets: return CandidateTable::three_cosets();
    case Scheme::Wlcrc: return CandidateTable::three_cosets();
    default: return CandidateTable::identity();
  }
}

}  // namespace detail

namespace {

using detail::emit_word;

SchemeConfig wlc_cfg(Scheme s, int granularity) {
  SchemeConfig cfg = SchemeConfig::make(s, granularity);
  cfg.validate();
  return cfg;
}

}  // namespace

namespace detail {

EncodedLine encode_wlcrc_with(const MemoryLine& line, const EncodedLine& old, const WordLayout& layout,
                              const EnergyModel& model, double threshold) {
  require_shape(old, 0, true, "wlcrc");
  if (!wlc::line_compressible(line, wlc::WlcConfig(layout.k))) return encode_uncompressed(line);

  const auto& cands = builtin_candidates();
  const SymbolArray sym = line_symbols(line);
  const auto elut = model.write_lut();
  std::array<std::array<std::int32_t, kLineCells>, 3> costs{};
  for (int c = 0; c < 3; ++c) kernels::cell_costs(sym, old.data_bytes(), cands[c].lut(), elut, costs[c]);

  std::array<std::array<std::uint8_t, kLineCells>, 3> states{};
  if (threshold > 0.0)
    for (int c = 0; c < 3; ++c) kernels::map_states(sym, cands[c].lut(), states[c]);
  const auto old_bytes = old.data_bytes();
  const auto changed = [&](int c, int first, int count) {
    int n = 0;
    for (int i = first; i < first + count; ++i) n += states[c][i] != old_bytes[i];
    return n;
  };

  const int nb = static_cast<int>(layout.blocks.size());
  std::vector<std::uint8_t> sel12(nb), sel13(nb);
  std::vector<const CosetCandidate*> chosen(nb);
  EncodedLine out(0, true);
  auto data = out.data();

  for (int w = 0; w < kLineWords; ++w) {
    const int base = w * kWordCells;
    std::int64_t cost12 = 0;
    std::int64_t cost13 = 0;
    for (int b = 0; b < nb; ++b) {
      const int first = base + layout.blocks[b].first_cell;
      const int count = layout.blocks[b].cell_count;
      const std::int64_t c1 = range_sum(costs[0], first, count);
      const std::int64_t c2 = range_sum(costs[1], first, count);
      const std::int64_t c3 = range_sum(costs[2], first, count);
      sel12[b] = c2 < c1;
      sel13[b] = c3 < c1;
      cost12 += std::min(c1, c2);
      cost13 += std::min(c1, c3);
    }
    int group = cost13 < cost12 ? 1 : 0;

    if (threshold > 0.0) {
      const double gap = std::abs(static_cast<double>(cost12 - cost13));
      if (gap < threshold * static_cast<double>(std::max(cost12, cost13))) {
        int n12 = 0;
        int n13 = 0;
        for (int b = 0; b < nb; ++b) {
          const int first = base + layout.blocks[b].first_cell;
          const int count = layout.blocks[b].cell_count;
          n12 += changed(sel12[b] ? 1 : 0, first, count);
          n13 += changed(sel13[b] ? 2 : 0, first, count);
        }
        if (n12 != n13) group = n13 < n12 ? 1 : 0;
      }
    }

    const auto& sel = group ? sel13 : sel12;
    std::uint64_t aux = static_cast<std::uint64_t>(group);
    for (int b = 0; b < nb; ++b) {
      aux = (aux << 1) | sel[b];
      chosen[b] = sel[b] ? &cands[1 + group] : &cands[0];
    }
    emit_word(line.word(w), layout, aux, chosen, data.subspan(base, kWordCells));
  }
  out.set_flag(kFlagCompressed);
  return out;
}

EncodedLine encode_wlc_table_with(const MemoryLine& line, const EncodedLine& old, const CandidateTable& table,
                                  const WordLayout& layout, const EnergyModel& model) {
  require_shape(old, 0, true, "wlc");
  if (!wlc::line_compressible(line, wlc::WlcConfig(layout.k))) return encode_uncompressed(line);

  const SymbolArray sym = line_symbols(line);
  const auto elut = model.write_lut();
  const std::size_t n = table.size();
  std::vector<std::array<std::int32_t, kLineCells>> costs(n);
  for (std::size_t c = 0; c < n; ++c) kernels::cell_costs(sym, old.data_bytes(), table[c].lut(), elut, costs[c]);

  const int bits = table.index_bits();
  if (bits != 0 && (bits != 2 || table.aux_cells_per_choice() != 1))
    throw std::invalid_argument("wlc: table must select with one aux cell per block");
  // Each block's two-bit field is cell aligned, so storing C1^-1 of the
  // candidate's aux state leaves exactly that state in the cell.
  std::vector<std::uint64_t> field_of(n, 0);
  if (bits)
    for (std::size_t c = 0; c < n; ++c) field_of[c] = candidate_c1().unmap(table.aux_states()[c][0]);
  const int nb = static_cast<int>(layout.blocks.size());
  std::vector<const CosetCandidate*> chosen(nb);
  EncodedLine out(0, true);
  auto data = out.data();
  for (int w = 0; w < kLineWords; ++w) {
    const int base = w * kWordCells;
    std::uint64_t aux = 0;
    for (int b = 0; b < nb; ++b) {
      const int first = base + layout.blocks[b].first_cell;
      const int count = layout.blocks[b].cell_count;
      std::size_t best = 0;
      std::int64_t best_cost = range_sum(costs[0], first, count);
      for (std::size_t c = 1; c < n; ++c) {
        const std::int64_t cost = range_sum(costs[c], first, count);
        if (cost < best_cost) {
          best_cost = cost;
          best = c;
        }
      }
      if (bits) aux = (aux << bits) | field_of[best];
      chosen[b] = &table[best];
    }
    emit_word(line.word(w), layout, aux, chosen, data.subspan(base, kWordCells));
  }
  out.set_flag(kFlagCompressed);
  return out;
}

MemoryLine decode_wlc(const EncodedLine& enc, const SchemeConfig& cfg, const WordLayout& layout) {
  require_shape(enc, 0, true, "wlc decode");
  const CellState flag = *enc.flag();
  const auto& c1 = candidate_c1();
  if (flag == kFlagUncompressed) {
    SymbolArray sym;
    invert_coset(c1, enc.data(), std::span(sym));
    return MemoryLine::from_symbols(sym);
  }
  if (flag != kFlagCompressed)
    throw DecodeError(cfg.name() + ": flag cell in " + std::string(to_string(flag)) +
                      " is neither compressed (S1) nor uncompressed (S2)");

  const wlc::WlcConfig wcfg(layout.k);
  const auto& cands = cfg.scheme == Scheme::Wlcrc ? CandidateTable::three_cosets() : wlc_table(cfg.scheme);
  MemoryLine line;
  for (int w = 0; w < kLineWords; ++w) {
    const auto cells = enc.data().subspan(w * kWordCells, kWordCells);
    const WordChoices wc = read_word_choices(cells, layout, cfg);
    std::array<Symbol, kWordCells> sym{};
    for (int c = 0; c < layout.aux_cells; ++c) sym[c] = c1.unmap(cells[c]);
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
      const auto& blk = layout.blocks[b];
      const auto& cand = cands[static_cast<std::size_t>(wc.candidates[b])];
      for (int c = blk.first_cell; c < blk.first_cell + blk.cell_count; ++c) sym[c] = cand.unmap(cells[c]);
    }
    const std::uint64_t stored = word_from_symbols(sym);
    line.set_word(w, wlc::decompress_word({stored, 0}, wcfg));
  }
  return line;
}

}  // namespace detail

EncodedLine encode_wlcrc(const MemoryLine& line, const EncodedLine& old, int granularity, const EnergyModel& model) {
  return detail::encode_wlcrc_with(line, old, wlc_word_layout(wlc_cfg(Scheme::Wlcrc, granularity)), model, 0.0);
}

EncodedLine encode_multiobjective(const MemoryLine& line, const EncodedLine& old, int granularity,
                                  const EnergyModel& model, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("multi-objective threshold must be >= 0");
  return detail::encode_wlcrc_with(line, old, wlc_word_layout(wlc_cfg(Scheme::Wlcrc, granularity)), model,
                                   threshold);
}

EncodedLine encode_wlc_unrestricted(const MemoryLine& line, const EncodedLine& old, const CandidateTable& table,
                                    int granularity, const EnergyModel& model) {
  Scheme s = Scheme::WlcFourCosets;
  if (table.size() == 3) s = Scheme::WlcThreeCosets;
  else if (table.size() == 1) s = Scheme::WlcOnly;
  else if (table.size() != 4) throw std::invalid_argument("wlc: table must hold 1, 3 or 4 candidates");
  if (table.candidates() != detail::wlc_table(s).candidates())
    throw std::invalid_argument("wlc: only the built-in 4cosets/3cosets tables are supported");
  SchemeConfig cfg = SchemeConfig::make(s, s == Scheme::WlcOnly ? std::nullopt : std::optional<int>(granularity));
  cfg.validate();
  return detail::encode_wlc_table_with(line, old, table, wlc_word_layout(cfg), model);
}

}  // namespace pcmenc
