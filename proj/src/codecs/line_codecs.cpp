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

// Line-level encoders: baseline, FNW, XOR cosets, 6cosets, table cosets and
// the line-restricted 3-r-cosets scheme.

#include <algorithm>
#include <bit>
#include <limits>

#include "detail.hpp"

namespace pcmenc {

using detail::SymbolArray;

EncodedLine encode_baseline(const MemoryLine& line) {
  EncodedLine out(0, false);
  const SymbolArray sym = detail::line_symbols(line);
  detail::write_mapped(sym, candidate_c1(), out.data());
  return out;
}

namespace {

// C1 applied to the complemented symbol (bitwise NOT of both bits).
CosetCandidate complemented_c1() {
  const auto& c1 = candidate_c1();
  std::array<CellState, 4> image{};
  for (Symbol s = 0; s < 4; ++s) image[s] = c1.map(static_cast<Symbol>(3 - s));
  return CosetCandidate(-1, image);
}

}  // namespace

EncodedLine encode_fnw(const MemoryLine& line, const EncodedLine& old, const EnergyModel& model,
                       int granularity) {
  detail::check_granularity_divides_line(granularity, "fnw");
  const int blocks = kLineBits / granularity;
  const int cells_per_block = granularity / 2;
  const std::size_t aux = static_cast<std::size_t>((blocks + 1) / 2);
  detail::require_shape(old, aux, false, "fnw");

  const SymbolArray sym = detail::line_symbols(line);
  const auto elut = model.write_lut();
  const auto& c1 = candidate_c1();
  const CosetCandidate inv = complemented_c1();
  std::array<std::int32_t, kLineCells> plain{};
  std::array<std::int32_t, kLineCells> flipped{};
  kernels::cell_costs(sym, old.data_bytes(), c1.lut(), elut, plain);
  kernels::cell_costs(sym, old.data_bytes(), inv.lut(), elut, flipped);

  const auto prev = detail::unpack_bits_c1(old.aux(), static_cast<std::size_t>(blocks));
  std::vector<std::uint8_t> flips(static_cast<std::size_t>(blocks), 0);

  // Two blocks share one flip cell; each pair is chosen jointly over its
  // four orientations, counting data cells and the shared flip cell.
  for (int p = 0; p < blocks; p += 2) {
    const bool paired = p + 1 < blocks;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    int best_changes = 3;
    int best_combo = 0;
    for (int combo = 0; combo < (paired ? 4 : 2); ++combo) {
      const int f0 = paired ? combo >> 1 : combo;
      const int f1 = paired ? combo & 1 : 0;
      std::int64_t cost = detail::range_sum(f0 ? flipped : plain, p * cells_per_block, cells_per_block);
      if (paired) cost += detail::range_sum(f1 ? flipped : plain, (p + 1) * cells_per_block, cells_per_block);
      const CellState cell = default_map(static_cast<Symbol>((f0 << 1) | f1));
      cost += cell_write_energy(old.aux()[p / 2], cell, model).centi();
      const int changes = (f0 != prev[p]) + (paired && f1 != prev[p + 1]);
      if (cost < best || (cost == best && changes < best_changes)) {
        best = cost;
        best_changes = changes;
        best_combo = combo;
      }
    }
    flips[p] = static_cast<std::uint8_t>(paired ? best_combo >> 1 : best_combo);
    if (paired) flips[p + 1] = static_cast<std::uint8_t>(best_combo & 1);
  }

  EncodedLine out(aux, false);
  auto data = out.data();
  for (int b = 0; b < blocks; ++b) {
    const auto first = static_cast<std::size_t>(b * cells_per_block);
    detail::write_mapped(std::span(sym).subspan(first, cells_per_block), flips[b] ? inv : c1,
                         data.subspan(first, cells_per_block));
  }
  detail::pack_bits_c1(flips, out.aux());
  return out;
}

EncodedLine encode_xor_coset(const MemoryLine& line, const EncodedLine& old, std::span<const MemoryLine> masks,
                             const EnergyModel& model) {
  if (masks.size() != 16) throw std::invalid_argument("flipmin: exactly 16 coset masks required");
  detail::require_shape(old, 2, false, "flipmin");
  const auto elut = model.write_lut();
  const auto c1 = candidate_c1().lut();

  int best = 0;
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  std::array<CellState, 2> best_aux{};
  for (int i = 0; i < 16; ++i) {
    const SymbolArray sym = detail::line_symbols(line ^ masks[i]);
    std::int64_t cost = kernels::mapped_transition(sym, old.data_bytes(), c1, elut).energy;
    const std::array<std::uint8_t, 4> bits{static_cast<std::uint8_t>((i >> 3) & 1),
                                           static_cast<std::uint8_t>((i >> 2) & 1),
                                           static_cast<std::uint8_t>((i >> 1) & 1),
                                           static_cast<std::uint8_t>(i & 1)};
    std::array<CellState, 2> aux{};
    detail::pack_bits_c1(bits, aux);
    cost += cell_write_energy(old.aux()[0], aux[0], model).centi() +
            cell_write_energy(old.aux()[1], aux[1], model).centi();
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
      best_aux = aux;
    }
  }
  EncodedLine out(2, false);
  const SymbolArray sym = detail::line_symbols(line ^ masks[best]);
  detail::write_mapped(sym, candidate_c1(), out.data());
  std::copy(best_aux.begin(), best_aux.end(), out.aux().begin());
  return out;
}

namespace {

// Independent per-block selection from `table`, aux cells taken from the
// table's assignments.
EncodedLine encode_independent(const MemoryLine& line, const EncodedLine& old, const CandidateTable& table,
                               int granularity, const EnergyModel& model, const char* scheme) {
  detail::check_granularity_divides_line(granularity, scheme);
  const int blocks = kLineBits / granularity;
  const int cells_per_block = granularity / 2;
  const std::size_t per_choice = table.aux_cells_per_choice();
  const std::size_t aux = per_choice * static_cast<std::size_t>(blocks);
  detail::require_shape(old, aux, false, scheme);

  const SymbolArray sym = detail::line_symbols(line);
  const auto elut = model.write_lut();
  const std::size_t n = table.size();
  std::vector<std::array<std::int32_t, kLineCells>> costs(n);
  for (std::size_t c = 0; c < n; ++c) kernels::cell_costs(sym, old.data_bytes(), table[c].lut(), elut, costs[c]);

  EncodedLine out(aux, false);
  auto data = out.data();
  auto aux_cells = out.aux();
  for (int b = 0; b < blocks; ++b) {
    const int first = b * cells_per_block;
    std::size_t best = 0;
    std::int64_t best_cost = detail::range_sum(costs[0], first, cells_per_block);
    for (std::size_t c = 1; c < n; ++c) {
      const std::int64_t cost = detail::range_sum(costs[c], first, cells_per_block);
      if (cost < best_cost) {
        best_cost = cost;
        best = c;
      }
    }
    detail::write_mapped(std::span(sym).subspan(first, cells_per_block), table[best],
                         data.subspan(first, cells_per_block));
    const auto& assign = table.aux_states()[best];
    std::copy(assign.begin(), assign.end(), aux_cells.begin() + static_cast<std::ptrdiff_t>(b * per_choice));
  }
  return out;
}

}  // namespace

EncodedLine encode_6cosets(const MemoryLine& line, const EncodedLine& old, int granularity,
                           const EnergyModel& model) {
  return encode_independent(line, old, six_cosets_table(), granularity, model, "6cosets");
}

EncodedLine encode_table_cosets(const MemoryLine& line, const EncodedLine& old, const CandidateTable& table,
                                int granularity, const EnergyModel& model) {
  return encode_independent(line, old, table, granularity, model, table.name().c_str());
}

EncodedLine encode_restricted_line(const MemoryLine& line, const EncodedLine& old, int granularity,
                                   const EnergyModel& model) {
  detail::check_granularity_divides_line(granularity, "3-r-cosets");
  const int blocks = kLineBits / granularity;
  const int cells_per_block = granularity / 2;
  const std::size_t nbits = 1 + static_cast<std::size_t>(blocks);
  const std::size_t aux = (nbits + 1) / 2;
  detail::require_shape(old, aux, false, "3-r-cosets");

  const auto& cands = builtin_candidates();
  const SymbolArray sym = detail::line_symbols(line);
  const auto elut = model.write_lut();
  std::array<std::array<std::int32_t, kLineCells>, 3> costs{};
  for (int c = 0; c < 3; ++c) kernels::cell_costs(sym, old.data_bytes(), cands[c].lut(), elut, costs[c]);

  // sel[g][b]: 1 when block b uses the group's second member.
  std::array<std::vector<std::uint8_t>, 2> sel{std::vector<std::uint8_t>(blocks), std::vector<std::uint8_t>(blocks)};
  std::array<std::int64_t, 2> total{};
  for (int b = 0; b < blocks; ++b) {
    const int first = b * cells_per_block;
    const std::int64_t c1 = detail::range_sum(costs[0], first, cells_per_block);
    for (int g = 0; g < 2; ++g) {
      const std::int64_t other = detail::range_sum(costs[g + 1], first, cells_per_block);
      sel[g][b] = other < c1;
      total[g] += std::min(c1, other);
    }
  }
  const int group = total[1] < total[0] ? 1 : 0;

  EncodedLine out(aux, false);
  auto data = out.data();
  std::vector<std::uint8_t> bits(nbits);
  bits[0] = static_cast<std::uint8_t>(group);
  for (int b = 0; b < blocks; ++b) {
    const int first = b * cells_per_block;
    const auto& cand = sel[group][b] ? cands[group + 1] : cands[0];
    detail::write_mapped(std::span(sym).subspan(first, cells_per_block), cand, data.subspan(first, cells_per_block));
    bits[1 + b] = sel[group][b];
  }
  detail::pack_bits_c1(bits, out.aux());
  return out;
}

}  // namespace pcmenc
