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
#include <span>

#include "pcmenc/codecs.hpp"
#include "pcmenc/core_model.hpp"

namespace pcmenc {

struct CostBreakdown {
  Energy data;
  Energy aux;
  Energy flag;
  std::uint32_t updated_cells = 0;

  Energy total() const noexcept { return data + aux + flag; }
  CostBreakdown& operator+=(const CostBreakdown& o) noexcept {
    data += o.data;
    aux += o.aux;
    flag += o.flag;
    updated_cells += o.updated_cells;
    return *this;
  }
  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

struct WriteReport {
  CostBreakdown breakdown;
  double disturb_expected = 0.0;
  std::uint32_t disturb_sampled = 0;
  std::uint32_t cells_total = 0;
  bool compressed = false;
};

/// Differential write cost of `next` over `old`, split by the region label
/// of each cell. The three spans must have equal length.
CostBreakdown energy_report(std::span<const CellState> old, std::span<const CellState> next,
                            std::span<const Region> regions, const EnergyModel& model);

/// Expected number of disturbed idle cells. Cells form a 1-D chain; an idle
/// cell with n written neighbours is disturbed with 1 - (1 - rate)^n.
double disturbance_expected(std::span<const CellState> old, std::span<const CellState> next,
                            const DisturbanceModel& model);

/// One Bernoulli trial per (idle cell, written neighbour) pair; counts idle
/// cells hit at least once. Deterministic for a fixed seed.
std::uint32_t disturbance_sampled(std::span<const CellState> old, std::span<const CellState> next,
                                  const DisturbanceModel& model, std::uint64_t seed);

/// Mixes a run seed with an address and per-address write index into a
/// per-line sampling seed.
std::uint64_t line_seed(std::uint64_t global_seed, std::uint64_t address, std::uint64_t write_index) noexcept;

}  // namespace pcmenc
