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

#include "pcmenc/metrics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pcmenc {

CostBreakdown energy_report(std::span<const CellState> old, std::span<const CellState> next,
                            std::span<const Region> regions, const EnergyModel& model) {
  if (old.size() != next.size() || regions.size() != next.size())
    throw std::invalid_argument("energy_report: old/new/region lengths differ");
  CostBreakdown out;
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (old[i] == next[i]) continue;
    const Energy e = model.write_into(next[i]);
    switch (regions[i]) {
      case Region::Data: out.data += e; break;
      case Region::Aux: out.aux += e; break;
      case Region::Flag: out.flag += e; break;
    }
    ++out.updated_cells;
  }
  return out;
}

namespace {

int written_neighbours(std::span<const CellState> old, std::span<const CellState> next, std::size_t i) {
  int n = 0;
  if (i > 0 && old[i - 1] != next[i - 1]) ++n;
  if (i + 1 < old.size() && old[i + 1] != next[i + 1]) ++n;
  return n;
}

void check(std::span<const CellState> old, std::span<const CellState> next) {
  if (old.size() != next.size()) throw std::invalid_argument("disturbance: old/new lengths differ");
}

}  // namespace

double disturbance_expected(std::span<const CellState> old, std::span<const CellState> next,
                            const DisturbanceModel& model) {
  check(old, next);
  double sum = 0.0;
  for (std::size_t i = 0; i < old.size(); ++i) {
    if (old[i] != next[i]) continue;
    const int n = written_neighbours(old, next, i);
    if (n == 0) continue;
    sum += 1.0 - std::pow(1.0 - model.rate(old[i]), n);
  }
  return sum;
}

std::uint32_t disturbance_sampled(std::span<const CellState> old, std::span<const CellState> next,
                                  const DisturbanceModel& model, std::uint64_t seed) {
  check(old, next);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uint32_t hit = 0;
  for (std::size_t i = 0; i < old.size(); ++i) {
    if (old[i] != next[i]) continue;
    const int n = written_neighbours(old, next, i);
    const double p = model.rate(old[i]);
    if (n == 0 || p == 0.0) continue;
    bool disturbed = false;
    for (int t = 0; t < n; ++t) disturbed |= u(rng) < p;
    hit += disturbed;
  }
  return hit;
}

std::uint64_t line_seed(std::uint64_t global_seed, std::uint64_t address, std::uint64_t write_index) noexcept {
  std::seed_seq seq{static_cast<std::uint32_t>(global_seed), static_cast<std::uint32_t>(global_seed >> 32),
                    static_cast<std::uint32_t>(address), static_cast<std::uint32_t>(address >> 32),
                    static_cast<std::uint32_t>(write_index), static_cast<std::uint32_t>(write_index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace pcmenc
