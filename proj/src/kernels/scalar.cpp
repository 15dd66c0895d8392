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

#include "pcmenc/kernels.hpp"

namespace pcmenc::kernels {

namespace {

void map_states_scalar(std::span<const std::uint8_t> symbols, const StateLut& lut,
                       std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = lut[symbols[i] & 3];
}

void cell_costs_scalar(std::span<const std::uint8_t> symbols, std::span<const std::uint8_t> old,
                       const StateLut& lut, const EnergyLut& energy, std::span<std::int32_t> out) {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::uint8_t s = lut[symbols[i] & 3];
    out[i] = s == old[i] ? 0 : energy[s];
  }
}

Transition transition_scalar(std::span<const std::uint8_t> old, std::span<const std::uint8_t> next,
                             const EnergyLut& energy) {
  Transition t;
  for (std::size_t i = 0; i < old.size(); ++i) {
    const std::uint8_t s = next[i] & 3;
    if (old[i] != s) {
      t.energy += energy[s];
      ++t.changed;
    }
  }
  return t;
}

Transition mapped_transition_scalar(std::span<const std::uint8_t> symbols,
                                    std::span<const std::uint8_t> old, const StateLut& lut,
                                    const EnergyLut& energy) {
  Transition t;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::uint8_t s = lut[symbols[i] & 3];
    if (s != old[i]) {
      t.energy += energy[s];
      ++t.changed;
    }
  }
  return t;
}

constexpr KernelTable kScalar{map_states_scalar, cell_costs_scalar, transition_scalar,
                              mapped_transition_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace pcmenc::kernels
