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

// Cell-cost kernels used by every encoder. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the variant is
// chosen once at startup from CPUID and can be overridden for testing.
//
// Cell states travel as raw bytes (0..3 == S1..S4) and symbols as bytes
// 0..3. Energies are centi-picojoules.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pcmenc::kernels {

using StateLut = std::array<std::uint8_t, 4>;    // symbol -> state
using EnergyLut = std::array<std::int32_t, 4>;   // target state -> write cost

struct Transition {
  std::int64_t energy = 0;
  std::uint32_t changed = 0;
  friend bool operator==(const Transition&, const Transition&) = default;
};

enum class Backend { Scalar, Avx2 };

/// Function table for one backend. All spans of a call have equal length.
struct KernelTable {
  /// out[i] = lut[symbols[i]]
  void (*map_states)(std::span<const std::uint8_t> symbols, const StateLut& lut,
                     std::span<std::uint8_t> out);
  /// out[i] = lut[symbols[i]] == old[i] ? 0 : energy[lut[symbols[i]]]
  void (*cell_costs)(std::span<const std::uint8_t> symbols, std::span<const std::uint8_t> old,
                     const StateLut& lut, const EnergyLut& energy, std::span<std::int32_t> out);
  /// Differential cost of writing `next` over `old`.
  Transition (*transition)(std::span<const std::uint8_t> old, std::span<const std::uint8_t> next,
                           const EnergyLut& energy);
  /// transition() of the mapped symbols without materialising them.
  Transition (*mapped_transition)(std::span<const std::uint8_t> symbols,
                                  std::span<const std::uint8_t> old, const StateLut& lut,
                                  const EnergyLut& energy);
};

const KernelTable& scalar_kernels() noexcept;
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels() noexcept;
bool cpu_has_avx2() noexcept;

/// Active table. Defaults to AVX2 when compiled in and supported, unless the
/// environment variable PCMENC_KERNELS=scalar is set.
const KernelTable& active() noexcept;
Backend active_backend() noexcept;
/// Returns false (and changes nothing) if the backend is unavailable.
bool set_backend(Backend b) noexcept;
std::string_view backend_name(Backend b) noexcept;

inline void map_states(std::span<const std::uint8_t> symbols, const StateLut& lut,
                       std::span<std::uint8_t> out) {
  active().map_states(symbols, lut, out);
}
inline void cell_costs(std::span<const std::uint8_t> symbols, std::span<const std::uint8_t> old,
                       const StateLut& lut, const EnergyLut& energy, std::span<std::int32_t> out) {
  active().cell_costs(symbols, old, lut, energy, out);
}
inline Transition transition(std::span<const std::uint8_t> old, std::span<const std::uint8_t> next,
                             const EnergyLut& energy) {
  return active().transition(old, next, energy);
}
inline Transition mapped_transition(std::span<const std::uint8_t> symbols,
                                    std::span<const std::uint8_t> old, const StateLut& lut,
                                    const EnergyLut& energy) {
  return active().mapped_transition(symbols, old, lut, energy);
}

}  // namespace pcmenc::kernels
