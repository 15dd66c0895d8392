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

// Compiled with -mavx2; only reached after a CPUID check.

#include "pcmenc/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace pcmenc::kernels {

namespace {

inline __m256i broadcast_state_lut(const StateLut& lut) {
  return _mm256_setr_epi8(lut[0], lut[1], lut[2], lut[3], 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                          lut[0], lut[1], lut[2], lut[3], 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0);
}

inline __m256i broadcast_energy_lut(const EnergyLut& e) {
  return _mm256_setr_epi32(e[0], e[1], e[2], e[3], e[0], e[1], e[2], e[3]);
}

inline __m256i load32(const std::uint8_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Energy of 32 target states with unchanged cells (eq lanes == 0xFF)
// zeroed, written as four 8-lane int32 vectors.
inline void costs32(__m256i states, __m256i eq, __m256i elut, __m256i out[4]) {
  const __m128i s_lo = _mm256_castsi256_si128(states);
  const __m128i s_hi = _mm256_extracti128_si256(states, 1);
  const __m128i q_lo = _mm256_castsi256_si128(eq);
  const __m128i q_hi = _mm256_extracti128_si256(eq, 1);
  const __m128i s8[4] = {s_lo, _mm_srli_si128(s_lo, 8), s_hi, _mm_srli_si128(s_hi, 8)};
  const __m128i q8[4] = {q_lo, _mm_srli_si128(q_lo, 8), q_hi, _mm_srli_si128(q_hi, 8)};
  for (int g = 0; g < 4; ++g) {
    const __m256i e = _mm256_permutevar8x32_epi32(elut, _mm256_cvtepu8_epi32(s8[g]));
    out[g] = _mm256_andnot_si256(_mm256_cvtepi8_epi32(q8[g]), e);
  }
}

inline std::int64_t hsum_epi32(__m256i v) {
  const __m256i lo = _mm256_cvtepi32_epi64(_mm256_castsi256_si128(v));
  const __m256i hi = _mm256_cvtepi32_epi64(_mm256_extracti128_si256(v, 1));
  alignas(32) std::int64_t tmp[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), _mm256_add_epi64(lo, hi));
  return tmp[0] + tmp[1] + tmp[2] + tmp[3];
}

void map_states_avx2(std::span<const std::uint8_t> symbols, const StateLut& lut,
                     std::span<std::uint8_t> out) {
  const __m256i lutv = broadcast_state_lut(lut);
  const __m256i three = _mm256_set1_epi8(3);
  const std::size_t n = symbols.size();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i sym = _mm256_and_si256(load32(symbols.data() + i), three);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_shuffle_epi8(lutv, sym));
  }
  for (; i < n; ++i) out[i] = lut[symbols[i] & 3];
}

void cell_costs_avx2(std::span<const std::uint8_t> symbols, std::span<const std::uint8_t> old,
                     const StateLut& lut, const EnergyLut& energy, std::span<std::int32_t> out) {
  const __m256i lutv = broadcast_state_lut(lut);
  const __m256i elut = broadcast_energy_lut(energy);
  const __m256i three = _mm256_set1_epi8(3);
  const std::size_t n = symbols.size();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i st = _mm256_shuffle_epi8(lutv, _mm256_and_si256(load32(symbols.data() + i), three));
    const __m256i eq = _mm256_cmpeq_epi8(st, load32(old.data() + i));
    __m256i c[4];
    costs32(st, eq, elut, c);
    for (int g = 0; g < 4; ++g)
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i + 8 * g), c[g]);
  }
  for (; i < n; ++i) {
    const std::uint8_t s = lut[symbols[i] & 3];
    out[i] = s == old[i] ? 0 : energy[s];
  }
}

// Lane sums are flushed to 64 bits every 16 blocks of 32 cells so that a
// lane never holds more than 64 costs (64 * 2e7 < 2^31).
constexpr std::size_t kFlushEvery = 16;

Transition accumulate(const std::uint8_t* old, const std::uint8_t* next_or_sym, std::size_t n,
                      const StateLut* lut, const EnergyLut& energy) {
  const __m256i lutv = lut ? broadcast_state_lut(*lut) : _mm256_setzero_si256();
  const __m256i elut = broadcast_energy_lut(energy);
  const __m256i three = _mm256_set1_epi8(3);
  Transition t;
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  std::size_t blocks = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i st = load32(next_or_sym + i);
    st = lut ? _mm256_shuffle_epi8(lutv, _mm256_and_si256(st, three)) : _mm256_and_si256(st, three);
    const __m256i eq = _mm256_cmpeq_epi8(st, load32(old + i));
    t.changed += 32u - static_cast<std::uint32_t>(
                           std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(eq))));
    __m256i c[4];
    costs32(st, eq, elut, c);
    acc = _mm256_add_epi32(acc, _mm256_add_epi32(_mm256_add_epi32(c[0], c[1]), _mm256_add_epi32(c[2], c[3])));
    if (++blocks == kFlushEvery) {
      t.energy += hsum_epi32(acc);
      acc = _mm256_setzero_si256();
      blocks = 0;
    }
  }
  t.energy += hsum_epi32(acc);
  for (; i < n; ++i) {
    const std::uint8_t s = lut ? (*lut)[next_or_sym[i] & 3] : static_cast<std::uint8_t>(next_or_sym[i] & 3);
    if (s != old[i]) {
      t.energy += energy[s];
      ++t.changed;
    }
  }
  return t;
}

Transition transition_avx2(std::span<const std::uint8_t> old, std::span<const std::uint8_t> next,
                           const EnergyLut& energy) {
  return accumulate(old.data(), next.data(), old.size(), nullptr, energy);
}

Transition mapped_transition_avx2(std::span<const std::uint8_t> symbols, std::span<const std::uint8_t> old,
                                  const StateLut& lut, const EnergyLut& energy) {
  return accumulate(old.data(), symbols.data(), symbols.size(), &lut, energy);
}

constexpr KernelTable kAvx2{map_states_avx2, cell_costs_avx2, transition_avx2, mapped_transition_avx2};

}  // namespace

const KernelTable* avx2_kernels_impl() noexcept { return &kAvx2; }

}  // namespace pcmenc::kernels
