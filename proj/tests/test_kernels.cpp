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

#include <doctest.h>

#include <random>
#include <vector>

#include "pcmenc/kernels.hpp"

using namespace pcmenc::kernels;

namespace {

struct Inputs {
  std::vector<std::uint8_t> sym, old, next;
  StateLut lut;
  EnergyLut energy;
};

Inputs make(std::mt19937_64& rng, std::size_t n) {
  Inputs in;
  in.sym.resize(n);
  in.old.resize(n);
  in.next.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.sym[i] = rng() & 3;
    in.old[i] = rng() & 3;
    in.next[i] = rng() & 3;
  }
  std::array<std::uint8_t, 4> perm{0, 1, 2, 3};
  std::shuffle(perm.begin(), perm.end(), rng);
  in.lut = perm;
  for (auto& e : in.energy) e = static_cast<std::int32_t>(rng() % 60000);
  return in;
}

Transition naive(const std::vector<std::uint8_t>& old, const std::vector<std::uint8_t>& next, const EnergyLut& e) {
  Transition t;
  for (std::size_t i = 0; i < old.size(); ++i)
    if (old[i] != next[i]) {
      t.energy += e[next[i]];
      ++t.changed;
    }
  return t;
}

void check_table(const KernelTable& k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n <= 300; ++n) {
    const Inputs in = make(rng, n);
    std::vector<std::uint8_t> mapped(n);
    k.map_states(in.sym, in.lut, mapped);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(mapped[i] == in.lut[in.sym[i]]);

    std::vector<std::int32_t> costs(n);
    k.cell_costs(in.sym, in.old, in.lut, in.energy, costs);
    for (std::size_t i = 0; i < n; ++i)
      REQUIRE(costs[i] == (mapped[i] == in.old[i] ? 0 : in.energy[mapped[i]]));

    REQUIRE(k.transition(in.old, in.next, in.energy) == naive(in.old, in.next, in.energy));
    REQUIRE(k.mapped_transition(in.sym, in.old, in.lut, in.energy) == naive(in.old, mapped, in.energy));
  }
}

}  // namespace

TEST_CASE("scalar kernels match the naive definitions") { check_table(scalar_kernels(), 1); }

TEST_CASE("AVX2 kernels agree with scalar on every length 0..300") {
  const KernelTable* avx = avx2_kernels();
  if (!avx || !cpu_has_avx2()) {
    MESSAGE("AVX2 variant unavailable on this build or CPU; skipped");
    return;
  }
  check_table(*avx, 2);
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 300; ++n) {
    const Inputs in = make(rng, n);
    std::vector<std::uint8_t> a(n), b(n);
    std::vector<std::int32_t> ca(n), cb(n);
    scalar_kernels().map_states(in.sym, in.lut, a);
    avx->map_states(in.sym, in.lut, b);
    CHECK(a == b);
    scalar_kernels().cell_costs(in.sym, in.old, in.lut, in.energy, ca);
    avx->cell_costs(in.sym, in.old, in.lut, in.energy, cb);
    CHECK(ca == cb);
    CHECK(scalar_kernels().transition(in.old, in.next, in.energy) == avx->transition(in.old, in.next, in.energy));
  }
}

TEST_CASE("large energies do not overflow the vector accumulators") {
  const std::size_t n = 100000;
  std::vector<std::uint8_t> old(n, 0), next(n, 3);
  const EnergyLut e{0, 0, 0, 10000000};
  const Transition want{static_cast<std::int64_t>(n) * 10000000, static_cast<std::uint32_t>(n)};
  CHECK(scalar_kernels().transition(old, next, e) == want);
  if (const auto* avx = avx2_kernels(); avx && cpu_has_avx2()) CHECK(avx->transition(old, next, e) == want);
}

TEST_CASE("backend switching") {
  const Backend before = active_backend();
  CHECK(set_backend(Backend::Scalar));
  CHECK(active_backend() == Backend::Scalar);
  CHECK(backend_name(Backend::Scalar) == "scalar");
  if (avx2_kernels() && cpu_has_avx2()) CHECK(set_backend(Backend::Avx2));
  set_backend(before);
}
