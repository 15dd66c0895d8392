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

#include "oracle.hpp"
#include "pcmenc/core_model.hpp"

using namespace pcmenc;

namespace {

CellState S(int i) { return static_cast<CellState>(i); }

}  // namespace

TEST_CASE("default mapping follows the C1 column") {
  CHECK(default_map(0b00) == CellState::S1);
  CHECK(default_map(0b01) == CellState::S4);
  CHECK(default_map(0b10) == CellState::S2);
  CHECK(default_map(0b11) == CellState::S3);
}

TEST_CASE("built-in candidates equal the literal table") {
  const auto& c = builtin_candidates();
  for (int id = 0; id < 4; ++id) {
    CHECK(c[id].id() == id + 1);
    for (Symbol s = 0; s < 4; ++s) CHECK(c[id].map(s) == S(oracle::kCosets[id][s]));
  }
  CHECK(candidate_c1() == c[0]);
}

TEST_CASE("apply and invert coset examples") {
  const auto& c = builtin_candidates();
  CHECK(apply_coset(c[1], std::vector<Symbol>{0b00}) == std::vector<CellState>{CellState::S2});
  CHECK(apply_coset(c[2], std::vector<Symbol>{0b10}) == std::vector<CellState>{CellState::S4});
  CHECK(apply_coset(c[0], std::vector<Symbol>{}).empty());
  CHECK(invert_coset(c[1], std::vector<CellState>{CellState::S1}) == std::vector<Symbol>{0b11});
  CHECK(invert_coset(c[0], std::vector<CellState>{CellState::S1, CellState::S2, CellState::S3, CellState::S4}) ==
        std::vector<Symbol>{0b00, 0b10, 0b11, 0b01});

  std::mt19937_64 rng(11);
  std::vector<Symbol> eight(8);
  for (auto& s : eight) s = static_cast<Symbol>(rng() & 3);
  CHECK(invert_coset(c[3], apply_coset(c[3], eight)) == eight);
}

TEST_CASE("invert is the inverse of apply for every candidate and symbol") {
  for (const auto& c : builtin_candidates())
    for (Symbol s = 0; s < 4; ++s) CHECK(c.unmap(c.map(s)) == s);
}

TEST_CASE("non-permutation candidates are rejected") {
  CHECK_THROWS_AS(CosetCandidate(9, {CellState::S1, CellState::S1, CellState::S2, CellState::S3}),
                  std::invalid_argument);
}

TEST_CASE("cell write energy matches the literal table") {
  const EnergyModel m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(cell_write_energy(S(a), S(b), m) == Energy::from_pj(static_cast<double>(oracle::cell_pj(a, b))));
  CHECK(cell_write_energy(CellState::S3, CellState::S3, m) == Energy{});
  CHECK(cell_write_energy(CellState::S1, CellState::S4, m).pj() == 583.0);
  CHECK(cell_write_energy(CellState::S4, CellState::S1, m).pj() == 36.0);
}

TEST_CASE("any change costs at least the RESET pulse") {
  const EnergyModel m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) CHECK(cell_write_energy(S(a), S(b), m) >= m.reset());
}

TEST_CASE("scale_high scales only the S3 and S4 SET energies") {
  for (double s : {1.0, 0.5, 1.0 / 3, 0.25, 0.2, 1.0 / 6}) {
    const EnergyModel m = EnergyModel().with_scale(s);
    CHECK(m.write_into(CellState::S1).pj() == 36.0);
    CHECK(m.write_into(CellState::S2).pj() == 56.0);
    CHECK(m.write_into(CellState::S3).pj() == doctest::Approx(36 + s * 307).epsilon(1e-4));
    CHECK(m.write_into(CellState::S4).pj() == doctest::Approx(36 + s * 547).epsilon(1e-4));
  }
}

TEST_CASE("energy model validation") {
  CHECK_THROWS_AS(EnergyModel(-1, {0, 20, 307, 547}), std::invalid_argument);
  CHECK_THROWS_AS(EnergyModel(36, {0, 400, 307, 547}), std::invalid_argument);
  CHECK_THROWS_AS(EnergyModel(36, {0, 20, 307, 2e5}), std::invalid_argument);
  // Scaling the high states below S2 would break the state order.
  CHECK_THROWS_AS(EnergyModel(36, {0, 20, 307, 547}, 0.01), std::invalid_argument);
  CHECK_NOTHROW(EnergyModel(36, {0, 20, 307, 547}, 0.1));
}

TEST_CASE("write LUT is in hundredths of a picojoule") {
  const auto lut = EnergyModel().write_lut();
  CHECK(lut == std::array<std::int32_t, 4>{3600, 5600, 34300, 58300});
}

TEST_CASE("disturbance model defaults and validation") {
  const DisturbanceModel d;
  CHECK(d.rate(CellState::S1) == 0.123);
  CHECK(d.rate(CellState::S2) == 0.0);
  CHECK(d.rate(CellState::S3) == 0.276);
  CHECK(d.rate(CellState::S4) == 0.152);
  CHECK_THROWS_AS(DisturbanceModel({0.1, 0.05, 0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(DisturbanceModel({1.1, 0, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("candidate tables") {
  const auto& four = CandidateTable::four_cosets();
  REQUIRE(four.size() == 4);
  CHECK(four.index_bits() == 2);
  CHECK(four.aux_cells_per_choice() == 1);
  for (int i = 0; i < 4; ++i) {
    CHECK(four[i] == builtin_candidates()[i]);
    CHECK(four.aux_states()[i][0] == S(i));
  }
  const auto& three = CandidateTable::three_cosets();
  REQUIRE(three.size() == 3);
  CHECK(three.index_bits() == 2);
  const CellState s4 = CellState::S4;
  CHECK(three.find_aux(std::span<const CellState>(&s4, 1)) == -1);
  CHECK(CandidateTable::identity().index_bits() == 0);
}

TEST_CASE("cell state text forms") {
  CHECK(parse_state("S3") == CellState::S3);
  CHECK(parse_state("2") == CellState::S2);
  CHECK(to_string(CellState::S4) == "S4");
  CHECK_THROWS_AS(parse_state("S5"), std::invalid_argument);
}

TEST_CASE("model configuration text") {
  const auto cfg = parse_model_config("# comment\nreset_pj = 40\nset_s4_pj=600\nscale_high = 0.5\nder_s1 = 0.2\nscheme = fnw\n");
  CHECK(cfg.energy.write_into(CellState::S1).pj() == 40.0);
  CHECK(cfg.energy.write_into(CellState::S4).pj() == 340.0);
  CHECK(cfg.disturbance.rate(CellState::S1) == 0.2);
  REQUIRE(cfg.other.size() == 1);
  CHECK(cfg.other[0] == std::pair<std::string, std::string>{"scheme", "fnw"});
  CHECK_THROWS(parse_model_config("reset_pj 40"));
  CHECK_THROWS(parse_model_config("reset_pj = abc"));
}
