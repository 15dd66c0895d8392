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

#include <map>
#include <random>

#include "oracle.hpp"
#include "pcmenc/codecs.hpp"
#include "pcmenc/wlc.hpp"

using namespace pcmenc;

namespace {

const EnergyModel kModel;

CellState S(int i) { return static_cast<CellState>(i); }

MemoryLine line_of_words(std::uint64_t w) { return MemoryLine({w, w, w, w, w, w, w, w}); }

std::int64_t pj(std::span<const CellState> a, std::span<const CellState> b) { return oracle::cells_pj(a, b); }

int wlcrc_k(int g) { return g == 8 ? 9 : g == 16 ? 6 : g == 32 ? 4 : 3; }

}  // namespace

TEST_CASE("baseline examples") {
  const auto zero = encode_baseline(MemoryLine{});
  CHECK(zero.size() == 256);
  for (auto c : zero.cells) CHECK(c == CellState::S1);
  const auto ones = encode_baseline(line_of_words(0x5555555555555555ULL));
  for (auto c : ones.cells) CHECK(c == CellState::S4);
}

TEST_CASE("FNW complements a block of 01 symbols") {
  const SchemeConfig cfg = SchemeConfig::parse("fnw");
  const Codec codec(cfg);
  MemoryLine line;
  line.set_word(0, 0x5555555555555555ULL);
  line.set_word(1, 0x5555555555555555ULL);
  const EncodedLine old = codec.initial_state();
  const EncodedLine enc = codec.encode(line, old);
  CHECK(committed_candidates(enc, cfg) == std::vector<int>{1, 0, 0, 0});
  const auto block0 = std::span<const CellState>(enc.cells).first(64);
  CHECK(pj(std::span(old.cells).first(64), block0) == 64 * 56);
  CHECK(oracle::block_pj(std::vector<int>(64, 1), std::span(old.cells).first(64), oracle::kCosets[0]) == 64 * 583);
  CHECK(enc.aux()[0] == CellState::S2);
  CHECK(codec.decode(enc) == line);

  const EncodedLine again = codec.encode(line, enc);
  CHECK(again == enc);
  CHECK(pj(enc.cells, again.cells) == 0);
}

TEST_CASE("FNW commits the cheapest of all flip vectors including flip cells") {
  std::mt19937_64 rng(41);
  const SchemeConfig cfg = SchemeConfig::parse("fnw");
  for (int it = 0; it < 500; ++it) {
    const auto line = oracle::random_line(rng);
    const auto old = oracle::random_cells(rng, 2, false);
    const auto enc = encode(line, old, cfg, kModel);
    const auto sym = oracle::symbols(line);
    std::int64_t best = -1;
    for (int f = 0; f < 16; ++f) {
      std::int64_t cost = 0;
      for (int b = 0; b < 4; ++b) {
        const bool flip = (f >> (3 - b)) & 1;
        for (int i = b * 64; i < b * 64 + 64; ++i)
          cost += oracle::cell_pj(oracle::state_of(old.cells[i]), oracle::kCosets[0][flip ? 3 - sym[i] : sym[i]]);
      }
      // Flip bits pack MSB first into two cells under C1.
      for (int c = 0; c < 2; ++c) {
        const int s = ((f >> (3 - 2 * c)) & 1) << 1 | ((f >> (2 - 2 * c)) & 1);
        cost += oracle::cell_pj(oracle::state_of(old.aux()[c]), oracle::kCosets[0][s]);
      }
      if (best < 0 || cost < best) best = cost;
    }
    CHECK(pj(old.cells, enc.cells) == best);
    CHECK(decode(enc, cfg) == line);
  }
}

TEST_CASE("XOR coset masks") {
  const auto& masks = default_xor_masks();
  REQUIRE(masks.size() == 16);
  CHECK(masks[0] == MemoryLine{});
  std::mt19937_64 rng(kXorMaskSeed);
  for (std::size_t i = 1; i < 16; ++i) CHECK(masks[i] == oracle::random_line(rng));
  CHECK_THROWS_AS(encode_xor_coset(MemoryLine{}, EncodedLine(2, false), std::span(masks).first(15), kModel),
                  std::invalid_argument);
}

TEST_CASE("XOR coset rewrites an unchanged line for free with the zero mask") {
  const SchemeConfig cfg = SchemeConfig::parse("flipmin");
  std::mt19937_64 rng(43);
  const auto line = oracle::random_line(rng);
  const Codec codec(cfg);
  const auto first = codec.encode(line, codec.initial_state());
  const auto second = codec.encode(line, first);
  CHECK(pj(first.cells, second.cells) == 0);
  CHECK(committed_candidates(second, cfg) == committed_candidates(first, cfg));
  const auto plain = codec.encode(MemoryLine{}, codec.initial_state());
  CHECK(committed_candidates(plain, cfg) == std::vector<int>{0});
}

TEST_CASE("XOR coset picks the cheapest mask including its index cells") {
  std::mt19937_64 rng(47);
  const SchemeConfig cfg = SchemeConfig::parse("flipmin");
  const auto& masks = default_xor_masks();
  for (int it = 0; it < 1000; ++it) {
    const auto line = oracle::random_line(rng);
    const auto old = oracle::random_cells(rng, 2, false);
    const auto enc = encode(line, old, cfg, kModel);
    std::int64_t best = -1;
    int best_i = -1;
    for (int i = 0; i < 16; ++i) {
      const auto sym = oracle::symbols(line ^ masks[i]);
      std::int64_t cost = oracle::block_pj(sym, std::span(old.cells).first(256), oracle::kCosets[0]);
      cost += oracle::cell_pj(oracle::state_of(old.aux()[0]), oracle::kCosets[0][i >> 2]);
      cost += oracle::cell_pj(oracle::state_of(old.aux()[1]), oracle::kCosets[0][i & 3]);
      if (best < 0 || cost < best) {
        best = cost;
        best_i = i;
      }
    }
    CHECK(pj(old.cells, enc.cells) == best);
    CHECK(committed_candidates(enc, cfg) == std::vector<int>{best_i});
    CHECK(decode(enc, cfg) == line);
  }
}

TEST_CASE("six-coset table follows the pair rule") {
  const auto imgs = oracle::six_images();
  const auto& t = six_cosets_table();
  REQUIRE(t.size() == 6);
  for (int c = 0; c < 6; ++c) {
    for (Symbol s = 0; s < 4; ++s) CHECK(t[c].map(s) == S(imgs[c][s]));
    CHECK(t.aux_states()[c][0] == S(oracle::kSixAux[c][0]));
    CHECK(t.aux_states()[c][1] == S(oracle::kSixAux[c][1]));
  }
  CHECK(t[0] == candidate_c1());
  CHECK(t[5].image() == builtin_candidates()[2].image());
}

TEST_CASE("6cosets sends a run of 01 to the cheapest state the pair rule allows") {
  const SchemeConfig cfg = SchemeConfig::parse("6cosets-16");
  const Codec codec(cfg);
  MemoryLine line;
  line.set_word(0, 0x5555000000000000ULL);
  const auto enc = codec.encode(line, codec.initial_state());
  const int id = committed_candidates(enc, cfg)[0];
  for (int i = 0; i < 8; ++i) CHECK(enc.cells[i] == CellState::S2);
  CHECK(six_cosets_table()[id].map(0b01) == CellState::S2);
  CHECK(codec.decode(enc) == line);
}

TEST_CASE("6cosets decode applies the candidate named by the aux pair") {
  const SchemeConfig cfg = SchemeConfig::parse("6cosets");
  EncodedLine enc(2, false);
  enc.aux()[0] = S(oracle::kSixAux[3][0]);
  enc.aux()[1] = S(oracle::kSixAux[3][1]);
  std::mt19937_64 rng(53);
  std::array<Symbol, 256> sym{};
  for (auto& s : sym) s = rng() & 3;
  for (int i = 0; i < 256; ++i) enc.cells[i] = S(oracle::six_images()[3][sym[i]]);
  CHECK(decode(enc, cfg) == MemoryLine::from_symbols(sym));
  enc.aux()[0] = CellState::S4;
  CHECK_THROWS_AS(decode(enc, cfg), DecodeError);
}

TEST_CASE("independent-choice schemes commit the brute-force optimum") {
  std::mt19937_64 rng(59);
  const auto six = oracle::six_images();
  const std::vector<std::pair<std::string, std::vector<oracle::Image>>> schemes{
      {"6cosets-16", six}, {"6cosets-8", six}, {"6cosets-128", six},
      {"4cosets-16", oracle::coset_images(4)}, {"4cosets-8", oracle::coset_images(4)},
      {"3cosets-32", oracle::coset_images(3)}, {"3cosets-64", oracle::coset_images(3)}};
  for (const auto& [name, imgs] : schemes) {
    CAPTURE(name);
    const SchemeConfig cfg = SchemeConfig::parse(name);
    const Codec codec(cfg);
    const int cells = cfg.granularity / 2;
    int blocks_checked = 0;
    while (blocks_checked < 10000) {
      const auto line = oracle::random_line(rng);
      const auto old = oracle::random_cells(rng, codec.aux_cells(), false);
      const auto enc = codec.encode(line, old);
      const auto sym = oracle::symbols(line);
      const auto got = committed_candidates(enc, cfg);
      for (int b = 0; b < 256 / cells; ++b, ++blocks_checked) {
        const auto s = std::span<const int>(sym).subspan(b * cells, cells);
        const auto o = std::span<const CellState>(old.cells).subspan(b * cells, cells);
        const auto best = oracle::best_of(s, o, imgs);
        REQUIRE(got[b] == best.id);
        REQUIRE(pj(o, std::span<const CellState>(enc.cells).subspan(b * cells, cells)) == best.pj);
      }
      REQUIRE(codec.decode(enc) == line);
    }
  }
}

TEST_CASE("4cosets maps an all-ones block with C2") {
  MemoryLine line;
  line.set_word(0, 0xFFFF000000000000ULL);
  const auto enc = encode_table_cosets(line, EncodedLine(32, false), CandidateTable::four_cosets(), 16, kModel);
  CHECK(committed_candidates(enc, SchemeConfig::parse("4cosets-16"))[0] == 1);
  for (int i = 0; i < 8; ++i) CHECK(enc.cells[i] == CellState::S1);
  CHECK(enc.aux()[0] == CellState::S2);
}

TEST_CASE("rewriting the decoded value re-selects the same candidates at zero cost") {
  std::mt19937_64 rng(61);
  for (const char* name : {"4cosets-16", "6cosets-32", "3-r-cosets-16", "wlcrc-16", "wlc+4cosets-32"}) {
    CAPTURE(name);
    const Codec codec(SchemeConfig::parse(name));
    const auto line = oracle::random_compressible(rng, 9);
    const auto first = codec.encode(line, codec.initial_state());
    const auto second = codec.encode(line, first);
    CHECK(second == first);
  }
}

TEST_CASE("brute_force_best") {
  const std::vector<Symbol> block{3, 3, 3, 3};
  const std::vector<CellState> old(4, CellState::S1);
  const auto& four = CandidateTable::four_cosets().candidates();
  const auto b = brute_force_best(block, old, four, kModel);
  CHECK(b.index == 1);
  CHECK(b.cost == Energy{});
  const auto single = brute_force_best(block, old, std::span(four).first(1), kModel);
  CHECK(single.index == 0);
  CHECK(single.cost.pj() == 4 * 343.0);
  CHECK_THROWS_AS(brute_force_best(block, std::vector<CellState>(3), four, kModel), std::invalid_argument);

  std::mt19937_64 rng(67);
  for (int i = 0; i < 5000; ++i) {
    std::vector<Symbol> s(16);
    std::vector<int> si(16);
    std::vector<CellState> o(16);
    for (int j = 0; j < 16; ++j) {
      si[j] = s[j] = rng() & 3;
      o[j] = S(rng() & 3);
    }
    const auto got = brute_force_best(s, o, four, kModel);
    const auto want = oracle::best_of(si, o, oracle::coset_images(4));
    REQUIRE(got.index == want.id);
    REQUIRE(got.cost.pj() == static_cast<double>(want.pj));
  }
}

TEST_CASE("3-r-cosets layout and all-zero tie") {
  const SchemeConfig cfg = SchemeConfig::parse("3-r-cosets");
  CHECK(cfg.granularity == 16);
  const Codec codec(cfg);
  CHECK(codec.aux_cells() == 17);
  const auto enc = codec.encode(MemoryLine{}, codec.initial_state());
  CHECK(committed_groups(enc, cfg) == std::vector<int>{0});
  for (int id : committed_candidates(enc, cfg)) CHECK(id == 0);
  for (auto c : enc.cells) CHECK(c == CellState::S1);
}

TEST_CASE("3-r-cosets commits the cheaper group") {
  std::mt19937_64 rng(71);
  const SchemeConfig cfg = SchemeConfig::parse("3-r-cosets-16");
  for (int it = 0; it < 1000; ++it) {
    const auto line = oracle::random_line(rng);
    const auto old = oracle::random_cells(rng, 17, false);
    const auto enc = encode(line, old, cfg, kModel);
    const auto sym = oracle::symbols(line);
    std::array<std::int64_t, 2> total{};
    for (int b = 0; b < 32; ++b) {
      const auto s = std::span<const int>(sym).subspan(b * 8, 8);
      const auto o = std::span<const CellState>(old.cells).subspan(b * 8, 8);
      const auto c1 = oracle::block_pj(s, o, oracle::kCosets[0]);
      total[0] += std::min(c1, oracle::block_pj(s, o, oracle::kCosets[1]));
      total[1] += std::min(c1, oracle::block_pj(s, o, oracle::kCosets[2]));
    }
    const int group = total[1] < total[0] ? 1 : 0;
    REQUIRE(committed_groups(enc, cfg) == std::vector<int>{group});
    REQUIRE(pj(std::span(old.cells).first(256), std::span(enc.cells).first(256)) == total[group]);
    REQUIRE(decode(enc, cfg) == line);
  }
}

TEST_CASE("WLCRC word layouts") {
  const auto l16 = wlc_word_layout(SchemeConfig::parse("wlcrc-16"));
  CHECK(l16.k == 6);
  CHECK(l16.aux_bits == 5);
  CHECK(l16.aux_cells == 3);
  REQUIRE(l16.blocks.size() == 4);
  CHECK(l16.blocks[0].first_cell == 3);
  CHECK(l16.blocks[0].cell_count == 5);
  CHECK(l16.blocks[1].first_cell == 8);
  CHECK(l16.blocks[3].first_cell == 24);
  CHECK(l16.blocks[3].cell_count == 8);

  const std::map<int, int> budget{{8, 8}, {16, 5}, {32, 3}, {64, 2}};
  for (const auto& [g, bits] : budget) {
    const auto cfg = SchemeConfig::parse("wlcrc-" + std::to_string(g));
    const auto l = wlc_word_layout(cfg);
    CHECK(l.k == wlcrc_k(g));
    CHECK(l.aux_bits == bits);
    CHECK(l.aux_bits <= l.k - 1);
    const auto want = oracle::wlc_blocks(l.k, g);
    REQUIRE(l.blocks.size() == want.size());
    for (std::size_t b = 0; b < want.size(); ++b) {
      CHECK(l.blocks[b].first_cell == want[b].first);
      CHECK(l.blocks[b].cell_count == want[b].count);
    }
  }
}

TEST_CASE("WLC+4cosets reclaimed budgets") {
  const std::map<int, int> reclaimed{{8, 16}, {16, 8}, {32, 4}, {64, 2}};
  for (const auto& [g, bits] : reclaimed) {
    const auto cfg = SchemeConfig::parse("wlc+4cosets-" + std::to_string(g));
    CHECK(cfg.effective_k() - 1 == bits);
    const auto l = wlc_word_layout(cfg);
    CHECK(l.aux_bits == 2 * static_cast<int>(l.blocks.size()));
    CHECK(l.aux_bits <= bits);
  }
  const auto l32 = wlc_word_layout(SchemeConfig::parse("wlc+4cosets-32"));
  CHECK(l32.k == 5);
  CHECK(l32.aux_bits == 4);
}

TEST_CASE("k overrides are checked against the aux budget") {
  CHECK_THROWS_AS(SchemeConfig::parse("wlcrc-16:k=5"), std::invalid_argument);
  CHECK_NOTHROW(SchemeConfig::parse("wlcrc-16:k=7"));
  CHECK_THROWS_AS(SchemeConfig::parse("wlc+4cosets-16:k=6"), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig::parse("wlcrc-16:k=18"), std::invalid_argument);
}

TEST_CASE("scheme names and granularity rules") {
  CHECK(SchemeConfig::parse("wlcrc").name() == "wlcrc-16");
  CHECK(SchemeConfig::parse("fnw").granularity == 128);
  CHECK(SchemeConfig::parse("xor-coset").scheme == Scheme::XorCoset);
  CHECK(SchemeConfig::parse("wlcrc-16:t=0.01").threshold == 0.01);
  CHECK(SchemeConfig::parse("wlc:k=7").effective_k() == 7);
  CHECK_THROWS_AS(SchemeConfig::parse("wlcrc-128"), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig::parse("6cosets-12"), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig::parse("baseline-64"), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig::parse("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig::parse("wlcrc-16:t=-1"), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig::parse("wlcrc-16:q=1"), std::invalid_argument);
}

TEST_CASE("WLCRC all-zero line costs nothing over the initial state") {
  const Codec codec(SchemeConfig::parse("wlcrc-16"));
  const auto old = codec.initial_state();
  const auto enc = codec.encode(MemoryLine{}, old);
  CHECK(enc.size() == 257);
  CHECK(enc.flag() == CellState::S1);
  CHECK(committed_groups(enc, codec.config()) == std::vector<int>(8, 0));
  CHECK(pj(old.cells, enc.cells) == 0);
}

TEST_CASE("WLCRC stores incompressible lines raw with flag S2") {
  const Codec codec(SchemeConfig::parse("wlcrc-16"));
  MemoryLine line;
  line.set_word(2, 0x4000000000000000ULL);
  const auto enc = codec.encode(line, codec.initial_state());
  CHECK(enc.flag() == CellState::S2);
  const auto raw = encode_baseline(line);
  CHECK(std::equal(raw.cells.begin(), raw.cells.end(), enc.cells.begin()));
  CHECK(codec.decode(enc) == line);
  CHECK_FALSE(codec.is_compressed(enc));
}

TEST_CASE("WLCRC matches exhaustive group and selection search") {
  std::mt19937_64 rng(73);
  for (int g : {8, 16, 32, 64}) {
    CAPTURE(g);
    const SchemeConfig cfg = SchemeConfig::parse("wlcrc-" + std::to_string(g));
    const auto blocks = oracle::wlc_blocks(wlcrc_k(g), g);
    for (int it = 0; it < 1000; ++it) {
      const auto line = oracle::random_compressible(rng, wlcrc_k(g));
      const auto old = oracle::random_cells(rng, 0, true);
      const auto enc = encode(line, old, cfg, kModel);
      REQUIRE(enc.flag() == CellState::S1);
      const auto sym = oracle::symbols(line);
      const auto groups = committed_groups(enc, cfg);
      const auto cands = committed_candidates(enc, cfg);
      for (int w = 0; w < 8; ++w) {
        const auto opts = oracle::group_options(sym, old.cells, w, blocks);
        const int want_group = opts[1].cost < opts[0].cost ? 1 : 0;
        REQUIRE(groups[w] == want_group);
        std::int64_t committed = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
          REQUIRE(cands[w * blocks.size() + b] == opts[want_group].cand[b]);
          const int first = w * 32 + blocks[b].first;
          committed += pj(std::span(old.cells).subspan(first, blocks[b].count),
                          std::span(enc.cells).subspan(first, blocks[b].count));
        }
        REQUIRE(committed == std::min(opts[0].cost, opts[1].cost));
      }
      REQUIRE(decode(enc, cfg) == line);
    }
  }
}

TEST_CASE("WLC+4cosets commits the per-block optimum") {
  std::mt19937_64 rng(79);
  for (int g : {16, 32, 64}) {
    CAPTURE(g);
    const SchemeConfig cfg = SchemeConfig::parse("wlc+4cosets-" + std::to_string(g));
    const auto blocks = oracle::wlc_blocks(cfg.effective_k(), g);
    int checked = 0;
    while (checked < 10000) {
      const auto line = oracle::random_compressible(rng, cfg.effective_k());
      const auto old = oracle::random_cells(rng, 0, true);
      const auto enc = encode(line, old, cfg, kModel);
      const auto sym = oracle::symbols(line);
      const auto cands = committed_candidates(enc, cfg);
      for (int w = 0; w < 8; ++w)
        for (std::size_t b = 0; b < blocks.size(); ++b, ++checked) {
          const int first = w * 32 + blocks[b].first;
          const auto best = oracle::best_of(std::span<const int>(sym).subspan(first, blocks[b].count),
                                            std::span<const CellState>(old.cells).subspan(first, blocks[b].count),
                                            oracle::coset_images(4));
          REQUIRE(cands[w * blocks.size() + b] == best.id);
          // The candidate's aux state sits in the block's reclaimed cell.
          REQUIRE(enc.cells[w * 32 + static_cast<int>(b)] == S(best.id));
        }
      REQUIRE(decode(enc, cfg) == line);
    }
  }
}

TEST_CASE("WLC+4cosets all-zero line") {
  const Codec codec(SchemeConfig::parse("wlc+4cosets-32"));
  const auto enc = codec.encode(MemoryLine{}, codec.initial_state());
  for (int id : committed_candidates(enc, codec.config())) CHECK(id == 0);
  CHECK(pj(codec.initial_state().cells, enc.cells) == 0);
}

TEST_CASE("encode_wlc_unrestricted accepts only the built-in tables") {
  std::mt19937_64 rng(83);
  const auto line = oracle::random_compressible(rng, 9);
  const EncodedLine old(0, true);
  const auto a = encode_wlc_unrestricted(line, old, CandidateTable::three_cosets(), 32, kModel);
  CHECK(a == encode(line, old, SchemeConfig::parse("wlc+3cosets-32"), kModel));
  const CandidateTable custom("x", {builtin_candidates()[1]}, {{CellState::S1}});
  CHECK_THROWS_AS(encode_wlc_unrestricted(line, old, custom, 32, kModel), std::invalid_argument);
}

TEST_CASE("multi-objective with T=0 equals WLCRC") {
  std::mt19937_64 rng(89);
  for (int it = 0; it < 2000; ++it) {
    const auto line = oracle::random_compressible(rng, 6);
    const auto old = oracle::random_cells(rng, 0, true);
    REQUIRE(encode_multiobjective(line, old, 16, kModel, 0.0) == encode_wlcrc(line, old, 16, kModel));
  }
  CHECK_THROWS_AS(encode_multiobjective(MemoryLine{}, EncodedLine(0, true), 16, kModel, -0.5), std::invalid_argument);
}

TEST_CASE("multi-objective prefers fewer updated cells inside the threshold") {
  std::mt19937_64 rng(97);
  const auto blocks = oracle::wlc_blocks(6, 16);
  const SchemeConfig cfg = SchemeConfig::parse("wlcrc-16:t=0.01");
  int decisive = 0;
  for (int it = 0; it < 4000; ++it) {
    // Old cells decoded from a related line make near-ties more common.
    const auto base = oracle::random_compressible(rng, 6);
    auto line = base;
    line.set_word(static_cast<int>(rng() % 8), oracle::random_compressible(rng, 6).word(0));
    auto old = encode_wlcrc(base, EncodedLine(0, true), 16, kModel);
    for (int i = 0; i < 256; ++i)
      if (rng() % 4 == 0) old.cells[i] = S(rng() & 3);

    const auto enc = encode(line, old, cfg, kModel);
    const auto groups = committed_groups(enc, cfg);
    const auto sym = oracle::symbols(line);
    for (int w = 0; w < 8; ++w) {
      const auto opts = oracle::group_options(sym, old.cells, w, blocks);
      const auto c12 = opts[0].cost, c13 = opts[1].cost;
      int want = c13 < c12 ? 1 : 0;
      const bool within = std::abs(c12 - c13) < 0.01 * static_cast<double>(std::max(c12, c13));
      if (within && opts[0].changed != opts[1].changed) {
        want = opts[1].changed < opts[0].changed ? 1 : 0;
        if ((c13 < c12) != (want == 1) && c12 != c13) ++decisive;
      }
      REQUIRE(groups[w] == want);
    }
    REQUIRE(decode(enc, cfg) == line);
  }
  // At least one word where the cell count overrode a cheaper group.
  CHECK(decisive > 0);
}

TEST_CASE("multi-objective with T=1 chooses by updated cells") {
  std::mt19937_64 rng(101);
  const auto blocks = oracle::wlc_blocks(6, 16);
  const SchemeConfig cfg = SchemeConfig::parse("wlcrc-16:t=1");
  for (int it = 0; it < 1000; ++it) {
    const auto line = oracle::random_compressible(rng, 6);
    const auto old = oracle::random_cells(rng, 0, true);
    const auto groups = committed_groups(encode(line, old, cfg, kModel), cfg);
    const auto sym = oracle::symbols(line);
    for (int w = 0; w < 8; ++w) {
      const auto opts = oracle::group_options(sym, old.cells, w, blocks);
      if (opts[0].cost == 0 || opts[1].cost == 0 || opts[0].changed == opts[1].changed) continue;
      REQUIRE(groups[w] == (opts[1].changed < opts[0].changed ? 1 : 0));
    }
  }
}

TEST_CASE("restriction never beats unrestricted choice and never loses to C1 alone") {
  std::mt19937_64 rng(103);
  const auto blocks = oracle::wlc_blocks(6, 16);
  for (int it = 0; it < 1000; ++it) {
    const auto line = oracle::random_compressible(rng, 6);
    const auto old = oracle::random_cells(rng, 0, true);
    const auto enc = encode_wlcrc(line, old, 16, kModel);
    const auto sym = oracle::symbols(line);
    std::int64_t three = 0, committed = 0, c1 = 0;
    for (int w = 0; w < 8; ++w)
      for (const auto& b : blocks) {
        const int first = w * 32 + b.first;
        const auto s = std::span<const int>(sym).subspan(first, b.count);
        const auto o = std::span<const CellState>(old.cells).subspan(first, b.count);
        three += oracle::best_of(s, o, oracle::coset_images(3)).pj;
        c1 += oracle::block_pj(s, o, oracle::kCosets[0]);
        committed += pj(o, std::span<const CellState>(enc.cells).subspan(first, b.count));
      }
    REQUIRE(three <= committed);
    REQUIRE(committed <= c1);
  }
}

TEST_CASE("decode rejects malformed cells") {
  const SchemeConfig wl = SchemeConfig::parse("wlcrc-16");
  EncodedLine bad(0, true);
  bad.set_flag(CellState::S3);
  CHECK_THROWS_AS(decode(bad, wl), DecodeError);
  CHECK_THROWS_AS(decode(EncodedLine(0, false), wl), DecodeError);
  CHECK_THROWS_AS(decode(EncodedLine(1, false), SchemeConfig::parse("baseline")), DecodeError);

  const SchemeConfig t3 = SchemeConfig::parse("3cosets-64");
  EncodedLine e3(8, false);
  e3.aux()[5] = CellState::S4;
  CHECK_THROWS_AS(decode(e3, t3), DecodeError);

  const SchemeConfig w3 = SchemeConfig::parse("wlc+3cosets-32");
  EncodedLine ew(0, true);
  ew.cells[32] = CellState::S4;
  CHECK_THROWS_AS(decode(ew, w3), DecodeError);
}

TEST_CASE("codec regions label reclaimed cells of compressed lines as aux") {
  const Codec codec(SchemeConfig::parse("wlcrc-16"));
  const auto enc = codec.encode(MemoryLine{}, codec.initial_state());
  const auto r = codec.regions(enc);
  REQUIRE(r.size() == 257);
  CHECK(r[0] == Region::Aux);
  CHECK(r[2] == Region::Aux);
  CHECK(r[3] == Region::Data);
  CHECK(r[32] == Region::Aux);
  CHECK(r[256] == Region::Flag);
  MemoryLine raw;
  raw.set_word(0, 0x4000000000000000ULL);
  const auto rr = codec.regions(codec.encode(raw, enc));
  CHECK(rr[0] == Region::Data);

  const Codec fnw(SchemeConfig::parse("fnw"));
  const auto rf = fnw.regions(fnw.initial_state());
  CHECK(rf.size() == 258);
  CHECK(rf[256] == Region::Aux);
}

TEST_CASE("round trip for every scheme over random lines and prior states") {
  std::mt19937_64 rng(107);
  const std::vector<std::string> names{
      "baseline",     "fnw",         "flipmin",       "6cosets",        "6cosets-128",    "6cosets-32",
      "6cosets-16",   "6cosets-8",   "4cosets-64",    "4cosets-32",     "4cosets-16",     "4cosets-8",
      "3cosets-64",   "3cosets-32",  "3cosets-16",    "3cosets-8",      "3-r-cosets-16",  "3-r-cosets-64",
      "wlcrc-8",      "wlcrc-16",    "wlcrc-32",      "wlcrc-64",       "wlc+4cosets-8",  "wlc+4cosets-16",
      "wlc+4cosets-32", "wlc+4cosets-64", "wlc+3cosets-32", "wlcrc-16:t=0.01", "wlc", "wlc:k=12"};
  for (const auto& name : names) {
    CAPTURE(name);
    const Codec codec(SchemeConfig::parse(name));
    for (int it = 0; it < 1000; ++it) {
      const auto line = (it % 2) ? oracle::random_line(rng) : oracle::random_compressible(rng, 3 + it % 15);
      auto old = oracle::random_cells(rng, codec.aux_cells(), codec.has_flag());
      if (codec.has_flag()) old.set_flag(S(rng() & 1));
      const auto enc = codec.encode(line, old);
      REQUIRE(enc.size() == codec.cells_per_line());
      REQUIRE(codec.decode(enc) == line);
      if (codec.has_flag()) REQUIRE((enc.flag() == CellState::S1 || enc.flag() == CellState::S2));
      REQUIRE(codec.encode(line, old) == enc);
    }
  }
}

TEST_CASE("cell counts per scheme") {
  CHECK(Codec(SchemeConfig::parse("wlcrc-16")).cells_per_line() == 257);
  CHECK(Codec(SchemeConfig::parse("6cosets")).aux_cells() == 2);
  CHECK(Codec(SchemeConfig::parse("flipmin")).aux_cells() == 2);
  CHECK(Codec(SchemeConfig::parse("fnw")).aux_cells() == 2);
  CHECK(Codec(SchemeConfig::parse("6cosets-16")).aux_cells() == 64);
  CHECK(Codec(SchemeConfig::parse("4cosets-16")).aux_cells() == 32);
}
