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

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "detail.hpp"
#include "pcmenc/wlc.hpp"

namespace pcmenc {

namespace {

struct SchemeInfo {
  Scheme scheme;
  std::string_view name;
  int default_granularity;
};

constexpr std::array<SchemeInfo, 11> kSchemes{{
    {Scheme::Baseline, "baseline", 512},
    {Scheme::Fnw, "fnw", 128},
    {Scheme::XorCoset, "flipmin", 512},
    {Scheme::SixCosets, "6cosets", 512},
    {Scheme::FourCosets, "4cosets", 64},
    {Scheme::ThreeCosets, "3cosets", 64},
    {Scheme::RestrictedLine, "3-r-cosets", 16},
    {Scheme::Wlcrc, "wlcrc", 16},
    {Scheme::WlcFourCosets, "wlc+4cosets", 32},
    {Scheme::WlcThreeCosets, "wlc+3cosets", 32},
    {Scheme::WlcOnly, "wlc", 64},
}};

const SchemeInfo& info(Scheme s) {
  return *std::find_if(kSchemes.begin(), kSchemes.end(), [&](const SchemeInfo& i) { return i.scheme == s; });
}

const SchemeInfo* find_scheme(std::string_view name) {
  if (name == "xor-coset") name = "flipmin";
  for (const auto& i : kSchemes)
    if (i.name == name) return &i;
  return nullptr;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::array<int, 7> kLineGranularities{8, 16, 32, 64, 128, 256, 512};
constexpr std::array<int, 4> kWordGranularities{8, 16, 32, 64};

}  // namespace

std::string_view scheme_base_name(Scheme s) noexcept { return info(s).name; }

SchemeConfig SchemeConfig::make(Scheme s, std::optional<int> granularity) {
  SchemeConfig cfg;
  cfg.scheme = s;
  cfg.granularity = granularity.value_or(info(s).default_granularity);
  return cfg;
}

SchemeConfig SchemeConfig::parse(std::string_view text) {
  std::string_view name = text;
  std::string_view options;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    options = text.substr(colon + 1);
  }

  std::optional<int> g;
  const SchemeInfo* found = find_scheme(name);
  if (!found) {
    const auto dash = name.rfind('-');
    if (dash != std::string_view::npos) {
      g = parse_int(name.substr(dash + 1));
      if (g) found = find_scheme(name.substr(0, dash));
    }
  }
  if (!found) throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
  SchemeConfig cfg = make(found->scheme, g);

  while (!options.empty()) {
    const auto comma = options.find(',');
    const auto opt = options.substr(0, comma);
    options = comma == std::string_view::npos ? std::string_view{} : options.substr(comma + 1);
    if (opt.starts_with("k=")) {
      const auto k = parse_int(opt.substr(2));
      if (!k) throw std::invalid_argument("bad k in scheme '" + std::string(text) + "'");
      cfg.k = *k;
    } else if (opt.starts_with("t=")) {
      try {
        cfg.threshold = std::stod(std::string(opt.substr(2)));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad threshold in scheme '" + std::string(text) + "'");
      }
    } else {
      throw std::invalid_argument("unknown scheme option '" + std::string(opt) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

bool SchemeConfig::uses_granularity() const noexcept {
  return scheme != Scheme::Baseline && scheme != Scheme::XorCoset && scheme != Scheme::WlcOnly;
}

bool SchemeConfig::uses_wlc() const noexcept {
  return scheme == Scheme::Wlcrc || scheme == Scheme::WlcFourCosets || scheme == Scheme::WlcThreeCosets ||
         scheme == Scheme::WlcOnly;
}

int SchemeConfig::effective_k() const {
  if (!uses_wlc()) throw std::logic_error(std::string(scheme_base_name(scheme)) + " does not use WLC");
  if (k) return *k;
  const auto slot = [&](std::array<int, 4> ks) {
    for (std::size_t i = 0; i < kWordGranularities.size(); ++i)
      if (kWordGranularities[i] == granularity) return ks[i];
    throw std::invalid_argument(name() + ": WLC schemes support granularity 8, 16, 32 or 64");
  };
  switch (scheme) {
    case Scheme::Wlcrc: return slot({9, 6, 4, 3});
    case Scheme::WlcFourCosets:
    case Scheme::WlcThreeCosets: return slot({17, 9, 5, 3});
    default: return 6;
  }
}

std::string SchemeConfig::name() const {
  std::ostringstream os;
  os << scheme_base_name(scheme);
  if (uses_granularity()) os << '-' << granularity;
  std::string opts;
  if (k) opts += "k=" + std::to_string(*k);
  if (threshold != 0.0) {
    std::ostringstream t;
    t << threshold;
    opts += (opts.empty() ? "" : ",") + std::string("t=") + t.str();
  }
  if (!opts.empty()) os << ':' << opts;
  return os.str();
}

void SchemeConfig::validate() const {
  const auto in = [](auto& set, int g) { return std::find(set.begin(), set.end(), g) != set.end(); };
  switch (scheme) {
    case Scheme::Baseline:
    case Scheme::XorCoset:
    case Scheme::WlcOnly:
      if (granularity != info(scheme).default_granularity)
        throw std::invalid_argument(std::string(scheme_base_name(scheme)) + " has a fixed granularity of " +
                                    std::to_string(info(scheme).default_granularity));
      break;
    case Scheme::Fnw:
    case Scheme::SixCosets:
    case Scheme::FourCosets:
    case Scheme::ThreeCosets:
    case Scheme::RestrictedLine:
      if (!in(kLineGranularities, granularity))
        throw std::invalid_argument(name() + ": granularity must be one of 8..512 dividing 512");
      break;
    case Scheme::Wlcrc:
    case Scheme::WlcFourCosets:
    case Scheme::WlcThreeCosets:
      if (!in(kWordGranularities, granularity))
        throw std::invalid_argument(name() + ": WLC schemes support granularity 8, 16, 32 or 64");
      break;
  }
  if (k && !uses_wlc()) throw std::invalid_argument(name() + ": k applies to WLC schemes only");
  if (uses_wlc()) {
    wlc::WlcConfig checked(effective_k());
    (void)checked;
    (void)wlc_word_layout(*this);
  }
  if (!std::isfinite(threshold) || threshold < 0.0)
    throw std::invalid_argument(name() + ": threshold must be >= 0");
  if (threshold != 0.0 && scheme != Scheme::Wlcrc)
    throw std::invalid_argument(name() + ": threshold applies to wlcrc only");
  if (!masks.empty() && masks.size() != 16)
    throw std::invalid_argument("XOR coset scheme needs exactly 16 masks");
}

const CandidateTable& six_cosets_table() {
  static const CandidateTable table = [] {
    // Symbols in default-state order: 00 (S1), 10 (S2), 11 (S3), 01 (S4).
    constexpr std::array<Symbol, 4> order{0b00, 0b10, 0b11, 0b01};
    std::vector<CosetCandidate> cands;
    int id = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        std::array<CellState, 4> image{};
        image[order[a]] = CellState::S1;
        image[order[b]] = CellState::S2;
        int next = 2;
        for (int r = 0; r < 4; ++r)
          if (r != a && r != b) image[order[r]] = state_from_index(next++);
        cands.emplace_back(id++, image);
      }
    }
    using S = CellState;
    std::vector<AuxAssignment> aux{{S::S1, S::S1}, {S::S1, S::S2}, {S::S2, S::S1},
                                   {S::S2, S::S2}, {S::S1, S::S3}, {S::S3, S::S1}};
    return CandidateTable("6cosets", std::move(cands), std::move(aux));
  }();
  return table;
}

const std::vector<MemoryLine>& default_xor_masks() {
  static const std::vector<MemoryLine> masks = [] {
    std::mt19937_64 rng(kXorMaskSeed);
    std::vector<MemoryLine> m(16);
    for (std::size_t i = 1; i < m.size(); ++i)
      for (int w = 0; w < kLineWords; ++w) m[i].set_word(w, rng());
    return m;
  }();
  return masks;
}

WordLayout wlc_word_layout(const SchemeConfig& cfg) {
  WordLayout layout;
  layout.k = cfg.effective_k();
  layout.granularity = cfg.scheme == Scheme::WlcOnly ? 64 : cfg.granularity;
  const int reclaimed = layout.k - 1;
  layout.aux_cells = (reclaimed + 1) / 2;

  const int g = layout.granularity;
  for (int hi_bit = 63; hi_bit >= 0; hi_bit -= g) {
    // Block covers bits [hi_bit - g + 1, hi_bit]; its cells are those whose
    // high bit falls in the block, minus the auxiliary cells.
    const int first = std::max((63 - hi_bit) / 2, layout.aux_cells);
    const int end = (63 - (hi_bit - g + 1)) / 2 + 1;
    if (end > first) layout.blocks.push_back({first, end - first});
  }

  int per_block = 0;
  int extra = 0;
  switch (cfg.scheme) {
    case Scheme::Wlcrc: per_block = 1; extra = 1; break;
    case Scheme::WlcFourCosets: per_block = CandidateTable::four_cosets().index_bits(); break;
    case Scheme::WlcThreeCosets: per_block = CandidateTable::three_cosets().index_bits(); break;
    case Scheme::WlcOnly: per_block = 0; break;
    default: throw std::logic_error("wlc_word_layout: not a WLC scheme");
  }
  layout.aux_bits = extra + per_block * static_cast<int>(layout.blocks.size());
  if (layout.aux_bits > reclaimed)
    throw std::invalid_argument(cfg.name() + ": k=" + std::to_string(layout.k) + " reclaims " +
                                std::to_string(reclaimed) + " bits per word but the encoding needs " +
                                std::to_string(layout.aux_bits));
  return layout;
}

namespace detail {

void require_shape(const EncodedLine& old, std::size_t aux, bool flag, const char* scheme) {
  if (old.aux_count != aux || old.has_flag != flag || old.cells.size() != kLineCells + aux + (flag ? 1 : 0))
    throw std::invalid_argument(std::string(scheme) + ": previous line has the wrong cell layout");
}

void pack_bits_c1(std::span<const std::uint8_t> bits, std::span<CellState> cells) {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::uint8_t hi = 2 * c < bits.size() ? bits[2 * c] & 1 : 0;
    const std::uint8_t lo = 2 * c + 1 < bits.size() ? bits[2 * c + 1] & 1 : 0;
    cells[c] = default_map(static_cast<Symbol>((hi << 1) | lo));
  }
}

std::vector<std::uint8_t> unpack_bits_c1(std::span<const CellState> cells, std::size_t nbits) {
  std::vector<std::uint8_t> bits(nbits);
  const auto& c1 = candidate_c1();
  for (std::size_t i = 0; i < nbits; ++i) {
    const Symbol s = c1.unmap(cells[i / 2]);
    bits[i] = (i % 2 == 0) ? (s >> 1) & 1 : s & 1;
  }
  return bits;
}

void check_granularity_divides_line(int granularity, const char* scheme) {
  if (granularity < 2 || granularity > kLineBits || kLineBits % granularity != 0 || granularity % 2 != 0)
    throw std::invalid_argument(std::string(scheme) + ": granularity must be an even divisor of 512");
}

}  // namespace detail

}  // namespace pcmenc
