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

#include "pcmenc/core_model.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pcmenc {

std::string_view to_string(CellState s) noexcept {
  static constexpr std::array<std::string_view, 4> names{"S1", "S2", "S3", "S4"};
  return names[index(s)];
}

CellState parse_state(std::string_view text) {
  if (text.size() == 2 && (text[0] == 'S' || text[0] == 's')) text.remove_prefix(1);
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '4') return state_from_index(text[0] - '1');
  throw std::invalid_argument("invalid cell state '" + std::string(text) + "'");
}

std::ostream& operator<<(std::ostream& os, CellState s) { return os << to_string(s); }

Energy Energy::from_pj(double pj) { return Energy{std::llround(pj * 100.0)}; }

std::ostream& operator<<(std::ostream& os, Energy e) { return os << e.pj() << " pJ"; }

EnergyModel::EnergyModel() : EnergyModel(36.0, {0.0, 20.0, 307.0, 547.0}, 1.0) {}

EnergyModel::EnergyModel(double reset_pj, std::array<double, kStateCount> set_pj, double scale_high)
    : reset_pj_(reset_pj), set_pj_(set_pj), scale_high_(scale_high) {
  auto bad = [](double v) { return !std::isfinite(v) || v < 0.0 || v > kMaxPj; };
  if (bad(reset_pj) || !std::isfinite(scale_high) || scale_high < 0.0)
    throw std::invalid_argument("energy model: RESET energy and scale must be finite and >= 0");
  reset_ = Energy::from_pj(reset_pj);
  for (int s = 0; s < kStateCount; ++s) {
    const double v = s >= 2 ? set_pj[s] * scale_high : set_pj[s];
    if (bad(v)) throw std::invalid_argument("energy model: SET energies must lie in [0, 1e5] pJ");
    set_[s] = Energy::from_pj(v);
  }
  for (int s = 1; s < kStateCount; ++s)
    if (set_[s] < set_[s - 1])
      throw std::invalid_argument("energy model: SET energies must be nondecreasing S1..S4");
}

EnergyModel EnergyModel::with_scale(double scale_high) const {
  return EnergyModel(reset_pj_, set_pj_, scale_high);
}

std::array<std::int32_t, kStateCount> EnergyModel::write_lut() const noexcept {
  std::array<std::int32_t, kStateCount> lut{};
  for (int s = 0; s < kStateCount; ++s)
    lut[s] = static_cast<std::int32_t>(write_into(state_from_index(s)).centi());
  return lut;
}

Energy cell_write_energy(CellState old_state, CellState new_state, const EnergyModel& model) noexcept {
  if (old_state == new_state) return Energy{};
  return model.write_into(new_state);
}

DisturbanceModel::DisturbanceModel() : rates_{0.123, 0.0, 0.276, 0.152} {}

DisturbanceModel::DisturbanceModel(std::array<double, kStateCount> rates) : rates_(rates) {
  for (double r : rates_)
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("disturbance rate outside [0,1]");
  // The lowest-resistance state cannot be pushed lower by RESET heat.
  if (rates_[index(CellState::S2)] != 0.0)
    throw std::invalid_argument("disturbance rate of S2 must be 0");
}

CosetCandidate::CosetCandidate(int id, std::array<CellState, kSymbolCount> image)
    : id_(id), image_(image), inverse_{} {
  std::array<bool, kStateCount> hit{};
  for (Symbol sym = 0; sym < kSymbolCount; ++sym) {
    const int s = index(image[sym]);
    if (s < 0 || s >= kStateCount || hit[s])
      throw std::invalid_argument("coset candidate is not a permutation of S1..S4");
    hit[s] = true;
    inverse_[s] = sym;
  }
}

std::array<std::uint8_t, kSymbolCount> CosetCandidate::lut() const noexcept {
  std::array<std::uint8_t, kSymbolCount> out{};
  for (int i = 0; i < kSymbolCount; ++i) out[i] = static_cast<std::uint8_t>(index(image_[i]));
  return out;
}

namespace {

using S = CellState;

// Images are indexed by symbol value: 00, 01, 10, 11.
const std::array<CosetCandidate, 4> kBuiltin{
    CosetCandidate(1, {S::S1, S::S4, S::S2, S::S3}),  // 00 10 11 01 -> S1 S2 S3 S4
    CosetCandidate(2, {S::S2, S::S4, S::S3, S::S1}),  // 11 00 10 01
    CosetCandidate(3, {S::S3, S::S2, S::S4, S::S1}),  // 11 01 00 10
    CosetCandidate(4, {S::S2, S::S3, S::S4, S::S1}),  // 11 00 01 10
};

}  // namespace

const std::array<CosetCandidate, 4>& builtin_candidates() { return kBuiltin; }
const CosetCandidate& candidate_c1() { return kBuiltin[0]; }

CellState default_map(Symbol s) noexcept { return kBuiltin[0].map(s); }

void apply_coset(const CosetCandidate& c, std::span<const Symbol> symbols, std::span<CellState> out) {
  if (out.size() != symbols.size()) throw std::invalid_argument("apply_coset: size mismatch");
  std::transform(symbols.begin(), symbols.end(), out.begin(), [&](Symbol s) { return c.map(s); });
}

std::vector<CellState> apply_coset(const CosetCandidate& c, std::span<const Symbol> symbols) {
  std::vector<CellState> out(symbols.size());
  apply_coset(c, symbols, out);
  return out;
}

void invert_coset(const CosetCandidate& c, std::span<const CellState> states, std::span<Symbol> out) {
  if (out.size() != states.size()) throw std::invalid_argument("invert_coset: size mismatch");
  std::transform(states.begin(), states.end(), out.begin(), [&](CellState s) { return c.unmap(s); });
}

std::vector<Symbol> invert_coset(const CosetCandidate& c, std::span<const CellState> states) {
  std::vector<Symbol> out(states.size());
  invert_coset(c, states, out);
  return out;
}

CandidateTable::CandidateTable(std::string name, std::vector<CosetCandidate> candidates,
                               std::vector<AuxAssignment> aux_states)
    : name_(std::move(name)), candidates_(std::move(candidates)), aux_(std::move(aux_states)) {
  if (candidates_.empty()) throw std::invalid_argument("candidate table is empty");
  if (aux_.size() != candidates_.size())
    throw std::invalid_argument("candidate table: one aux assignment per candidate required");
  for (std::size_t i = 0; i < aux_.size(); ++i) {
    if (aux_[i].size() != aux_.front().size())
      throw std::invalid_argument("candidate table: aux assignments differ in width");
    for (std::size_t j = 0; j < i; ++j)
      if (aux_[i] == aux_[j]) throw std::invalid_argument("candidate table: duplicate aux assignment");
  }
}

const CandidateTable& CandidateTable::four_cosets() {
  static const CandidateTable t("4cosets", {kBuiltin[0], kBuiltin[1], kBuiltin[2], kBuiltin[3]},
                                {{S::S1}, {S::S2}, {S::S3}, {S::S4}});
  return t;
}

const CandidateTable& CandidateTable::three_cosets() {
  static const CandidateTable t("3cosets", {kBuiltin[0], kBuiltin[1], kBuiltin[2]},
                                {{S::S1}, {S::S2}, {S::S3}});
  return t;
}

const CandidateTable& CandidateTable::identity() {
  static const CandidateTable t("identity", {kBuiltin[0]}, {{S::S1}});
  return t;
}

int CandidateTable::find_aux(std::span<const CellState> cells) const noexcept {
  for (std::size_t i = 0; i < aux_.size(); ++i)
    if (std::equal(aux_[i].begin(), aux_[i].end(), cells.begin(), cells.end()))
      return static_cast<int>(i);
  return -1;
}

int CandidateTable::index_bits() const noexcept {
  return static_cast<int>(std::bit_width(candidates_.size() - 1));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string str(v);
    const double d = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + std::string(key) + "' expects a number, got '" +
                                std::string(v) + "'");
  }
}

}  // namespace

ModelConfig parse_model_config(std::string_view text) {
  const EnergyModel defaults_e;
  const DisturbanceModel defaults_d;
  double reset = defaults_e.reset_pj();
  auto set = defaults_e.set_pj_unscaled();
  double scale = 1.0;
  auto der = defaults_d.rates();
  std::vector<std::pair<std::string, std::string>> other;

  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto val = trim(line.substr(eq + 1));
    if (key == "reset_pj") {
      reset = to_double(key, val);
    } else if (key == "scale_high") {
      scale = to_double(key, val);
    } else if (key.size() == 9 && key.starts_with("set_s") && key.ends_with("_pj") && key[5] >= '1' &&
               key[5] <= '4') {
      set[key[5] - '1'] = to_double(key, val);
    } else if (key.size() == 6 && key.starts_with("der_s") && key[5] >= '1' && key[5] <= '4') {
      der[key[5] - '1'] = to_double(key, val);
    } else {
      other.emplace_back(std::string(key), std::string(val));
    }
  }
  return ModelConfig{EnergyModel(reset, set, scale), DisturbanceModel(der), std::move(other)};
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_config(ss.str());
}

}  // namespace pcmenc
