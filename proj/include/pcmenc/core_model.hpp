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

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcmenc {

/// Two-bit data pattern stored in one cell. The integer value is the bit
/// pattern itself: 00 -> 0, 01 -> 1, 10 -> 2, 11 -> 3.
using Symbol = std::uint8_t;
inline constexpr int kSymbolCount = 4;

/// Resistance state of a 4-level cell, numbered by write energy.
enum class CellState : std::uint8_t { S1 = 0, S2 = 1, S3 = 2, S4 = 3 };
inline constexpr int kStateCount = 4;

constexpr int index(CellState s) noexcept { return static_cast<int>(s); }
constexpr CellState state_from_index(int i) noexcept { return static_cast<CellState>(i); }
constexpr auto operator<=>(CellState a, CellState b) noexcept { return index(a) <=> index(b); }

std::string_view to_string(CellState s) noexcept;
/// Accepts "S1".."S4" or "1".."4".
CellState parse_state(std::string_view text);
std::ostream& operator<<(std::ostream& os, CellState s);

/// Fixed-point energy in hundredths of a picojoule. Integer arithmetic keeps
/// candidate comparisons exact.
class Energy {
 public:
  constexpr Energy() noexcept = default;
  static constexpr Energy from_centi(std::int64_t c) noexcept { return Energy{c}; }
  /// Rounds to the nearest 0.01 pJ.
  static Energy from_pj(double pj);

  constexpr std::int64_t centi() const noexcept { return centi_; }
  constexpr double pj() const noexcept { return static_cast<double>(centi_) / 100.0; }

  constexpr Energy& operator+=(Energy o) noexcept { centi_ += o.centi_; return *this; }
  constexpr Energy& operator-=(Energy o) noexcept { centi_ -= o.centi_; return *this; }
  friend constexpr Energy operator+(Energy a, Energy b) noexcept { return Energy{a.centi_ + b.centi_}; }
  friend constexpr Energy operator-(Energy a, Energy b) noexcept { return Energy{a.centi_ - b.centi_}; }
  friend constexpr Energy operator*(Energy a, std::int64_t n) noexcept { return Energy{a.centi_ * n}; }
  friend constexpr auto operator<=>(Energy, Energy) noexcept = default;

 private:
  constexpr explicit Energy(std::int64_t c) noexcept : centi_(c) {}
  std::int64_t centi_ = 0;
};

std::ostream& operator<<(std::ostream& os, Energy e);

/// Per-state programming cost under a single-RESET, multi-SET write. A cell
/// that does not change costs nothing (differential write); any other
/// transition pays the RESET pulse plus the SET cost of the target state.
class EnergyModel {
 public:
  static constexpr double kMaxPj = 100000.0;

  /// Defaults: RESET 36 pJ, SET 0/20/307/547 pJ for S1..S4.
  EnergyModel();
  /// `scale_high` multiplies only the SET component of S3 and S4.
  EnergyModel(double reset_pj, std::array<double, kStateCount> set_pj, double scale_high = 1.0);

  Energy reset() const noexcept { return reset_; }
  /// SET cost of `s` after scaling.
  Energy set(CellState s) const noexcept { return set_[index(s)]; }
  /// Full cost of programming a cell into `s`.
  Energy write_into(CellState s) const noexcept { return reset_ + set_[index(s)]; }
  double scale_high() const noexcept { return scale_high_; }
  double reset_pj() const noexcept { return reset_pj_; }
  const std::array<double, kStateCount>& set_pj_unscaled() const noexcept { return set_pj_; }

  /// Same base energies with a different S3/S4 scale.
  EnergyModel with_scale(double scale_high) const;

  /// Per-state write cost in centi-pJ, the form the cost kernels consume.
  std::array<std::int32_t, kStateCount> write_lut() const noexcept;

 private:
  double reset_pj_;
  std::array<double, kStateCount> set_pj_;
  double scale_high_;
  Energy reset_;
  std::array<Energy, kStateCount> set_;
};

Energy cell_write_energy(CellState old_state, CellState new_state, const EnergyModel& model) noexcept;

/// Probability that an idle cell in a given state is disturbed by one
/// neighbouring RESET.
class DisturbanceModel {
 public:
  /// Defaults: 0.123 / 0.0 / 0.276 / 0.152 for S1..S4.
  DisturbanceModel();
  /// Rejects rates outside [0,1] and any nonzero rate for S2.
  explicit DisturbanceModel(std::array<double, kStateCount> rates);

  double rate(CellState s) const noexcept { return rates_[index(s)]; }
  const std::array<double, kStateCount>& rates() const noexcept { return rates_; }

 private:
  std::array<double, kStateCount> rates_;
};

/// Bijective symbol -> state mapping (one column of the candidate table).
class CosetCandidate {
 public:
  /// `image[sym]` is the state that symbol `sym` is written as. Throws unless
  /// the image is a permutation of the four states.
  CosetCandidate(int id, std::array<CellState, kSymbolCount> image);

  int id() const noexcept { return id_; }
  CellState map(Symbol s) const noexcept { return image_[s & 3]; }
  Symbol unmap(CellState s) const noexcept { return inverse_[index(s)]; }
  const std::array<CellState, kSymbolCount>& image() const noexcept { return image_; }
  /// Raw byte LUT for the kernels.
  std::array<std::uint8_t, kSymbolCount> lut() const noexcept;

  friend bool operator==(const CosetCandidate& a, const CosetCandidate& b) noexcept {
    return a.image_ == b.image_;
  }

 private:
  int id_;
  std::array<CellState, kSymbolCount> image_;
  std::array<Symbol, kStateCount> inverse_;
};

/// Default mapping: 00->S1, 10->S2, 11->S3, 01->S4.
CellState default_map(Symbol s) noexcept;

void apply_coset(const CosetCandidate& c, std::span<const Symbol> symbols, std::span<CellState> out);
std::vector<CellState> apply_coset(const CosetCandidate& c, std::span<const Symbol> symbols);
void invert_coset(const CosetCandidate& c, std::span<const CellState> states, std::span<Symbol> out);
std::vector<Symbol> invert_coset(const CosetCandidate& c, std::span<const CellState> states);

/// The four low-energy-biased candidates C1..C4. Index 0 is C1.
const std::array<CosetCandidate, 4>& builtin_candidates();
const CosetCandidate& candidate_c1();

/// Auxiliary-cell assignment identifying a candidate: one or two states.
using AuxAssignment = std::vector<CellState>;

/// Ordered candidates plus the auxiliary-cell states that record each choice.
class CandidateTable {
 public:
  CandidateTable(std::string name, std::vector<CosetCandidate> candidates,
                 std::vector<AuxAssignment> aux_states);

  /// C1..C4 with single-cell aux states S1..S4.
  static const CandidateTable& four_cosets();
  /// C1..C3 with single-cell aux states S1..S3.
  static const CandidateTable& three_cosets();
  /// C1 alone; used for compression-only storage.
  static const CandidateTable& identity();

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return candidates_.size(); }
  const CosetCandidate& operator[](std::size_t i) const { return candidates_.at(i); }
  const std::vector<CosetCandidate>& candidates() const noexcept { return candidates_; }
  const std::vector<AuxAssignment>& aux_states() const noexcept { return aux_; }
  std::size_t aux_cells_per_choice() const noexcept { return aux_.empty() ? 0 : aux_.front().size(); }
  /// Candidate whose aux assignment equals `cells`, or -1.
  int find_aux(std::span<const CellState> cells) const noexcept;
  /// Bits needed to store a candidate index: ceil(log2(size)).
  int index_bits() const noexcept;

 private:
  std::string name_;
  std::vector<CosetCandidate> candidates_;
  std::vector<AuxAssignment> aux_;
};

/// Loads `key = value` pairs (`#` comments) into the two models. Recognised
/// keys: reset_pj, set_s1_pj..set_s4_pj, scale_high, der_s1..der_s4. Keys
/// not listed are returned to the caller untouched.
struct ModelConfig {
  EnergyModel energy;
  DisturbanceModel disturbance;
  std::vector<std::pair<std::string, std::string>> other;
};
ModelConfig load_model_config(const std::string& path);
ModelConfig parse_model_config(std::string_view text);

}  // namespace pcmenc
