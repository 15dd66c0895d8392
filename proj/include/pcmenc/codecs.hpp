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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcmenc/core_model.hpp"
#include "pcmenc/line.hpp"

namespace pcmenc {

/// Which part of the physical line a cell belongs to, for energy accounting.
enum class Region : std::uint8_t { Data, Aux, Flag };

/// Physical cell-state vector of one line: 256 data cells, then any
/// auxiliary cells, then the optional compressed/uncompressed flag cell.
///
/// For WLC-based schemes the auxiliary bits live inside the data cells (in
/// the reclaimed high bits of each word); see Codec::regions.
struct EncodedLine {
  std::vector<CellState> cells;
  std::uint16_t aux_count = 0;
  bool has_flag = false;

  EncodedLine() = default;
  EncodedLine(std::size_t aux, bool flag, CellState fill = CellState::S1)
      : cells(kLineCells + aux + (flag ? 1 : 0), fill), aux_count(static_cast<std::uint16_t>(aux)),
        has_flag(flag) {}

  std::span<CellState> data() { return std::span(cells).first(kLineCells); }
  std::span<const CellState> data() const { return std::span(cells).first(kLineCells); }
  std::span<CellState> aux() { return std::span(cells).subspan(kLineCells, aux_count); }
  std::span<const CellState> aux() const { return std::span(cells).subspan(kLineCells, aux_count); }
  std::optional<CellState> flag() const {
    return has_flag ? std::optional<CellState>(cells.back()) : std::nullopt;
  }
  void set_flag(CellState s) { cells.back() = s; }
  std::size_t size() const noexcept { return cells.size(); }

  /// Cell states as raw bytes (0..3), the form the kernels take.
  std::span<const std::uint8_t> bytes() const {
    return {reinterpret_cast<const std::uint8_t*>(cells.data()), cells.size()};
  }
  std::span<const std::uint8_t> data_bytes() const { return bytes().first(kLineCells); }

  friend bool operator==(const EncodedLine&, const EncodedLine&) = default;
};

/// Raised when stored cells cannot be decoded under the given scheme.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme {
  Baseline,
  Fnw,
  XorCoset,       // FlipMin-style XOR with 16 coset vectors
  SixCosets,
  FourCosets,
  ThreeCosets,
  RestrictedLine,  // 3-r-cosets: one {C1,C2}/{C1,C3} group per line
  Wlcrc,           // WLC + per-word restricted cosets (multi-objective when threshold > 0)
  WlcFourCosets,
  WlcThreeCosets,
  WlcOnly,         // WLC storage without coset encoding
};

std::string_view scheme_base_name(Scheme s) noexcept;

struct SchemeConfig {
  Scheme scheme = Scheme::Baseline;
  /// Block width in bits. Ignored by baseline and the XOR coset scheme.
  int granularity = 512;
  /// WLC k; defaults to the scheme's standard value when unset.
  std::optional<int> k;
  /// Multi-objective threshold T for WLCRC; 0 disables it.
  double threshold = 0.0;
  /// XOR coset vectors; empty selects the built-in set.
  std::vector<MemoryLine> masks;

  /// Parses "wlcrc-16", "6cosets", "3-r-cosets-16", "wlc+4cosets-32", ...
  /// A numeric suffix sets the granularity; otherwise the scheme default is
  /// used.
  static SchemeConfig parse(std::string_view name);
  static SchemeConfig make(Scheme s, std::optional<int> granularity = std::nullopt);

  bool uses_granularity() const noexcept;
  bool uses_wlc() const noexcept;
  int effective_k() const;
  /// Canonical name including granularity, e.g. "wlcrc-16".
  std::string name() const;
  /// Throws std::invalid_argument on an unsupported granularity, k or T.
  void validate() const;
};

/// Candidate table for the six-coset scheme: each unordered symbol pair is
/// sent to {S1,S2} (smaller default state first), the other two symbols keep
/// their default order on S3/S4; aux assignments are the six cheapest
/// two-cell state pairs.
const CandidateTable& six_cosets_table();

/// The built-in XOR coset vectors: 16 masks from a fixed-seed mt19937_64,
/// mask 0 forced to all zeros.
const std::vector<MemoryLine>& default_xor_masks();
inline constexpr std::uint64_t kXorMaskSeed = 0x5eedf11b1ee7c0deULL;

/// Cells of one 64-bit word under a WLC-based scheme. Cells that hold any
/// reclaimed bit are auxiliary and written with the default mapping; the
/// remaining cells are split into coset blocks at `granularity`-bit
/// boundaries counted from bit 0, most significant block first.
struct WordLayout {
  int k = 0;
  int granularity = 0;
  int aux_cells = 0;
  struct Block {
    int first_cell;
    int cell_count;
  };
  std::vector<Block> blocks;
  int aux_bits = 0;  // reclaimed bits that carry encoding information
};

/// Layout for a WLC scheme; throws if the reclaimed field is too small.
WordLayout wlc_word_layout(const SchemeConfig& cfg);

// --- Encoders. `old` must have the shape the scheme produces. ------------

EncodedLine encode_baseline(const MemoryLine& line);
EncodedLine encode_fnw(const MemoryLine& line, const EncodedLine& old, const EnergyModel& model,
                       int granularity = 128);
EncodedLine encode_xor_coset(const MemoryLine& line, const EncodedLine& old,
                             std::span<const MemoryLine> masks, const EnergyModel& model);
EncodedLine encode_6cosets(const MemoryLine& line, const EncodedLine& old, int granularity,
                           const EnergyModel& model);
EncodedLine encode_table_cosets(const MemoryLine& line, const EncodedLine& old, const CandidateTable& table,
                                int granularity, const EnergyModel& model);
EncodedLine encode_restricted_line(const MemoryLine& line, const EncodedLine& old, int granularity,
                                   const EnergyModel& model);
EncodedLine encode_wlcrc(const MemoryLine& line, const EncodedLine& old, int granularity,
                         const EnergyModel& model);
EncodedLine encode_multiobjective(const MemoryLine& line, const EncodedLine& old, int granularity,
                                  const EnergyModel& model, double threshold);
EncodedLine encode_wlc_unrestricted(const MemoryLine& line, const EncodedLine& old,
                                    const CandidateTable& table, int granularity, const EnergyModel& model);

/// Encodes with any configured scheme.
EncodedLine encode(const MemoryLine& line, const EncodedLine& old, const SchemeConfig& cfg,
                   const EnergyModel& model);
/// Inverse of encode. Throws DecodeError on malformed aux or flag cells.
MemoryLine decode(const EncodedLine& enc, const SchemeConfig& cfg);

/// Per-block committed candidate index (into the scheme's candidate list),
/// blocks in line order. For WLC schemes the list is empty when the line is
/// stored uncompressed. For the XOR scheme this is the mask index; for FNW
/// it is the flip bit per block.
std::vector<int> committed_candidates(const EncodedLine& enc, const SchemeConfig& cfg);
/// Group per word (WLCRC) or per line (3-r-cosets): 0 = {C1,C2}, 1 = {C1,C3}.
std::vector<int> committed_groups(const EncodedLine& enc, const SchemeConfig& cfg);

struct BestChoice {
  int index = -1;
  Energy cost;
};

/// Exhaustive search used as a test oracle: evaluates every candidate with
/// cell_write_energy and returns the cheapest, smallest index on ties.
BestChoice brute_force_best(std::span<const Symbol> block, std::span<const CellState> old,
                            std::span<const CosetCandidate> candidates, const EnergyModel& model);

/// A configured scheme plus energy model.
class Codec {
 public:
  explicit Codec(SchemeConfig cfg, EnergyModel model = EnergyModel());

  const SchemeConfig& config() const noexcept { return cfg_; }
  const EnergyModel& energy_model() const noexcept { return model_; }

  std::size_t aux_cells() const noexcept { return aux_cells_; }
  bool has_flag() const noexcept { return has_flag_; }
  std::size_t cells_per_line() const noexcept { return kLineCells + aux_cells_ + (has_flag_ ? 1 : 0); }

  /// State of a never-written address: every cell S1, which decodes to the
  /// all-zero line.
  EncodedLine initial_state() const;
  EncodedLine encode(const MemoryLine& line, const EncodedLine& old) const;
  MemoryLine decode(const EncodedLine& enc) const;
  /// Region label of every cell of `enc`.
  std::vector<Region> regions(const EncodedLine& enc) const;
  /// True when a WLC-based line is stored compressed.
  bool is_compressed(const EncodedLine& enc) const;

 private:
  SchemeConfig cfg_;
  EnergyModel model_;
  std::size_t aux_cells_ = 0;
  bool has_flag_ = false;
  std::optional<WordLayout> layout_;
};

}  // namespace pcmenc
