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
#include <unordered_map>

#include "pcmenc/codecs.hpp"
#include "pcmenc/line.hpp"
#include "pcmenc/metrics.hpp"

namespace pcmenc {

/// One line write. `address` is line-granular.
struct WriteRecord {
  std::uint64_t address = 0;
  MemoryLine value;
  std::optional<MemoryLine> old;

  friend bool operator==(const WriteRecord&, const WriteRecord&) = default;
};

/// Pull-style stream of write records.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  /// Fills `rec` and returns true, or returns false at end of stream.
  virtual bool next(WriteRecord& rec) = 0;
};

struct Aggregate {
  std::uint64_t writes = 0;
  CostBreakdown total;
  std::uint64_t updated_cells = 0;
  double disturb_expected = 0.0;
  std::uint64_t disturb_sampled = 0;
  std::uint64_t compressed = 0;
  std::uint64_t uncompressed = 0;
  std::uint64_t old_mismatches = 0;

  void add(const WriteReport& r);

  double avg_total_pj() const noexcept { return per_write(total.total().pj()); }
  double avg_data_pj() const noexcept { return per_write(total.data.pj()); }
  double avg_aux_pj() const noexcept { return per_write(total.aux.pj()); }
  double avg_flag_pj() const noexcept { return per_write(total.flag.pj()); }
  double avg_updated_cells() const noexcept { return per_write(static_cast<double>(updated_cells)); }
  double avg_disturb_expected() const noexcept { return per_write(disturb_expected); }
  double avg_disturb_sampled() const noexcept { return per_write(static_cast<double>(disturb_sampled)); }
  /// Fraction of writes stored compressed; 0 for schemes without WLC.
  double compression_rate() const noexcept { return per_write(static_cast<double>(compressed)); }

 private:
  double per_write(double v) const noexcept { return writes ? v / static_cast<double>(writes) : 0.0; }
};

struct MemsimOptions {
  /// Seed for sampled disturbance; each write derives its own stream from
  /// (seed, address, per-address write index).
  std::uint64_t seed = 1;
  bool sample_disturbance = true;
  /// Value every untracked address is assumed to hold. The all-zero line
  /// maps to all-S1 cells under every scheme.
  MemoryLine initial_value;
};

class MemoryArray {
 public:
  explicit MemoryArray(Codec codec, DisturbanceModel disturbance = DisturbanceModel(), MemsimOptions opts = {});

  /// Differential write of `rec.value`. An untracked address is first seeded
  /// from `rec.old` when present (free of charge). When `rec.old` disagrees
  /// with a tracked value, the tracked state is kept and the mismatch is
  /// counted.
  WriteReport apply_write(const WriteRecord& rec);

  /// Decoded content of `address`; the initial value when untracked.
  MemoryLine read(std::uint64_t address) const;
  const EncodedLine* stored(std::uint64_t address) const;

  const Codec& codec() const noexcept { return codec_; }
  const Aggregate& totals() const noexcept { return totals_; }
  std::size_t tracked_lines() const noexcept { return lines_.size(); }

 private:
  struct Slot {
    EncodedLine cells;
    std::uint64_t writes = 0;
  };

  Codec codec_;
  DisturbanceModel disturbance_;
  MemsimOptions opts_;
  EncodedLine initial_;
  std::unordered_map<std::uint64_t, Slot> lines_;
  Aggregate totals_;
};

/// Applies every record of `src` in order. Errors from the source or the
/// codec are rethrown as std::runtime_error naming the record position.
Aggregate run_trace(MemoryArray& arr, RecordSource& src);

}  // namespace pcmenc
