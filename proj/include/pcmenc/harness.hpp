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
#include <string>
#include <vector>

#include "pcmenc/codecs.hpp"
#include "pcmenc/workloads.hpp"

namespace pcmenc {

inline constexpr int kReportFormatVersion = 1;

struct SweepSpec {
  /// Scheme names as accepted by SchemeConfig::parse. A name without a
  /// granularity suffix is expanded over `granularities` when the scheme
  /// takes one and the list is nonempty.
  std::vector<std::string> schemes;
  std::vector<int> granularities;
  /// Extra compression-only rows ("wlc:k=N"), one per k.
  std::vector<int> k_sweep;
  std::vector<double> energy_scales{1.0};
  /// Multi-objective threshold applied to WLCRC entries that do not set t=.
  double threshold = 0.0;
  GeneratorSpec workload;
  /// When set, the trace file replaces the generated workload.
  std::optional<std::string> trace;
  /// Seeds the generator and the disturbance sampler.
  std::uint64_t seed = 1;
  EnergyModel energy;
  DisturbanceModel disturbance;
  bool sample_disturbance = true;
  /// Run grid cells concurrently.
  bool parallel = true;
};

struct GridCell {
  SchemeConfig scheme;
  double energy_scale = 1.0;
};

struct SweepRow {
  std::string scheme;
  int granularity = 0;
  int k = 0;
  double threshold = 0.0;
  double energy_scale = 1.0;
  std::string workload;
  std::uint64_t writes = 0;
  double avg_total_pj = 0.0;
  double avg_data_pj = 0.0;
  double avg_aux_pj = 0.0;
  double avg_flag_pj = 0.0;
  double avg_updated_cells = 0.0;
  double avg_disturb_expected = 0.0;
  double avg_disturb_sampled = 0.0;
  double compression_rate = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepReport {
  int format_version = kReportFormatVersion;
  /// Effective configuration as key/value pairs, in insertion order.
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<SweepRow> rows;

  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Expands the spec into grid cells in report order: energy scales outer,
/// then schemes (each expanded over granularities), then the k sweep.
/// Throws std::invalid_argument on an invalid scheme/granularity pairing.
std::vector<GridCell> build_grid(const SweepSpec& spec);

std::string workload_label(const SweepSpec& spec);

/// Runs one grid cell from a fresh memory array.
SweepRow run_cell(const SweepSpec& spec, const GridCell& cell);

SweepReport run_sweep(const SweepSpec& spec);

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view s);

/// Stable column order. Floating values use the shortest representation
/// that reads back exactly, so CSV and JSON carry the same numbers.
std::string to_csv(const SweepReport& report, bool with_provenance = false);
std::string to_json(const SweepReport& report);
SweepReport report_from_json(std::string_view text);
void emit_report(const SweepReport& report, ReportFormat format, const std::string& path,
                 bool with_provenance = false);

const std::vector<std::string>& csv_columns();

}  // namespace pcmenc
