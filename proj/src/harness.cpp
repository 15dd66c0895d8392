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

#include "pcmenc/harness.hpp"

#include <charconv>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "pcmenc/memsim.hpp"

namespace pcmenc {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool has_granularity_suffix(const std::string& name) {
  const auto colon = name.find(':');
  const std::string base = name.substr(0, colon);
  const auto dash = base.rfind('-');
  return dash != std::string::npos && dash + 1 < base.size() &&
         base.find_first_not_of("0123456789", dash + 1) == std::string::npos;
}

}  // namespace

std::vector<GridCell> build_grid(const SweepSpec& spec) {
  if (spec.energy_scales.empty()) throw std::invalid_argument("sweep: no energy scales");
  std::vector<SchemeConfig> schemes;
  for (const auto& name : spec.schemes) {
    SchemeConfig base = SchemeConfig::parse(name);
    const bool explicit_threshold = name.find("t=") != std::string::npos;
    if (base.scheme == Scheme::Wlcrc && !explicit_threshold) base.threshold = spec.threshold;
    if (base.uses_granularity() && !has_granularity_suffix(name) && !spec.granularities.empty()) {
      for (int g : spec.granularities) {
        SchemeConfig c = base;
        c.granularity = g;
        c.validate();
        schemes.push_back(c);
      }
    } else {
      base.validate();
      schemes.push_back(base);
    }
  }
  for (int k : spec.k_sweep) {
    SchemeConfig c = SchemeConfig::make(Scheme::WlcOnly);
    c.k = k;
    c.validate();
    schemes.push_back(c);
  }
  std::vector<GridCell> grid;
  for (double s : spec.energy_scales)
    for (const auto& c : schemes) grid.push_back({c, s});
  return grid;
}

std::string workload_label(const SweepSpec& spec) {
  if (spec.trace) {
    const auto slash = spec.trace->find_last_of('/');
    return "trace:" + (slash == std::string::npos ? *spec.trace : spec.trace->substr(slash + 1));
  }
  if (spec.workload.kind == WorkloadKind::Uniform) return "uniform";
  return "biased(p=" + fmt_double(spec.workload.word_bias) + ")";
}

SweepRow run_cell(const SweepSpec& spec, const GridCell& cell) {
  MemsimOptions opts;
  opts.seed = spec.seed;
  opts.sample_disturbance = spec.sample_disturbance;
  MemoryArray arr(Codec(cell.scheme, spec.energy.with_scale(cell.energy_scale)), spec.disturbance, opts);

  Aggregate agg;
  if (spec.trace) {
    auto src = open_trace(*spec.trace);
    agg = run_trace(arr, *src);
  } else {
    GeneratorSpec g = spec.workload;
    g.seed = spec.seed;
    TraceGenerator src(g);
    agg = run_trace(arr, src);
  }

  SweepRow row;
  row.scheme = cell.scheme.name();
  row.granularity = cell.scheme.granularity;
  row.k = cell.scheme.uses_wlc() ? cell.scheme.effective_k() : 0;
  row.threshold = cell.scheme.threshold;
  row.energy_scale = cell.energy_scale;
  row.workload = workload_label(spec);
  row.writes = agg.writes;
  row.avg_data_pj = agg.avg_data_pj();
  row.avg_aux_pj = agg.avg_aux_pj();
  row.avg_flag_pj = agg.avg_flag_pj();
  row.avg_total_pj = row.avg_data_pj + row.avg_aux_pj + row.avg_flag_pj;
  row.avg_updated_cells = agg.avg_updated_cells();
  row.avg_disturb_expected = agg.avg_disturb_expected();
  row.avg_disturb_sampled = agg.avg_disturb_sampled();
  row.compression_rate = agg.compression_rate();
  return row;
}

SweepReport run_sweep(const SweepSpec& spec) {
  const auto grid = build_grid(spec);
  SweepReport report;
  report.rows.resize(grid.size());
  if (spec.parallel && grid.size() > 1) {
    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(grid.size());
    for (const auto& cell : grid) jobs.push_back(std::async(std::launch::async, run_cell, std::cref(spec), cell));
    for (std::size_t i = 0; i < grid.size(); ++i) report.rows[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) report.rows[i] = run_cell(spec, grid[i]);
  }

  auto& p = report.provenance;
  p.emplace_back("workload", workload_label(spec));
  if (!spec.trace) {
    p.emplace_back("lines", std::to_string(spec.workload.lines));
    p.emplace_back("word_bias", fmt_double(spec.workload.word_bias));
    p.emplace_back("zero_density", fmt_double(spec.workload.zero_density));
    p.emplace_back("negative_fraction", fmt_double(spec.workload.negative_fraction));
    p.emplace_back("magnitude_bits", std::to_string(spec.workload.magnitude_bits));
    p.emplace_back("rewrite_locality", fmt_double(spec.workload.rewrite_locality));
    p.emplace_back("word_retain", fmt_double(spec.workload.word_retain));
    p.emplace_back("address_space", std::to_string(spec.workload.address_space));
  }
  p.emplace_back("seed", std::to_string(spec.seed));
  p.emplace_back("reset_pj", fmt_double(spec.energy.reset_pj()));
  for (int s = 0; s < 4; ++s)
    p.emplace_back("set_s" + std::to_string(s + 1) + "_pj", fmt_double(spec.energy.set_pj_unscaled()[s]));
  for (int s = 0; s < 4; ++s)
    p.emplace_back("der_s" + std::to_string(s + 1), fmt_double(spec.disturbance.rates()[s]));
  return report;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + std::string(s) + "' (csv|json)");
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "scheme",       "granularity",     "k",           "threshold",         "energy_scale",
      "workload",     "writes",          "avg_total_pj", "avg_data_pj",      "avg_aux_pj",
      "avg_flag_pj",  "avg_updated_cells", "avg_disturb_expected", "avg_disturb_sampled", "compression_rate"};
  return cols;
}

std::string to_csv(const SweepReport& report, bool with_provenance) {
  std::ostringstream out;
  out << "# format_version=" << report.format_version << '\n';
  if (with_provenance)
    for (const auto& [k, v] : report.provenance) out << "# " << k << '=' << v << '\n';
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.scheme << ',' << r.granularity << ',' << r.k << ',' << fmt_double(r.threshold) << ','
        << fmt_double(r.energy_scale) << ',' << r.workload << ',' << r.writes << ',' << fmt_double(r.avg_total_pj)
        << ',' << fmt_double(r.avg_data_pj) << ',' << fmt_double(r.avg_aux_pj) << ',' << fmt_double(r.avg_flag_pj)
        << ',' << fmt_double(r.avg_updated_cells) << ',' << fmt_double(r.avg_disturb_expected) << ','
        << fmt_double(r.avg_disturb_sampled) << ',' << fmt_double(r.compression_rate) << '\n';
  }
  return out.str();
}

std::string to_json(const SweepReport& report) {
  nlohmann::ordered_json j;
  j["format_version"] = report.format_version;
  j["provenance"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.provenance) j["provenance"][k] = v;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"scheme", r.scheme},
                         {"granularity", r.granularity},
                         {"k", r.k},
                         {"threshold", r.threshold},
                         {"energy_scale", r.energy_scale},
                         {"workload", r.workload},
                         {"writes", r.writes},
                         {"avg_total_pj", r.avg_total_pj},
                         {"avg_data_pj", r.avg_data_pj},
                         {"avg_aux_pj", r.avg_aux_pj},
                         {"avg_flag_pj", r.avg_flag_pj},
                         {"avg_updated_cells", r.avg_updated_cells},
                         {"avg_disturb_expected", r.avg_disturb_expected},
                         {"avg_disturb_sampled", r.avg_disturb_sampled},
                         {"compression_rate", r.compression_rate}});
  }
  return j.dump(2) + "\n";
}

SweepReport report_from_json(std::string_view text) {
  const auto j = nlohmann::ordered_json::parse(text);
  SweepReport rep;
  rep.format_version = j.at("format_version").get<int>();
  if (rep.format_version != kReportFormatVersion)
    throw std::invalid_argument("report format version " + std::to_string(rep.format_version) + " unsupported");
  for (const auto& [k, v] : j.at("provenance").items()) rep.provenance.emplace_back(k, v.get<std::string>());
  for (const auto& r : j.at("rows")) {
    SweepRow row;
    row.scheme = r.at("scheme").get<std::string>();
    row.granularity = r.at("granularity").get<int>();
    row.k = r.at("k").get<int>();
    row.threshold = r.at("threshold").get<double>();
    row.energy_scale = r.at("energy_scale").get<double>();
    row.workload = r.at("workload").get<std::string>();
    row.writes = r.at("writes").get<std::uint64_t>();
    row.avg_total_pj = r.at("avg_total_pj").get<double>();
    row.avg_data_pj = r.at("avg_data_pj").get<double>();
    row.avg_aux_pj = r.at("avg_aux_pj").get<double>();
    row.avg_flag_pj = r.at("avg_flag_pj").get<double>();
    row.avg_updated_cells = r.at("avg_updated_cells").get<double>();
    row.avg_disturb_expected = r.at("avg_disturb_expected").get<double>();
    row.avg_disturb_sampled = r.at("avg_disturb_sampled").get<double>();
    row.compression_rate = r.at("compression_rate").get<double>();
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

void emit_report(const SweepReport& report, ReportFormat format, const std::string& path, bool with_provenance) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot write report");
  out << (format == ReportFormat::Csv ? to_csv(report, with_provenance) : to_json(report));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace pcmenc
