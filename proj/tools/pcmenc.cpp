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
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pcmenc/codecs.hpp"
#include "pcmenc/harness.hpp"
#include "pcmenc/memsim.hpp"
#include "pcmenc/wlc.hpp"
#include "pcmenc/workloads.hpp"

using namespace pcmenc;

namespace {

struct SchemeFlags {
  std::string scheme = "wlcrc-16";
  std::optional<int> granularity;
  std::optional<int> k;
  std::optional<double> threshold;
  double energy_scale = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--scheme", scheme, "Encoding scheme, e.g. baseline, fnw, wlcrc-16, 6cosets-32");
    app->add_option("--granularity", granularity, "Block width in bits");
    app->add_option("--k", k, "WLC uniform-prefix length");
    app->add_option("--threshold-t", threshold, "Multi-objective threshold for wlcrc");
    app->add_option("--energy-scale", energy_scale, "Scale of the S3/S4 SET energy")->check(CLI::PositiveNumber);
  }

  SchemeConfig config() const {
    SchemeConfig cfg = SchemeConfig::parse(scheme);
    if (granularity) cfg.granularity = *granularity;
    if (k) cfg.k = *k;
    if (threshold) cfg.threshold = *threshold;
    cfg.validate();
    return cfg;
  }
};

struct GenFlags {
  std::string kind = "biased";
  double p = GeneratorSpec{}.word_bias;
  double zero_density = GeneratorSpec{}.zero_density;
  double negative = GeneratorSpec{}.negative_fraction;
  int magnitude_bits = GeneratorSpec{}.magnitude_bits;
  double locality = GeneratorSpec{}.rewrite_locality;
  double retain = GeneratorSpec{}.word_retain;
  std::uint64_t address_space = GeneratorSpec{}.address_space;
  std::uint64_t lines = GeneratorSpec{}.lines;

  void add_to(CLI::App* app) {
    app->add_option("--kind", kind, "Workload kind: uniform or biased");
    app->add_option("--p", p, "Probability that a word is a sign-extended small integer");
    app->add_option("--zero-density", zero_density, "Probability that a small-integer word is zero");
    app->add_option("--negative", negative, "Probability that a nonzero small integer is negative");
    app->add_option("--magnitude-bits", magnitude_bits, "Small integers stay below 2^N");
    app->add_option("--locality", locality, "Probability of rewriting a recent address");
    app->add_option("--retain", retain, "Per-word probability of keeping the old value on a rewrite");
    app->add_option("--address-space", address_space, "Number of distinct line addresses");
    app->add_option("--lines", lines, "Number of writes");
  }

  GeneratorSpec spec(std::uint64_t seed) const {
    GeneratorSpec g;
    g.kind = parse_workload_kind(kind);
    g.word_bias = p;
    g.zero_density = zero_density;
    g.negative_fraction = negative;
    g.magnitude_bits = magnitude_bits;
    g.rewrite_locality = locality;
    g.word_retain = retain;
    g.address_space = address_space;
    g.lines = lines;
    g.seed = seed;
    g.validate();
    return g;
  }
};

char state_digit(CellState s) { return static_cast<char>('1' + static_cast<int>(s)); }

std::string format_cells(const EncodedLine& enc) {
  std::string out = "data=";
  for (CellState s : enc.data()) out += state_digit(s);
  out += " aux=";
  for (CellState s : enc.aux()) out += state_digit(s);
  out += " flag=";
  if (enc.has_flag) out += state_digit(*enc.flag());
  return out;
}

std::vector<CellState> parse_digits(std::string_view digits, const char* field) {
  std::vector<CellState> out;
  for (char c : digits) {
    if (c < '1' || c > '4')
      throw std::invalid_argument(std::string(field) + ": cell states must be digits 1-4, got '" + c + "'");
    out.push_back(static_cast<CellState>(c - '1'));
  }
  return out;
}

EncodedLine parse_cells(const std::string& text) {
  std::istringstream ss(text);
  std::map<std::string, std::string> fields;
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + tok + "'");
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (!fields.count("data")) throw std::invalid_argument("encoded line lacks data=");
  const auto data = parse_digits(fields["data"], "data");
  if (data.size() != kLineCells)
    throw std::invalid_argument("data= must hold " + std::to_string(kLineCells) + " cells, got " +
                                std::to_string(data.size()));
  const auto aux = parse_digits(fields["aux"], "aux");
  const auto flag = parse_digits(fields["flag"], "flag");
  if (flag.size() > 1) throw std::invalid_argument("flag= holds at most one cell");
  EncodedLine enc(aux.size(), !flag.empty());
  std::copy(data.begin(), data.end(), enc.cells.begin());
  std::copy(aux.begin(), aux.end(), enc.cells.begin() + kLineCells);
  if (!flag.empty()) enc.set_flag(flag[0]);
  return enc;
}

std::vector<std::string> inputs_or_stdin(const std::vector<std::string>& given) {
  if (!given.empty()) return given;
  std::vector<std::string> out;
  std::string line;
  while (std::getline(std::cin, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Settings {
  ModelConfig model;
  std::string config_path;
};

// Config file keys other than the model parameters name long options of the
// chosen subcommand; they are injected only where the command line does not
// already set that option.
std::vector<std::string> apply_config(const std::vector<std::string>& args, const CLI::App& app, Settings& st) {
  std::vector<std::string> out = args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return out;
  st.config_path = path;
  st.model = load_model_config(path);

  const CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && !sub; ++i)
    for (const auto* s : app.get_subcommands({}))
      if (s->get_name() == args[i]) sub = s;
  if (!sub) return out;

  for (const auto& [key, value] : st.model.other) {
    const std::string flag = "--" + key;
    bool known_anywhere = false;
    for (const auto* s : app.get_subcommands({})) known_anywhere |= s->get_option_no_throw(flag) != nullptr;
    if (!known_anywhere) throw std::invalid_argument(path + ": unknown key '" + key + "'");
    if (!sub->get_option_no_throw(flag)) continue;
    const bool on_cmdline = std::any_of(args.begin() + 1, args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
    if (on_cmdline) continue;
    out.push_back(flag);
    out.push_back(value);
  }
  return out;
}

void print_effective(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) os << "# " << k << '=' << v << '\n';
}

std::vector<std::pair<std::string, std::string>> model_provenance(const EnergyModel& e, const DisturbanceModel& d) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("reset_pj", fmt(e.reset_pj()));
  for (int s = 0; s < 4; ++s) kv.emplace_back("set_s" + std::to_string(s + 1) + "_pj", fmt(e.set_pj_unscaled()[s]));
  kv.emplace_back("energy_scale", fmt(e.scale_high()));
  for (int s = 0; s < 4; ++s) kv.emplace_back("der_s" + std::to_string(s + 1), fmt(d.rates()[s]));
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level-cell PCM write encoding simulator"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file; flags take precedence");

  SchemeFlags enc_flags;
  std::vector<std::string> enc_values;
  std::string enc_old_hex, enc_old_cells;
  auto* enc_cmd = app.add_subcommand("encode", "Encode 512-bit lines (128 hex digits) into cell states");
  enc_flags.add_to(enc_cmd);
  enc_cmd->add_option("--old", enc_old_hex, "Previously stored value, encoded from the initial state first");
  enc_cmd->add_option("--old-cells", enc_old_cells, "Previously stored cells in encode output form");
  enc_cmd->add_option("values", enc_values, "Hex lines; read from stdin when absent");

  SchemeFlags dec_flags;
  std::vector<std::string> dec_values;
  auto* dec_cmd = app.add_subcommand("decode", "Decode cell states printed by encode back to hex");
  dec_flags.add_to(dec_cmd);
  dec_cmd->add_option("cells", dec_values, "Encoded lines; read from stdin when absent");

  GenFlags gen_flags;
  std::uint64_t gen_seed = 1;
  std::string gen_out, gen_format = "bin";
  bool gen_old = false;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic trace");
  gen_flags.add_to(gen_cmd);
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--out", gen_out, "Output trace path")->required();
  gen_cmd->add_option("--format", gen_format, "bin or text")->check(CLI::IsMember({"bin", "text"}));
  gen_cmd->add_flag("--emit-old", gen_old, "Store the overwritten value with each record");

  SchemeFlags run_flags;
  std::string run_trace_path;
  std::uint64_t run_seed = 1;
  auto* run_cmd = app.add_subcommand("run", "Replay a trace through one scheme and print the aggregate");
  run_flags.add_to(run_cmd);
  run_cmd->add_option("--trace", run_trace_path, "Trace file (binary or text)")->required();
  run_cmd->add_option("--seed", run_seed, "Disturbance sampling seed");

  std::vector<std::string> sw_schemes{"baseline", "wlcrc-16"};
  std::vector<int> sw_gran, sw_k;
  std::vector<double> sw_scales{1.0};
  double sw_threshold = 0.0;
  std::uint64_t sw_seed = 1;
  std::string sw_trace, sw_out, sw_format = "csv";
  bool sw_serial = false, sw_provenance = false;
  GenFlags sw_gen;
  auto* sw_cmd = app.add_subcommand("sweep", "Run a scheme x granularity x energy-scale grid");
  sw_cmd->add_option("--scheme", sw_schemes, "Schemes (comma separated or repeated)")->delimiter(',');
  sw_cmd->add_option("--granularity", sw_gran, "Granularities for schemes given without one")->delimiter(',');
  sw_cmd->add_option("--k", sw_k, "Extra compression-only rows, one per k")->delimiter(',');
  sw_cmd->add_option("--energy-scale", sw_scales, "S3/S4 SET energy scales")->delimiter(',');
  sw_cmd->add_option("--threshold-t", sw_threshold, "Multi-objective threshold for wlcrc entries");
  sw_cmd->add_option("--seed", sw_seed, "Workload and disturbance seed");
  sw_cmd->add_option("--trace", sw_trace, "Use a trace file instead of a generated workload");
  sw_cmd->add_option("--out", sw_out, "Report path; stdout when absent");
  sw_cmd->add_option("--format", sw_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sw_cmd->add_flag("--serial", sw_serial, "Run grid cells one after another");
  sw_cmd->add_flag("--provenance", sw_provenance, "Prefix CSV output with the effective configuration");
  sw_gen.add_to(sw_cmd);

  std::string insp_trace;
  auto* insp_cmd = app.add_subcommand("inspect", "Print a trace header and its WLC compressibility histogram");
  insp_cmd->add_option("--trace", insp_trace, "Trace file")->required();

  Settings st;
  try {
    std::vector<std::string> args(argv, argv + argc);
    args = apply_config(args, app, st);
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (enc_cmd->parsed() || dec_cmd->parsed()) {
      const bool encoding = enc_cmd->parsed();
      const SchemeFlags& f = encoding ? enc_flags : dec_flags;
      const Codec codec(f.config(), st.model.energy.with_scale(f.energy_scale));
      if (encoding) {
        EncodedLine old = codec.initial_state();
        if (!enc_old_cells.empty()) old = parse_cells(enc_old_cells);
        else if (!enc_old_hex.empty()) old = codec.encode(MemoryLine::from_hex(enc_old_hex), old);
        for (const auto& v : inputs_or_stdin(enc_values)) {
          const EncodedLine enc = codec.encode(MemoryLine::from_hex(v), old);
          std::cout << format_cells(enc) << '\n';
        }
      } else {
        for (const auto& v : inputs_or_stdin(dec_values)) std::cout << codec.decode(parse_cells(v)).to_hex() << '\n';
      }
    } else if (gen_cmd->parsed()) {
      GeneratorSpec g = gen_flags.spec(gen_seed);
      g.emit_old = gen_old;
      TraceGenerator src(g);
      if (gen_format == "text") write_text_trace(gen_out, src);
      else write_trace(gen_out, src, gen_old);
    } else if (run_cmd->parsed()) {
      const SchemeConfig cfg = run_flags.config();
      const EnergyModel energy = st.model.energy.with_scale(run_flags.energy_scale);
      MemsimOptions opts;
      opts.seed = run_seed;
      MemoryArray arr(Codec(cfg, energy), st.model.disturbance, opts);
      auto src = open_trace(run_trace_path);
      const Aggregate agg = run_trace(arr, *src);

      auto kv = model_provenance(energy, st.model.disturbance);
      kv.insert(kv.begin(), {{"scheme", cfg.name()}, {"trace", run_trace_path}, {"seed", std::to_string(run_seed)}});
      if (!st.config_path.empty()) kv.emplace_back("config", st.config_path);
      print_effective(std::cout, kv);
      std::cout << "writes=" << agg.writes << '\n'
                << "total_pj=" << fmt(agg.total.total().pj()) << '\n'
                << "avg_total_pj=" << fmt(agg.avg_total_pj()) << '\n'
                << "avg_data_pj=" << fmt(agg.avg_data_pj()) << '\n'
                << "avg_aux_pj=" << fmt(agg.avg_aux_pj()) << '\n'
                << "avg_flag_pj=" << fmt(agg.avg_flag_pj()) << '\n'
                << "avg_updated_cells=" << fmt(agg.avg_updated_cells()) << '\n'
                << "avg_disturb_expected=" << fmt(agg.avg_disturb_expected()) << '\n'
                << "avg_disturb_sampled=" << fmt(agg.avg_disturb_sampled()) << '\n'
                << "compression_rate=" << fmt(agg.compression_rate()) << '\n'
                << "old_mismatches=" << agg.old_mismatches << '\n';
    } else if (sw_cmd->parsed()) {
      SweepSpec spec;
      spec.schemes = sw_schemes;
      spec.granularities = sw_gran;
      spec.k_sweep = sw_k;
      spec.energy_scales = sw_scales;
      spec.threshold = sw_threshold;
      spec.seed = sw_seed;
      spec.workload = sw_gen.spec(sw_seed);
      if (!sw_trace.empty()) spec.trace = sw_trace;
      spec.energy = st.model.energy;
      spec.disturbance = st.model.disturbance;
      spec.parallel = !sw_serial;
      SweepReport rep = run_sweep(spec);
      std::string schemes;
      for (const auto& s : sw_schemes) schemes += (schemes.empty() ? "" : ";") + s;
      rep.provenance.insert(rep.provenance.begin(), {"schemes", schemes});
      if (!st.config_path.empty()) rep.provenance.emplace_back("config", st.config_path);
      const auto format = parse_report_format(sw_format);
      if (sw_out.empty()) {
        std::cout << (format == ReportFormat::Csv ? to_csv(rep, sw_provenance) : to_json(rep));
      } else {
        emit_report(rep, format, sw_out, sw_provenance);
        print_effective(std::cerr, rep.provenance);
      }
    } else if (insp_cmd->parsed()) {
      auto src = open_trace(insp_trace);
      if (const auto* bin = dynamic_cast<const TraceReader*>(src.get())) {
        const auto& h = bin->header();
        std::cout << "format=binary version=" << h.version << " has_old=" << (h.has_old() ? 1 : 0)
                  << " records=" << h.count << '\n';
      } else {
        std::cout << "format=text\n";
      }
      std::map<int, std::uint64_t> hist;
      std::uint64_t n = 0;
      WriteRecord rec;
      while (src->next(rec)) {
        ++hist[wlc::line_uniform_prefix(rec.value)];
        ++n;
      }
      std::cout << "lines=" << n << '\n' << "# max uniform prefix histogram\nprefix,lines\n";
      for (const auto& [p, c] : hist) std::cout << p << ',' << c << '\n';
      std::cout << "# lines compressible at k\nk,lines,fraction\n";
      for (int k = 2; k <= 17; ++k) {
        std::uint64_t c = 0;
        for (const auto& [p, cnt] : hist)
          if (p >= k) c += cnt;
        std::cout << k << ',' << c << ',' << fmt(n ? static_cast<double>(c) / static_cast<double>(n) : 0.0) << '\n';
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto* s : app.get_subcommands()) std::cerr << s->help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
