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

#include "pcmenc/workloads.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <sstream>

#include "pcmenc/wlc.hpp"

namespace pcmenc {

namespace {

constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kRecentWindow = 64;

void put_le(std::uint8_t* p, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_le(const std::uint8_t* p, int n) {
  std::uint64_t v = 0;
  for (int i = n - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

bool read_exact(std::istream& in, std::uint8_t* p, std::size_t n) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

}  // namespace

TraceReader::TraceReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw TraceError(path + ": cannot open trace");
  std::array<std::uint8_t, kHeaderBytes> h{};
  if (!read_exact(in_, h.data(), h.size())) throw TraceError(path + ": truncated trace header");
  if (std::memcmp(h.data(), kTraceMagic, 4) != 0) throw TraceError(path + ": bad magic, not a WLCT trace");
  header_.version = static_cast<std::uint16_t>(get_le(h.data() + 4, 2));
  header_.flags = static_cast<std::uint16_t>(get_le(h.data() + 6, 2));
  header_.count = get_le(h.data() + 8, 8);
  if (header_.version != kTraceVersion)
    throw TraceError(path + ": trace version " + std::to_string(header_.version) + " unsupported (expected " +
                     std::to_string(kTraceVersion) + ")");
  if (header_.flags & ~kTraceHasOld) throw TraceError(path + ": unknown trace flags");
}

bool TraceReader::next(WriteRecord& rec) {
  if (index_ >= header_.count) return false;
  std::array<std::uint8_t, 8 + 64 + 64> buf{};
  const std::size_t n = header_.has_old() ? buf.size() : 8 + 64;
  if (!read_exact(in_, buf.data(), n))
    throw TraceError("truncated trace record " + std::to_string(index_) + " of " + std::to_string(header_.count));
  rec.address = get_le(buf.data(), 8);
  rec.value = MemoryLine::from_bytes(std::span<const std::uint8_t, 64>(buf.data() + 8, 64));
  if (header_.has_old()) rec.old = MemoryLine::from_bytes(std::span<const std::uint8_t, 64>(buf.data() + 72, 64));
  else rec.old.reset();
  ++index_;
  return true;
}

TraceWriter::TraceWriter(const std::string& path, bool has_old)
    : out_(path, std::ios::binary | std::ios::trunc), has_old_(has_old) {
  if (!out_) throw TraceError(path + ": cannot create trace");
  std::array<std::uint8_t, kHeaderBytes> h{};
  std::memcpy(h.data(), kTraceMagic, 4);
  put_le(h.data() + 4, kTraceVersion, 2);
  put_le(h.data() + 6, has_old ? kTraceHasOld : 0, 2);
  out_.write(reinterpret_cast<const char*>(h.data()), h.size());
}

TraceWriter::~TraceWriter() {
  try {
    close();
  } catch (...) {
  }
}

void TraceWriter::append(const WriteRecord& rec) {
  if (closed_) throw TraceError("append to a closed trace");
  std::array<std::uint8_t, 8 + 64 + 64> buf{};
  put_le(buf.data(), rec.address, 8);
  rec.value.to_bytes(std::span<std::uint8_t, 64>(buf.data() + 8, 64));
  std::size_t n = 8 + 64;
  if (has_old_) {
    rec.old.value_or(MemoryLine{}).to_bytes(std::span<std::uint8_t, 64>(buf.data() + 72, 64));
    n += 64;
  }
  out_.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(n));
  if (!out_) throw TraceError("write failed at trace record " + std::to_string(count_));
  ++count_;
}

void TraceWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::array<std::uint8_t, 8> c{};
  put_le(c.data(), count_, 8);
  out_.seekp(8);
  out_.write(reinterpret_cast<const char*>(c.data()), c.size());
  out_.close();
  if (!out_) throw TraceError("failed to finalize trace");
}

TextTraceReader::TextTraceReader(const std::string& path) : in_(path) {
  if (!in_) throw TraceError(path + ": cannot open trace");
}

bool TextTraceReader::next(WriteRecord& rec) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string addr, value, old, extra;
    if (!(ss >> addr)) continue;
    try {
      if (!(ss >> value)) throw std::invalid_argument("missing new value");
      std::size_t used = 0;
      rec.address = std::stoull(addr, &used, 16);
      if (used != addr.size()) throw std::invalid_argument("bad address '" + addr + "'");
      rec.value = MemoryLine::from_hex(value);
      if (ss >> old) rec.old = MemoryLine::from_hex(old);
      else rec.old.reset();
      if (ss >> extra) throw std::invalid_argument("unexpected field '" + extra + "'");
    } catch (const std::exception& e) {
      throw TraceError("text trace line " + std::to_string(line_no_) + ": " + e.what());
    }
    return true;
  }
  return false;
}

void write_text_trace(const std::string& path, RecordSource& src) {
  std::ofstream out(path);
  if (!out) throw TraceError(path + ": cannot create trace");
  WriteRecord rec;
  while (src.next(rec)) {
    std::ostringstream addr;
    addr << std::hex << rec.address;
    out << addr.str() << ' ' << rec.value.to_hex();
    if (rec.old) out << ' ' << rec.old->to_hex();
    out << '\n';
  }
  if (!out) throw TraceError(path + ": write failed");
}

std::unique_ptr<RecordSource> open_trace(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw TraceError(path + ": cannot open trace");
  std::array<char, 4> m{};
  probe.read(m.data(), 4);
  const auto got = static_cast<std::size_t>(probe.gcount());
  if (got == 4 && std::memcmp(m.data(), kTraceMagic, 4) == 0) return std::make_unique<TraceReader>(path);
  const auto end = m.begin() + static_cast<std::ptrdiff_t>(got);
  const bool printable = std::all_of(m.begin(), end, [](char c) {
    return std::isprint(static_cast<unsigned char>(c)) || std::isspace(static_cast<unsigned char>(c));
  });
  const auto first = static_cast<unsigned char>(m[0]);
  const bool texty = got == 0 || (printable && (std::isxdigit(first) || std::isspace(first) || first == '#'));
  if (!texty) throw TraceError(path + ": bad magic, neither a WLCT nor a text trace");
  return std::make_unique<TextTraceReader>(path);
}

std::uint64_t write_trace(const std::string& path, RecordSource& src, bool has_old) {
  TraceWriter w(path, has_old);
  WriteRecord rec;
  while (src.next(rec)) w.append(rec);
  w.close();
  return w.count();
}

WorkloadKind parse_workload_kind(std::string_view s) {
  if (s == "uniform" || s == "uniform_random") return WorkloadKind::Uniform;
  if (s == "biased") return WorkloadKind::Biased;
  throw std::invalid_argument("unknown workload kind '" + std::string(s) + "' (uniform|biased)");
}

std::string_view to_string(WorkloadKind k) noexcept { return k == WorkloadKind::Uniform ? "uniform" : "biased"; }

void GeneratorSpec::validate() const {
  const auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  };
  prob(word_bias, "word bias");
  prob(zero_density, "zero density");
  prob(negative_fraction, "negative fraction");
  prob(rewrite_locality, "rewrite locality");
  prob(word_retain, "word retain");
  if (reference_k < 2 || reference_k > 17) throw std::invalid_argument("reference k must lie in [2,17]");
  if (magnitude_bits < 0 || magnitude_bits > 64 - reference_k)
    throw std::invalid_argument("magnitude bound must not exceed 2^(64-k) for the reference k");
  if (address_space == 0) throw std::invalid_argument("address space must be nonzero");
}

TraceGenerator::TraceGenerator(GeneratorSpec spec) : spec_(std::move(spec)), rng_(spec_.seed) { spec_.validate(); }

std::uint64_t TraceGenerator::small_word() {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng_) < spec_.zero_density) return 0;
  // Bit length uniform in [0, magnitude_bits] gives a log-uniform spread of
  // magnitudes.
  const int len = std::uniform_int_distribution<int>(0, spec_.magnitude_bits)(rng_);
  const std::uint64_t mag = len == 0 ? 0 : rng_() >> (64 - len);
  return u(rng_) < spec_.negative_fraction ? ~mag : mag;
}

std::uint64_t TraceGenerator::random_word() {
  if (spec_.kind == WorkloadKind::Uniform) return rng_();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng_) < spec_.word_bias) return small_word();
  const wlc::WlcConfig ref(spec_.reference_k);
  for (;;) {
    const std::uint64_t w = rng_();
    if (!wlc::word_compressible(w, ref)) return w;
  }
}

MemoryLine TraceGenerator::random_line() {
  MemoryLine line;
  for (int w = 0; w < kLineWords; ++w) line.set_word(w, random_word());
  return line;
}

bool TraceGenerator::next(WriteRecord& rec) {
  if (emitted_ >= spec_.lines) return false;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool rewrite = !recent_.empty() && u(rng_) < spec_.rewrite_locality;
  std::uint64_t addr;
  if (rewrite) addr = recent_[std::uniform_int_distribution<std::size_t>(0, recent_.size() - 1)(rng_)];
  else addr = std::uniform_int_distribution<std::uint64_t>(0, spec_.address_space - 1)(rng_);

  MemoryLine value = random_line();
  const auto prev = last_.find(addr);
  if (prev != last_.end() && spec_.word_retain > 0.0)
    for (int w = 0; w < kLineWords; ++w)
      if (u(rng_) < spec_.word_retain) value.set_word(w, prev->second.word(w));

  rec.address = addr;
  rec.value = value;
  if (spec_.emit_old) rec.old = prev != last_.end() ? prev->second : MemoryLine{};
  else rec.old.reset();

  if (spec_.emit_old || spec_.word_retain > 0.0) last_[addr] = value;
  if (!rewrite) {
    recent_.push_back(addr);
    if (recent_.size() > kRecentWindow) recent_.pop_front();
  }
  ++emitted_;
  return true;
}

}  // namespace pcmenc
