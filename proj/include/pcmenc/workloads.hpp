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
#include <deque>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>

#include "pcmenc/memsim.hpp"

namespace pcmenc {

inline constexpr char kTraceMagic[4] = {'W', 'L', 'C', 'T'};
inline constexpr std::uint16_t kTraceVersion = 1;
inline constexpr std::uint16_t kTraceHasOld = 1;

struct TraceHeader {
  std::uint16_t version = kTraceVersion;
  std::uint16_t flags = 0;
  std::uint64_t count = 0;

  bool has_old() const noexcept { return flags & kTraceHasOld; }
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary trace: a 16-byte header ("WLCT", u16 version, u16 flags, u64
/// record count, little-endian) followed by records of u64 address, 64-byte
/// new value and, when flags has bit 0, a 64-byte old value.
class TraceReader : public RecordSource {
 public:
  explicit TraceReader(const std::string& path);
  const TraceHeader& header() const noexcept { return header_; }
  bool next(WriteRecord& rec) override;

 private:
  std::ifstream in_;
  TraceHeader header_;
  std::uint64_t index_ = 0;
};

class TraceWriter {
 public:
  TraceWriter(const std::string& path, bool has_old);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  /// Records without an old value are written with the zero line when the
  /// file carries old values; an old value is dropped otherwise.
  void append(const WriteRecord& rec);
  /// Patches the record count into the header. Called by the destructor
  /// if not called explicitly.
  void close();
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::ofstream out_;
  bool has_old_;
  std::uint64_t count_ = 0;
  bool closed_ = false;
};

/// Text trace: one record per line, "addr_hex new_hex [old_hex]", with
/// blank lines and '#' comments ignored. Values are 128 hex digits.
class TextTraceReader : public RecordSource {
 public:
  explicit TextTraceReader(const std::string& path);
  bool next(WriteRecord& rec) override;

 private:
  std::ifstream in_;
  std::uint64_t line_no_ = 0;
};

void write_text_trace(const std::string& path, RecordSource& src);

/// Opens either format, choosing by the leading magic bytes.
std::unique_ptr<RecordSource> open_trace(const std::string& path);

/// Copies `src` into a binary trace file; returns the record count.
std::uint64_t write_trace(const std::string& path, RecordSource& src, bool has_old);

enum class WorkloadKind { Uniform, Biased };
WorkloadKind parse_workload_kind(std::string_view s);
std::string_view to_string(WorkloadKind k) noexcept;

struct GeneratorSpec {
  WorkloadKind kind = WorkloadKind::Biased;
  /// Probability that a word is a sign-extended small integer.
  double word_bias = 0.9883;
  /// Among small-integer words, probability of an exact zero.
  double zero_density = 0.3;
  /// Among nonzero small-integer words, probability of a negative value.
  double negative_fraction = 0.1;
  /// Small integers have magnitude below 2^magnitude_bits.
  int magnitude_bits = 32;
  /// Non-biased words are drawn so they do not compress at this k, making
  /// per-line compressibility at this k exactly word_bias^8.
  int reference_k = 6;
  /// Probability that a write goes to a recently written address.
  double rewrite_locality = 0.5;
  /// On a rewrite, probability that each word keeps its previous value.
  double word_retain = 0.0;
  std::uint64_t address_space = 1u << 20;
  std::uint64_t seed = 1;
  std::uint64_t lines = 10000;
  /// Emit the previous value of the address as each record's old value.
  bool emit_old = false;

  void validate() const;
};

/// Deterministic synthetic trace for a fixed spec.
class TraceGenerator : public RecordSource {
 public:
  explicit TraceGenerator(GeneratorSpec spec);
  bool next(WriteRecord& rec) override;

  /// Draws one 512-bit value without advancing the address stream.
  MemoryLine random_line();

 private:
  std::uint64_t random_word();
  std::uint64_t small_word();

  GeneratorSpec spec_;
  std::mt19937_64 rng_;
  std::uint64_t emitted_ = 0;
  std::deque<std::uint64_t> recent_;
  std::unordered_map<std::uint64_t, MemoryLine> last_;
};

}  // namespace pcmenc
