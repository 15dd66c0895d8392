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

#include "pcmenc/memsim.hpp"

#include <stdexcept>
#include <string>

namespace pcmenc {

void Aggregate::add(const WriteReport& r) {
  ++writes;
  total += r.breakdown;
  updated_cells += r.breakdown.updated_cells;
  disturb_expected += r.disturb_expected;
  disturb_sampled += r.disturb_sampled;
  if (r.compressed) ++compressed;
  else ++uncompressed;
}

MemoryArray::MemoryArray(Codec codec, DisturbanceModel disturbance, MemsimOptions opts)
    : codec_(std::move(codec)), disturbance_(std::move(disturbance)), opts_(std::move(opts)) {
  initial_ = codec_.initial_state();
  if (opts_.initial_value != MemoryLine{}) initial_ = codec_.encode(opts_.initial_value, initial_);
}

WriteReport MemoryArray::apply_write(const WriteRecord& rec) {
  auto [it, fresh] = lines_.try_emplace(rec.address, Slot{initial_, 0});
  Slot& slot = it->second;
  if (rec.old) {
    if (fresh) {
      slot.cells = codec_.encode(*rec.old, initial_);
    } else if (codec_.decode(slot.cells) != *rec.old) {
      ++totals_.old_mismatches;
    }
  }

  EncodedLine next = codec_.encode(rec.value, slot.cells);
  const auto regions = codec_.regions(next);

  WriteReport rep;
  rep.breakdown = energy_report(slot.cells.cells, next.cells, regions, codec_.energy_model());
  rep.disturb_expected = disturbance_expected(slot.cells.cells, next.cells, disturbance_);
  if (opts_.sample_disturbance)
    rep.disturb_sampled = disturbance_sampled(slot.cells.cells, next.cells, disturbance_,
                                              line_seed(opts_.seed, rec.address, slot.writes));
  rep.cells_total = static_cast<std::uint32_t>(next.size());
  rep.compressed = codec_.is_compressed(next);

  slot.cells = std::move(next);
  ++slot.writes;
  totals_.add(rep);
  return rep;
}

MemoryLine MemoryArray::read(std::uint64_t address) const {
  const auto* s = stored(address);
  return codec_.decode(s ? *s : initial_);
}

const EncodedLine* MemoryArray::stored(std::uint64_t address) const {
  const auto it = lines_.find(address);
  return it == lines_.end() ? nullptr : &it->second.cells;
}

Aggregate run_trace(MemoryArray& arr, RecordSource& src) {
  Aggregate agg;
  std::uint64_t pos = 0;
  const std::uint64_t mismatches_before = arr.totals().old_mismatches;
  WriteRecord rec;
  try {
    while (src.next(rec)) {
      agg.add(arr.apply_write(rec));
      ++pos;
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("trace record " + std::to_string(pos) + ": " + e.what());
  }
  agg.old_mismatches = arr.totals().old_mismatches - mismatches_before;
  return agg;
}

}  // namespace pcmenc
