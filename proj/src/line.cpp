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

#include "pcmenc/line.hpp"

#include <stdexcept>

namespace pcmenc {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

MemoryLine MemoryLine::from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() != 128)
    throw std::invalid_argument("line hex must have 128 digits, got " + std::to_string(hex.size()));
  MemoryLine line;
  for (int i = 0; i < kLineWords; ++i) {
    std::uint64_t w = 0;
    for (int d = 0; d < 16; ++d) {
      const int v = hex_value(hex[i * 16 + d]);
      if (v < 0) throw std::invalid_argument("line hex contains non-hex character");
      w = (w << 4) | static_cast<std::uint64_t>(v);
    }
    line.words_[i] = w;
  }
  return line;
}

std::string MemoryLine::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(128, '0');
  for (int i = 0; i < kLineWords; ++i)
    for (int d = 0; d < 16; ++d) out[i * 16 + d] = digits[(words_[i] >> (60 - 4 * d)) & 0xF];
  return out;
}

void word_symbols(std::uint64_t word, std::span<Symbol, kWordCells> out) noexcept {
  for (int u = 0; u < kWordCells; ++u) out[u] = static_cast<Symbol>((word >> (62 - 2 * u)) & 3u);
}

std::uint64_t word_from_symbols(std::span<const Symbol, kWordCells> symbols) noexcept {
  std::uint64_t w = 0;
  for (int u = 0; u < kWordCells; ++u) w = (w << 2) | (symbols[u] & 3u);
  return w;
}

void MemoryLine::symbols(std::span<Symbol, kLineCells> out) const noexcept {
  for (int i = 0; i < kLineWords; ++i)
    word_symbols(words_[i], out.subspan(i * kWordCells).first<kWordCells>());
}

MemoryLine MemoryLine::from_symbols(std::span<const Symbol, kLineCells> symbols) noexcept {
  MemoryLine line;
  for (int i = 0; i < kLineWords; ++i)
    line.words_[i] = word_from_symbols(symbols.subspan(i * kWordCells).first<kWordCells>());
  return line;
}

MemoryLine MemoryLine::operator~() const noexcept {
  MemoryLine r;
  for (int i = 0; i < kLineWords; ++i) r.words_[i] = ~words_[i];
  return r;
}

MemoryLine MemoryLine::operator^(const MemoryLine& o) const noexcept {
  MemoryLine r;
  for (int i = 0; i < kLineWords; ++i) r.words_[i] = words_[i] ^ o.words_[i];
  return r;
}

void MemoryLine::to_bytes(std::span<std::uint8_t, 64> out) const noexcept {
  for (int i = 0; i < kLineWords; ++i)
    for (int b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<std::uint8_t>(words_[i] >> (8 * b));
}

MemoryLine MemoryLine::from_bytes(std::span<const std::uint8_t, 64> in) noexcept {
  MemoryLine line;
  for (int i = 0; i < kLineWords; ++i) {
    std::uint64_t w = 0;
    for (int b = 7; b >= 0; --b) w = (w << 8) | in[i * 8 + b];
    line.words_[i] = w;
  }
  return line;
}

}  // namespace pcmenc
