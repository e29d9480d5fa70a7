// Copyright 2026 The hsprg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsprg {

/// Fixed-length bit string. Bit i lives in word i/64 at position i%64, so a
/// string built from an integer reads back that integer's bits LSB first.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits) : size_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitString from_uint(std::uint64_t value, std::size_t nbits) {
    if (nbits > 64) throw std::invalid_argument("BitString::from_uint: more than 64 bits");
    BitString b(nbits);
    if (nbits > 0) b.words_[0] = nbits == 64 ? value : (value & ((std::uint64_t{1} << nbits) - 1));
    return b;
  }

  static BitString from_words(std::vector<std::uint64_t> words, std::size_t nbits) {
    if (words.size() * 64 < nbits) throw std::invalid_argument("BitString::from_words: too few words");
    BitString b;
    b.size_ = nbits;
    words.resize((nbits + 63) / 64);
    if (nbits % 64 != 0 && !words.empty()) words.back() &= (std::uint64_t{1} << (nbits % 64)) - 1;
    b.words_ = std::move(words);
    return b;
  }

  /// Parses a string of '0'/'1' characters; character i is bit i.
  static BitString from_string(const std::string& s) {
    BitString b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        b.set(i, true);
      } else if (s[i] != '0') {
        throw std::invalid_argument("BitString::from_string: expected only 0/1");
      }
    }
    return b;
  }

  std::size_t size() const { return size_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool get(std::size_t i) const { return (words_.at(i / 64) >> (i % 64)) & 1u; }
  void set(std::size_t i, bool v) {
    auto& w = words_.at(i / 64);
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    w = v ? (w | mask) : (w & ~mask);
  }

  /// Reads `width` (<= 64) bits starting at `offset`, LSB first.
  std::uint64_t read(std::size_t offset, unsigned width) const {
    if (width > 64) throw std::invalid_argument("BitString::read: width > 64");
    if (offset + width > size_) throw std::out_of_range("BitString::read: past end");
    if (width == 0) return 0;
    const std::size_t w = offset / 64;
    const unsigned sh = offset % 64;
    std::uint64_t v = words_[w] >> sh;
    if (sh != 0 && sh + width > 64) v |= words_.at(w + 1) << (64 - sh);
    return width == 64 ? v : (v & ((std::uint64_t{1} << width) - 1));
  }

  void write(std::size_t offset, unsigned width, std::uint64_t value) {
    for (unsigned i = 0; i < width; ++i) set(offset + i, (value >> i) & 1u);
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) s[i] = get(i) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Sequential reader over a BitString.
class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(&bits) {}
  std::uint64_t take(unsigned width) {
    const auto v = bits_->read(pos_, width);
    pos_ += width;
    return v;
  }
  std::size_t position() const { return pos_; }

 private:
  const BitString* bits_;
  std::size_t pos_ = 0;
};

}  // namespace hsprg
