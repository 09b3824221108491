#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spacesim {

using Bit = std::uint8_t;
using BitVec = std::vector<Bit>;

/// Parses a string of '0'/'1' characters. Throws Error(ParseError) otherwise.
BitVec parse_bits(std::string_view text);
std::string format_bits(const BitVec& bits);

/// Number of bits needed to write any value in [0, n], at least 1.
unsigned bit_width_for(std::uint64_t n);

/// ceil(log2(n)) with log2 of 0 and 1 taken as 0.
unsigned ceil_log2(std::uint64_t n);

/// Append-only packed bit sequence, MSB-first within each appended field.
class BitBuffer {
 public:
  void push(bool bit);
  /// Appends the low `width` bits of `value`, most significant first.
  void push_bits(std::uint64_t value, unsigned width);

  bool operator[](std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  void clear() noexcept {
    words_.clear();
    size_ = 0;
  }

  friend bool operator==(const BitBuffer&, const BitBuffer&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Sequential reader over a BitBuffer.
class BitReader {
 public:
  explicit BitReader(const BitBuffer& buffer, std::size_t pos = 0)
      : buffer_(&buffer), pos_(pos) {}

  bool read();
  std::uint64_t read_bits(unsigned width);
  /// Counts and consumes zeros up to (not including) the next one bit.
  unsigned skip_zeros();

  std::size_t position() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= buffer_->size(); }

 private:
  const BitBuffer* buffer_;
  std::size_t pos_;
};

}  // namespace spacesim
