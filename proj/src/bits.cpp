#include "spacesim/bits.hpp"

#include <bit>

#include "spacesim/error.hpp"

namespace spacesim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonTopological: return "NonTopological";
    case ErrorCode::FanInExceeded: return "FanInExceeded";
    case ErrorCode::FanOutExceeded: return "FanOutExceeded";
    case ErrorCode::BadInputIndex: return "BadInputIndex";
    case ErrorCode::InputLengthMismatch: return "InputLengthMismatch";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::MalformedPlan: return "MalformedPlan";
    case ErrorCode::GateOutOfPlan: return "GateOutOfPlan";
    case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadFamily: return "BadFamily";
    case ErrorCode::BadMachine: return "BadMachine";
  }
  return "Unknown";
}

BitVec parse_bits(std::string_view text) {
  BitVec bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw Error(ErrorCode::ParseError,
                  "bit string may only contain '0' and '1': '" +
                      std::string(text) + "'");
    }
    bits.push_back(ch == '1');
  }
  return bits;
}

std::string format_bits(const BitVec& bits) {
  std::string out;
  out.reserve(bits.size());
  for (Bit b : bits) out.push_back(b ? '1' : '0');
  return out;
}

unsigned bit_width_for(std::uint64_t n) {
  return n == 0 ? 1U : static_cast<unsigned>(std::bit_width(n));
}

unsigned ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

void BitBuffer::push(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
  ++size_;
}

void BitBuffer::push_bits(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) push((value >> i) & 1U);
}

bool BitReader::read() {
  if (pos_ >= buffer_->size()) {
    throw Error(ErrorCode::ParseError, "bit stream exhausted");
  }
  return (*buffer_)[pos_++];
}

std::uint64_t BitReader::read_bits(unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<unsigned>(read());
  return v;
}

unsigned BitReader::skip_zeros() {
  unsigned zeros = 0;
  while (true) {
    if (pos_ >= buffer_->size()) {
      throw Error(ErrorCode::ParseError, "unterminated unary prefix");
    }
    if ((*buffer_)[pos_]) return zeros;
    ++pos_;
    ++zeros;
  }
}

}  // namespace spacesim
