#include "spacesim/stored_list.hpp"

#include <bit>
#include <limits>

#include "spacesim/error.hpp"

namespace spacesim::ramsim {

std::vector<std::uint64_t> StoredReadList::offsets() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries.size());
  std::uint64_t next = 0;
  for (const auto& e : entries) {
    next += e.gap;
    out.push_back(next);
    ++next;
  }
  return out;
}

StoredReadList StoredReadList::from_offsets(const std::vector<std::uint64_t>& offsets,
                                            const BitVec& bits) {
  StoredReadList list;
  list.entries.reserve(offsets.size());
  std::uint64_t next = 0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (offsets[i] < next) {
      throw Error(ErrorCode::ParseError, "stored-list offsets must be strictly increasing");
    }
    list.entries.push_back({offsets[i] - next, bits.at(i)});
    next = offsets[i] + 1;
  }
  return list;
}

void write_gamma(BitBuffer& out, std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::ParseError, "gamma code is defined for n >= 1");
  const unsigned width = static_cast<unsigned>(std::bit_width(n));
  out.push_bits(0, width - 1);
  out.push_bits(n, width);
}

std::uint64_t read_gamma(BitReader& in) {
  const unsigned zeros = in.skip_zeros();
  if (zeros > 63) throw Error(ErrorCode::ParseError, "gamma code too long");
  return in.read_bits(zeros + 1);
}

std::size_t gamma_length(std::uint64_t n) { return 2 * std::bit_width(n) - 1; }

void write_exp_golomb(BitBuffer& out, std::uint64_t value, unsigned order) {
  write_gamma(out, (value >> order) + 1);
  out.push_bits(value, order);
}

std::uint64_t read_exp_golomb(BitReader& in, unsigned order) {
  const std::uint64_t high = read_gamma(in) - 1;
  return (high << order) | in.read_bits(order);
}

std::size_t exp_golomb_length(std::uint64_t value, unsigned order) {
  return gamma_length((value >> order) + 1) + order;
}

namespace {

constexpr unsigned kMaxOrder = 62;

void check_gaps(const StoredReadList& list) {
  for (const auto& e : list.entries) {
    if (e.gap >= (std::uint64_t{1} << 62)) {
      throw Error(ErrorCode::ParseError, "stored-list gap too large to encode");
    }
  }
}

}  // namespace

unsigned best_exp_golomb_order(const StoredReadList& list) {
  unsigned best_order = 0;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (unsigned k = 0; k <= kMaxOrder; ++k) {
    std::size_t total = 0;
    for (const auto& e : list.entries) total += exp_golomb_length(e.gap, k);
    if (total < best) {
      best = total;
      best_order = k;
    }
  }
  return best_order;
}

EncodedList encode(const StoredReadList& list, ListEncoding encoding) {
  check_gaps(list);
  EncodedList out;
  out.encoding = encoding;
  switch (encoding) {
    case ListEncoding::Raw: {
      std::uint64_t widest = 0;
      for (const auto& e : list.entries) widest = std::max(widest, e.gap);
      out.parameter = bit_width_for(widest);
      write_gamma(out.header, out.parameter);
      for (const auto& e : list.entries) {
        out.payload.push_bits(e.gap, out.parameter);
        out.payload.push(e.bit);
      }
      break;
    }
    case ListEncoding::Gamma:
      for (const auto& e : list.entries) {
        write_gamma(out.payload, e.gap + 1);
        out.payload.push(e.bit);
      }
      break;
    case ListEncoding::ExpGolomb:
      out.parameter = best_exp_golomb_order(list);
      write_gamma(out.header, out.parameter + 1);
      for (const auto& e : list.entries) {
        write_exp_golomb(out.payload, e.gap, out.parameter);
        out.payload.push(e.bit);
      }
      break;
  }
  return out;
}

StoredReadList decode(const EncodedList& encoded) {
  unsigned parameter = 0;
  if (encoded.encoding != ListEncoding::Gamma) {
    BitReader header(encoded.header);
    parameter = static_cast<unsigned>(read_gamma(header));
    if (encoded.encoding == ListEncoding::ExpGolomb) --parameter;
  }
  StoredReadList list;
  BitReader in(encoded.payload);
  while (!in.at_end()) {
    StoredEntry e;
    switch (encoded.encoding) {
      case ListEncoding::Raw: e.gap = in.read_bits(parameter); break;
      case ListEncoding::Gamma: e.gap = read_gamma(in) - 1; break;
      case ListEncoding::ExpGolomb: e.gap = read_exp_golomb(in, parameter); break;
    }
    e.bit = in.read();
    list.entries.push_back(e);
  }
  return list;
}

std::size_t encode_stored_list(const StoredReadList& list, ListEncoding encoding) {
  return encode(list, encoding).payload_bits();
}

}  // namespace spacesim::ramsim
