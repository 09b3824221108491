#pragma once

#include <cstdint>
#include <vector>

#include "spacesim/bits.hpp"

namespace spacesim::ramsim {

/// One checkpointed tape bit: `gap` reads of the upper interval elapse
/// between the previous stored entry and this one.
struct StoredEntry {
  std::uint64_t gap = 0;
  Bit bit = 0;

  friend bool operator==(const StoredEntry&, const StoredEntry&) = default;
};

/// Time-b values of the tape bits the upper interval reads, in first-read
/// order, each tagged with its gap in reads.
struct StoredReadList {
  std::vector<StoredEntry> entries;

  /// Read offset (from the start of the upper interval) of every entry.
  std::vector<std::uint64_t> offsets() const;
  static StoredReadList from_offsets(const std::vector<std::uint64_t>& offsets,
                                     const BitVec& bits);

  friend bool operator==(const StoredReadList&, const StoredReadList&) = default;
};

enum class ListEncoding : std::uint8_t {
  /// Fixed-width gaps; the width is the header.
  Raw,
  /// Elias-gamma of gap+1 per entry; no header.
  Gamma,
  /// Exp-Golomb of order k per entry, k chosen to minimize the payload and
  /// stored in the header as gamma(k+1). Order 0 coincides with Gamma.
  ExpGolomb,
};

struct EncodedList {
  ListEncoding encoding = ListEncoding::ExpGolomb;
  unsigned parameter = 0;  // field width (Raw) or order (ExpGolomb)
  BitBuffer header;
  BitBuffer payload;

  std::size_t payload_bits() const noexcept { return payload.size(); }
  std::size_t total_bits() const noexcept { return header.size() + payload.size(); }
};

// Universal integer codes. Gamma codes n >= 1.
void write_gamma(BitBuffer& out, std::uint64_t n);
std::uint64_t read_gamma(BitReader& in);
std::size_t gamma_length(std::uint64_t n);

void write_exp_golomb(BitBuffer& out, std::uint64_t value, unsigned order);
std::uint64_t read_exp_golomb(BitReader& in, unsigned order);
std::size_t exp_golomb_length(std::uint64_t value, unsigned order);

/// Order minimizing the exp-Golomb payload of the list's gaps (ties: smaller).
unsigned best_exp_golomb_order(const StoredReadList& list);

EncodedList encode(const StoredReadList& list, ListEncoding encoding = ListEncoding::ExpGolomb);
StoredReadList decode(const EncodedList& encoded);

/// Payload length in bits of the default encoding; the header is excluded.
std::size_t encode_stored_list(const StoredReadList& list,
                               ListEncoding encoding = ListEncoding::ExpGolomb);

}  // namespace spacesim::ramsim
