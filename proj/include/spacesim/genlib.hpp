#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spacesim/circuit.hpp"
#include "spacesim/program_io.hpp"

namespace spacesim::genlib {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then
/// two xor-shift-multiply rounds. Fully specified so outputs are stable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, bound), bound > 0, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound);
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

enum class Family : std::uint8_t {
  ParityTree,
  RippleAdder,
  RandomLayered,
  PointerChase,
  BitReversalCopy,
  RandomProgram,
};

const char* to_string(Family f);
/// Accepts the names above, case-insensitively, with or without underscores
/// or dashes ("parity-tree"). Throws Error(BadFamily).
Family parse_family(std::string_view name);
bool is_circuit_family(Family f);

struct GenSpec {
  Family family = Family::ParityTree;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  /// Input bits for program families that read an input; drawn from the
  /// seed when absent.
  std::optional<BitVec> input;
};

/// ParityTree(n): XOR of n inputs as a balanced tree laid out in post-order,
/// each XOR expanded to AND(OR(x,y), NOT(AND(x,y))); 5n-4 gates.
/// RippleAdder(w): a (w bits, MSB first) then b as inputs; output gate is
/// the carry out, see adder_outputs for the sum bits.
/// RandomLayered(n, seed): n gates, one input every 8 gates, sources drawn
/// from a sliding window below each gate respecting fan-out 2.
circuit::Circuit gen_circuit(const GenSpec& spec);

/// Descriptor-backed ParityTree: each gate is computed from its index in
/// O(log n) time without materializing the circuit.
circuit::CircuitView parity_tree_view(std::uint64_t leaves);
std::size_t parity_tree_size(std::uint64_t leaves);

struct AdderOutputs {
  std::vector<circuit::GateIndex> sum;  // MSB first
  circuit::GateIndex carry = 0;
};
AdderOutputs adder_outputs(std::uint64_t width);

/// Table of a PointerChase program, kept so tests can iterate the chase directly.
struct PointerChaseTable {
  ramsim::Address base = 0;
  std::array<std::uint8_t, 16> next{};
  std::uint8_t start = 0;

  /// Pointer after `hops` steps of p -> next[p] from `start`.
  std::uint8_t chase(std::uint64_t hops) const;
};
PointerChaseTable pointer_chase_table(std::uint64_t seed);

/// State the PointerChase program halts in when its final pointer is q.
std::uint64_t pointer_chase_halt_state(std::uint64_t hops, std::uint8_t q);

/// PointerChase(L, seed): preloads a random 16-entry permutation (4-bit
/// pointers, MSB first) at a random base with free writes, follows it for L
/// hops (4L reads) and halts with the final pointer as output.
/// BitReversalCopy(w): reads 2^w input bits, writes input i to tape address
/// base + reverse_w(i), then reads addresses base..base+2^w-1 back.
/// RandomProgram(q, seed): q random states branching on the last bit; all
/// non-read actions move to a higher-numbered state so the machine cannot
/// spin without reading. It need not halt.
ramsim::TableProgram gen_program(const GenSpec& spec);

std::uint64_t reverse_bits(std::uint64_t value, unsigned width);

}  // namespace spacesim::genlib
