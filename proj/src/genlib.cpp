#include "spacesim/genlib.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace spacesim::genlib {

using circuit::Circuit;
using circuit::CircuitView;
using circuit::Gate;
using circuit::GateIndex;
using ramsim::Action;
using ramsim::LastMatch;
using ramsim::Rule;
using ramsim::TableProgram;

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % bound;
  }
}

const char* to_string(Family f) {
  switch (f) {
    case Family::ParityTree: return "ParityTree";
    case Family::RippleAdder: return "RippleAdder";
    case Family::RandomLayered: return "RandomLayered";
    case Family::PointerChase: return "PointerChase";
    case Family::BitReversalCopy: return "BitReversalCopy";
    case Family::RandomProgram: return "RandomProgram";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  std::string key;
  for (char ch : name) {
    if (ch == '_' || ch == '-') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  for (Family f : {Family::ParityTree, Family::RippleAdder, Family::RandomLayered,
                   Family::PointerChase, Family::BitReversalCopy, Family::RandomProgram}) {
    std::string candidate = to_string(f);
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (candidate == key) return f;
  }
  throw Error(ErrorCode::BadFamily, "unknown family '" + std::string(name) + "'");
}

bool is_circuit_family(Family f) {
  return f == Family::ParityTree || f == Family::RippleAdder || f == Family::RandomLayered;
}

std::uint64_t reverse_bits(std::uint64_t value, unsigned width) {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < width; ++i) out |= ((value >> i) & 1U) << (width - 1 - i);
  return out;
}

// ---------------------------------------------------------------------------
// Circuits

namespace {

[[noreturn]] void bad_size(const GenSpec& spec, const std::string& why) {
  throw Error(ErrorCode::BadFamily, std::string(to_string(spec.family)) + "(" +
                                        std::to_string(spec.n) + "): " + why);
}

/// Gate `i` of the post-order parity subtree over leaves [leaf, leaf+k)
/// whose first gate has index `offset`.
Gate parity_gate(std::uint64_t i, std::uint64_t offset, std::uint64_t leaf, std::uint64_t k) {
  for (;;) {
    if (k == 1) return Gate::input(static_cast<std::uint32_t>(leaf));
    const std::uint64_t kl = (k + 1) / 2;
    const std::uint64_t kr = k - kl;
    const std::uint64_t size_l = 5 * kl - 4;
    const std::uint64_t size_r = 5 * kr - 4;
    if (i < offset + size_l) {
      k = kl;
      continue;
    }
    if (i < offset + size_l + size_r) {
      offset += size_l;
      leaf += kl;
      k = kr;
      continue;
    }
    const auto x = static_cast<GateIndex>(offset + size_l - 1);
    const auto y = static_cast<GateIndex>(offset + size_l + size_r - 1);
    const auto g = static_cast<GateIndex>(offset + size_l + size_r);
    switch (i - (offset + size_l + size_r)) {
      case 0: return Gate::or_of(x, y);
      case 1: return Gate::and_of(x, y);
      case 2: return Gate::not_of(g + 1);
      default: return Gate::and_of(g, g + 2);
    }
  }
}

Circuit ripple_adder(std::uint64_t w) {
  std::vector<Gate> gates;
  for (std::uint32_t i = 0; i < 2 * w; ++i) gates.push_back(Gate::input(i));
  gates.push_back(Gate::constant(false));
  auto carry = static_cast<GateIndex>(2 * w);
  for (std::uint64_t bit = 0; bit < w; ++bit) {
    const auto a = static_cast<GateIndex>(w - 1 - bit);
    const auto b = static_cast<GateIndex>(2 * w - 1 - bit);
    const auto base = static_cast<GateIndex>(gates.size());
    gates.push_back(Gate::or_of(a, b));               // base+0
    gates.push_back(Gate::and_of(a, b));              // base+1  a&b
    gates.push_back(Gate::not_of(base + 1));          // base+2
    gates.push_back(Gate::and_of(base, base + 2));    // base+3  a^b
    gates.push_back(Gate::or_of(base + 3, carry));    // base+4
    gates.push_back(Gate::and_of(base + 3, carry));   // base+5  (a^b)&c
    gates.push_back(Gate::not_of(base + 5));          // base+6
    gates.push_back(Gate::and_of(base + 4, base + 6));  // base+7  sum
    gates.push_back(Gate::or_of(base + 1, base + 5));   // base+8  carry out
    carry = base + 8;
  }
  return Circuit(std::move(gates), static_cast<std::uint32_t>(2 * w));
}

Circuit random_layered(std::uint64_t n, std::uint64_t seed) {
  constexpr std::uint64_t kWindow = 32;
  SplitMix64 rng(seed);
  std::vector<Gate> gates;
  std::vector<std::uint8_t> fan_out(n, 0);
  std::uint32_t inputs = 0;

  auto pick = [&](std::uint64_t i, std::optional<GateIndex> avoid) -> std::optional<GateIndex> {
    const std::uint64_t lo = i > kWindow ? i - kWindow : 0;
    for (int tries = 0; tries < 8; ++tries) {
      const auto j = static_cast<GateIndex>(lo + rng.below(i - lo));
      if (fan_out[j] < circuit::kMaxFanOut && j != avoid) return j;
    }
    for (std::uint64_t j = i; j-- > 0;) {
      if (fan_out[j] < circuit::kMaxFanOut && j != avoid) return static_cast<GateIndex>(j);
    }
    return std::nullopt;
  };

  for (std::uint64_t i = 0; i < n; ++i) {
    if (i % 8 == 0) {
      gates.push_back(Gate::input(inputs++));
      continue;
    }
    const std::uint64_t roll = rng.below(20);
    const auto x = pick(i, std::nullopt);
    if (!x) {
      gates.push_back(Gate::constant(rng.below(2) != 0));
      continue;
    }
    ++fan_out[*x];
    if (roll < 14) {
      const auto y = pick(i, x);
      if (y) {
        ++fan_out[*y];
        gates.push_back(roll < 7 ? Gate::and_of(*x, *y) : Gate::or_of(*x, *y));
        continue;
      }
    }
    gates.push_back(roll < 18 ? Gate::not_of(*x) : Gate::dup(*x));
  }
  return Circuit(std::move(gates), inputs);
}

}  // namespace

std::size_t parity_tree_size(std::uint64_t leaves) { return 5 * leaves - 4; }

CircuitView parity_tree_view(std::uint64_t leaves) {
  if (leaves == 0 || leaves > (1U << 28)) {
    throw Error(ErrorCode::BadFamily, "ParityTree needs 1..2^28 leaves");
  }
  const std::size_t size = parity_tree_size(leaves);
  return CircuitView(size, static_cast<std::uint32_t>(leaves), static_cast<GateIndex>(size - 1),
                     [leaves](GateIndex i) { return parity_gate(i, 0, 0, leaves); });
}

AdderOutputs adder_outputs(std::uint64_t width) {
  AdderOutputs out;
  const std::uint64_t first = 2 * width + 1;
  for (std::uint64_t bit = width; bit-- > 0;) {
    out.sum.push_back(static_cast<GateIndex>(first + 9 * bit + 7));
  }
  out.carry = static_cast<GateIndex>(first + 9 * width - 1);
  return out;
}

Circuit gen_circuit(const GenSpec& spec) {
  switch (spec.family) {
    case Family::ParityTree:
      if (spec.n == 0 || spec.n > (1U << 28)) bad_size(spec, "need 1..2^28 inputs");
      return parity_tree_view(spec.n).materialize();
    case Family::RippleAdder:
      if (spec.n == 0 || spec.n > (1U << 24)) bad_size(spec, "need width 1..2^24");
      return ripple_adder(spec.n);
    case Family::RandomLayered:
      if (spec.n == 0 || spec.n > (1U << 30)) bad_size(spec, "need 1..2^30 gates");
      return random_layered(spec.n, spec.seed);
    default:
      throw Error(ErrorCode::BadFamily,
                  std::string(to_string(spec.family)) + " is not a circuit family");
  }
}

// ---------------------------------------------------------------------------
// Programs

std::uint8_t PointerChaseTable::chase(std::uint64_t hops) const {
  std::uint8_t p = start;
  for (std::uint64_t h = 0; h < hops; ++h) p = next[p];
  return p;
}

PointerChaseTable pointer_chase_table(std::uint64_t seed) {
  SplitMix64 rng(seed);
  PointerChaseTable t;
  std::iota(t.next.begin(), t.next.end(), std::uint8_t{0});
  for (std::size_t i = t.next.size() - 1; i > 0; --i) {
    std::swap(t.next[i], t.next[rng.below(i + 1)]);
  }
  t.base = rng.below((1U << 16) - 64 + 1);
  t.start = static_cast<std::uint8_t>(rng.below(16));
  return t;
}

namespace {

constexpr std::uint64_t kChasePreload = 64;
constexpr std::uint64_t kChaseStart = kChasePreload;

/// Read j of hop h at pointer p has been issued with the j earlier bits of
/// the entry accumulated in v.
std::uint64_t chase_state(std::uint64_t h, std::uint64_t p, std::uint64_t j, std::uint64_t v) {
  return kChaseStart + 1 + (h * 16 + p) * 15 + ((std::uint64_t{1} << j) - 1 + v);
}

Rule rule(std::uint64_t state, LastMatch last, std::uint64_t next, Action action) {
  return {state, last, next, std::move(action)};
}

BitVec nibble(std::uint64_t q) {
  return {static_cast<Bit>((q >> 3) & 1), static_cast<Bit>((q >> 2) & 1),
          static_cast<Bit>((q >> 1) & 1), static_cast<Bit>(q & 1)};
}

TableProgram pointer_chase(const GenSpec& spec) {
  const std::uint64_t hops = spec.n;
  if (hops == 0 || hops > 4096) bad_size(spec, "need 1..4096 hops");
  const PointerChaseTable t = pointer_chase_table(spec.seed);
  TableProgram p;
  p.name = "PointerChase(" + std::to_string(hops) + ", seed=" + std::to_string(spec.seed) + ")";
  p.tape_addr_bits = 16;
  p.num_states = pointer_chase_halt_state(hops, 15) + 1;
  p.halt_on_missing = true;
  p.time_budget = 4 * hops;

  for (std::uint64_t i = 0; i < kChasePreload; ++i) {
    const std::uint64_t entry = i / 4;
    const auto bit = static_cast<Bit>((t.next[entry] >> (3 - i % 4)) & 1U);
    p.rules.push_back(rule(i, LastMatch::Any, i + 1, Action::write_tape(t.base + i, bit)));
  }
  p.rules.push_back(rule(kChaseStart, LastMatch::Any, chase_state(0, t.start, 0, 0),
                         Action::read_tape(t.base + 4 * t.start)));
  for (std::uint64_t h = 0; h < hops; ++h) {
    for (std::uint64_t ptr = 0; ptr < 16; ++ptr) {
      for (std::uint64_t j = 0; j < 4; ++j) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << j); ++v) {
          const std::uint64_t s = chase_state(h, ptr, j, v);
          for (Bit b : {Bit{0}, Bit{1}}) {
            const LastMatch last = b ? LastMatch::One : LastMatch::Zero;
            const std::uint64_t acc = 2 * v + b;
            if (j < 3) {
              p.rules.push_back(rule(s, last, chase_state(h, ptr, j + 1, acc),
                                     Action::read_tape(t.base + 4 * ptr + j + 1)));
            } else if (h + 1 < hops) {
              p.rules.push_back(rule(s, last, chase_state(h + 1, acc, 0, 0),
                                     Action::read_tape(t.base + 4 * acc)));
            } else {
              p.rules.push_back(rule(s, last, pointer_chase_halt_state(hops, static_cast<std::uint8_t>(acc)),
                                     Action::halt(nibble(acc))));
            }
          }
        }
      }
    }
  }
  return p;
}

TableProgram bit_reversal_copy(const GenSpec& spec) {
  const std::uint64_t w = spec.n;
  if (w == 0 || w > 12) bad_size(spec, "need width 1..12");
  const std::uint64_t count = std::uint64_t{1} << w;
  constexpr ramsim::Address kBase = 0x100;
  TableProgram p;
  p.name = "BitReversalCopy(" + std::to_string(w) + ")";
  p.tape_addr_bits = 16;
  if (spec.input) {
    if (spec.input->size() != count) {
      throw Error(ErrorCode::InputLengthMismatch,
                  "BitReversalCopy(" + std::to_string(w) + ") needs " + std::to_string(count) +
                      " input bits");
    }
    p.input = *spec.input;
  } else {
    SplitMix64 rng(spec.seed);
    for (std::uint64_t i = 0; i < count; ++i) p.input.push_back(static_cast<Bit>(rng.below(2)));
  }
  p.num_states = 3 * count + 1;
  p.time_budget = count;
  // States 2i / 2i+1 copy input i; 2N+j reads address j back; 3N halts.
  for (std::uint64_t i = 0; i < count; ++i) {
    p.rules.push_back(rule(2 * i, LastMatch::Any, 2 * i + 1, Action::read_input(i)));
    const std::uint64_t after = 2 * i + 2;
    const ramsim::Address dst = kBase + reverse_bits(i, static_cast<unsigned>(w));
    for (Bit b : {Bit{0}, Bit{1}}) {
      p.rules.push_back(rule(2 * i + 1, b ? LastMatch::One : LastMatch::Zero, after,
                             Action::write_tape(dst, b)));
    }
    p.rules.push_back(rule(2 * i + 1, LastMatch::None, 2 * i + 1, Action::halt()));
  }
  for (std::uint64_t j = 0; j < count; ++j) {
    p.rules.push_back(rule(2 * count + j, LastMatch::Any, 2 * count + j + 1,
                           Action::read_tape(kBase + j)));
  }
  p.rules.push_back(rule(3 * count, LastMatch::Any, 3 * count, Action::halt()));
  return p;
}

TableProgram random_program(const GenSpec& spec) {
  const std::uint64_t q = spec.n;
  if (q < 2 || q > 4096) bad_size(spec, "need 2..4096 states");
  constexpr std::uint64_t kPool = 16;
  constexpr std::uint64_t kInput = 16;
  SplitMix64 rng(spec.seed);
  TableProgram p;
  p.name = "RandomProgram(" + std::to_string(q) + ", seed=" + std::to_string(spec.seed) + ")";
  p.tape_addr_bits = 16;
  for (std::uint64_t i = 0; i < kInput; ++i) p.input.push_back(static_cast<Bit>(rng.below(2)));
  std::vector<ramsim::Address> pool;
  for (std::uint64_t i = 0; i < kPool; ++i) pool.push_back(rng.below(1U << 16));
  p.num_states = q;
  for (std::uint64_t s = 0; s < q; ++s) {
    for (LastMatch last : {LastMatch::None, LastMatch::Zero, LastMatch::One}) {
      const bool may_free = s + 1 < q;
      const std::uint64_t roll = rng.below(100);
      const ramsim::Address addr = pool[rng.below(kPool)];
      if (roll == 0) {
        p.rules.push_back(rule(s, last, s, Action::halt()));
      } else if (roll < 50 || !may_free) {
        p.rules.push_back(rule(s, last, rng.below(q), Action::read_tape(addr)));
      } else {
        const std::uint64_t next = s + 1 + rng.below(q - 1 - s);
        if (roll < 82) {
          p.rules.push_back(rule(s, last, next, Action::write_tape(addr, static_cast<Bit>(rng.below(2)))));
        } else {
          p.rules.push_back(rule(s, last, next, Action::read_input(rng.below(kInput))));
        }
      }
    }
  }
  return p;
}

}  // namespace

std::uint64_t pointer_chase_halt_state(std::uint64_t hops, std::uint8_t q) {
  return chase_state(hops, 0, 0, 0) + q;
}

TableProgram gen_program(const GenSpec& spec) {
  switch (spec.family) {
    case Family::PointerChase: return pointer_chase(spec);
    case Family::BitReversalCopy: return bit_reversal_copy(spec);
    case Family::RandomProgram: return random_program(spec);
    default:
      throw Error(ErrorCode::BadFamily,
                  std::string(to_string(spec.family)) + " is not a program family");
  }
}

}  // namespace spacesim::genlib
