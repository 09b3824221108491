#include <doctest.h>

#include "spacesim/circuit_io.hpp"
#include "spacesim/genlib.hpp"

using namespace spacesim;
using namespace spacesim::genlib;

namespace {

BitVec bits_of(std::uint64_t v, unsigned width) {
  BitVec out;
  for (unsigned i = width; i-- > 0;) out.push_back(static_cast<Bit>(v >> i & 1U));
  return out;
}

}  // namespace

TEST_CASE("SplitMix64 reference values") {
  // First outputs for seed 0 as published with the reference implementation.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
  SplitMix64 b(5);
  for (int i = 0; i < 1000; ++i) CHECK(b.below(7) < 7);
}

TEST_CASE("family names") {
  CHECK(parse_family("ParityTree") == Family::ParityTree);
  CHECK(parse_family("parity-tree") == Family::ParityTree);
  CHECK(parse_family("bit_reversal_copy") == Family::BitReversalCopy);
  CHECK_THROWS_AS(parse_family("Mystery"), Error);
  CHECK_THROWS_AS(gen_circuit({Family::PointerChase, 4, 0}), Error);
  CHECK_THROWS_AS(gen_program({Family::ParityTree, 4, 0}), Error);
}

TEST_CASE("ParityTree computes XOR") {
  const auto two = gen_circuit({Family::ParityTree, 2, 0});
  CHECK(circuit::naive_eval(two, parse_bits("10")).back() == 1);
  CHECK(circuit::naive_eval(two, parse_bits("11")).back() == 0);
  SplitMix64 rng(4);
  for (std::uint64_t n : {1, 3, 8, 33, 100}) {
    const auto c = gen_circuit({Family::ParityTree, n, 0});
    CHECK(c.size() == 5 * n - 4);
    CHECK(circuit::validate(c).ok());
    for (int t = 0; t < 20; ++t) {
      BitVec in(n);
      Bit x = 0;
      for (auto& b : in) x ^= (b = static_cast<Bit>(rng.below(2)));
      CHECK(circuit::naive_eval(c, in)[c.output_gate()] == x);
    }
  }
}

TEST_CASE("RippleAdder adds") {
  const auto c4 = gen_circuit({Family::RippleAdder, 4, 0});
  const auto out4 = adder_outputs(4);
  const BitVec v = circuit::naive_eval(c4, parse_bits("00110001"));
  BitVec sum;
  for (auto g : out4.sum) sum.push_back(v[g]);
  CHECK(sum == parse_bits("0100"));
  CHECK(v[out4.carry] == 0);

  SplitMix64 rng(6);
  for (std::uint64_t w : {1, 5, 12}) {
    const auto c = gen_circuit({Family::RippleAdder, w, 0});
    CHECK(circuit::validate(c).ok());
    const auto out = adder_outputs(w);
    for (int t = 0; t < 30; ++t) {
      const std::uint64_t a = rng.below(1ULL << w), b = rng.below(1ULL << w);
      BitVec in = bits_of(a, static_cast<unsigned>(w));
      const BitVec bb = bits_of(b, static_cast<unsigned>(w));
      in.insert(in.end(), bb.begin(), bb.end());
      const BitVec vals = circuit::naive_eval(c, in);
      std::uint64_t s = 0;
      for (auto g : out.sum) s = 2 * s + vals[g];
      s += std::uint64_t{vals[out.carry]} << w;
      CHECK(s == a + b);
    }
  }
}

TEST_CASE("RandomLayered is valid and deterministic") {
  const auto a = gen_circuit({Family::RandomLayered, 256, 42});
  const auto b = gen_circuit({Family::RandomLayered, 256, 42});
  CHECK(circuit::validate(a).ok());
  CHECK(circuit::write_circuit(a) == circuit::write_circuit(b));
  CHECK(a.num_inputs() == 32);
  BitVec in(a.num_inputs(), 1);
  CHECK(circuit::naive_eval(a, in) == circuit::naive_eval(b, in));
  CHECK(circuit::write_circuit(gen_circuit({Family::RandomLayered, 256, 43})) != circuit::write_circuit(a));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(circuit::validate(gen_circuit({Family::RandomLayered, 1 + seed * 37, seed})).ok());
  }
}

TEST_CASE("program families") {
  SUBCASE("determinism") {
    for (auto f : {Family::PointerChase, Family::BitReversalCopy, Family::RandomProgram}) {
      const GenSpec s{f, 4, 9, std::nullopt};
      CHECK(ramsim::write_program(gen_program(s)) == ramsim::write_program(gen_program(s)));
    }
  }
  SUBCASE("BitReversalCopy reads back the bit-reversal permutation") {
    const BitVec input = parse_bits("10110010");
    const auto p = gen_program({Family::BitReversalCopy, 3, 0, input});
    const auto r = ramsim::naive_run_to_halt(ramsim::to_machine(p), *p.time_budget);
    BitVec read_back;
    for (const auto& e : r.trace) {
      if (e.is_read) read_back.push_back(e.bit);
    }
    // Independent permutation: position j holds input[reverse(j)].
    const std::size_t perm[8] = {0, 4, 2, 6, 1, 5, 3, 7};
    BitVec expect;
    for (auto j : perm) expect.push_back(input[j]);
    CHECK(read_back == expect);
    CHECK(read_back == parse_bits("10110010"));  // this input is its own bit-reversal
    CHECK_THROWS_AS(gen_program({Family::BitReversalCopy, 3, 0, parse_bits("101")}), Error);
  }
  SUBCASE("generated programs halt within their declared budget") {
    for (std::uint64_t n = 1; n <= 6; ++n) {
      for (auto f : {Family::PointerChase, Family::BitReversalCopy}) {
        const auto p = gen_program({f, n, n * 13});
        REQUIRE(p.time_budget.has_value());
        CHECK(ramsim::naive_run_to_halt(ramsim::to_machine(p), *p.time_budget).halted);
      }
    }
  }
  SUBCASE("random programs never spin without reading") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto m = ramsim::to_machine(gen_program({Family::RandomProgram, 2 + seed, seed}));
      m.max_free_actions = 2 + seed;
      CHECK_NOTHROW(ramsim::naive_run(m, 200));
    }
  }
}
