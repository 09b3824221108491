#include <doctest.h>

#include <map>

#include "spacesim/genlib.hpp"
#include "spacesim/program_io.hpp"
#include "spacesim/ramsim.hpp"

using namespace spacesim;
using namespace spacesim::ramsim;

namespace {

Rule any(std::uint64_t s, std::uint64_t next, Action a) { return {s, LastMatch::Any, next, a}; }

MachineSpec straight_line(std::vector<Action> actions) {
  TableProgram p;
  p.num_states = actions.size() + 1;
  for (std::uint64_t s = 0; s < actions.size(); ++s) p.rules.push_back(any(s, s + 1, actions[s]));
  p.rules.push_back(any(actions.size(), actions.size(), Action::halt()));
  return to_machine(p);
}

MachineSpec random_machine(std::uint64_t seed, std::uint64_t states = 12) {
  return to_machine(genlib::gen_program({genlib::Family::RandomProgram, states, seed}));
}

// Tape contents right after `t` reads, replayed from the trace.
std::map<Address, Bit> tape_at(const std::vector<TraceEvent>& trace, Step t) {
  std::map<Address, Bit> tape;
  for (const auto& e : trace) {
    if (e.step >= t) break;
    if (!e.is_read) tape[e.addr] = e.bit;
  }
  return tape;
}

std::vector<Address> touched(const std::vector<TraceEvent>& trace) {
  std::vector<Address> out;
  for (const auto& e : trace) {
    if (std::find(out.begin(), out.end(), e.addr) == out.end()) out.push_back(e.addr);
  }
  return out;
}

}  // namespace

TEST_CASE("naive_run semantics") {
  SUBCASE("write then read the same address") {
    const auto m = straight_line({Action::write_tape(5, 1), Action::read_tape(5)});
    const auto r = naive_run(m, 10);
    CHECK(r.reads == 1);
    CHECK(r.halted);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[1] == TraceEvent{0, true, 5, 1});
    CHECK(r.trace[0] == TraceEvent{0, false, 5, 1});
  }
  SUBCASE("fresh tape reads 0") {
    const auto r = naive_run(straight_line({Action::read_tape(7)}), 10);
    CHECK(r.trace.at(0).bit == 0);
    CHECK(r.reads == 1);
  }
  SUBCASE("budget stops at a read boundary") {
    const auto m = straight_line({Action::read_tape(1), Action::write_tape(2, 1), Action::read_tape(2)});
    const auto r = naive_run(m, 1);
    CHECK(r.reads == 1);
    CHECK_FALSE(r.halted);
    CHECK(r.trace.size() == 1);
    CHECK(r.config.last == Bit{0});
  }
  SUBCASE("running past the budget is an error with the partial trace") {
    const auto m = straight_line({Action::read_tape(1), Action::read_tape(2), Action::read_tape(3)});
    try {
      naive_run_to_halt(m, 2);
      FAIL("expected BudgetExceeded");
    } catch (const BudgetExceededError& e) {
      CHECK(e.code() == ErrorCode::BudgetExceeded);
      CHECK(e.partial().trace.size() == 2);
    }
    CHECK(naive_run_to_halt(m, 3).halted);
  }
  SUBCASE("spinning without reads trips the guard") {
    TableProgram p;
    p.num_states = 1;
    p.rules.push_back(any(0, 0, Action::write_tape(0, 1)));
    MachineSpec m = to_machine(p);
    m.max_free_actions = 100;
    try {
      naive_run(m, 5);
      FAIL("expected StepLimitExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::StepLimitExceeded);
    }
  }
  SUBCASE("out-of-range address") {
    TableProgram p;
    p.tape_addr_bits = 4;
    p.num_states = 1;
    p.rules.push_back(any(0, 0, Action::read_tape(16)));
    CHECK_THROWS_AS(to_machine(p), Error);
  }
}

TEST_CASE("pointer chase follows the generated table") {
  for (std::uint64_t hops : {1, 5, 64}) {
    for (std::uint64_t seed : {0, 7, 99}) {
      const auto table = genlib::pointer_chase_table(seed);
      const auto m = to_machine(genlib::gen_program({genlib::Family::PointerChase, hops, seed}));
      const auto r = naive_run_to_halt(m, 4 * hops);
      const std::uint8_t q = table.chase(hops);
      CHECK(r.reads == 4 * hops);
      CHECK(r.config.state == genlib::pointer_chase_halt_state(hops, q));
      CHECK(r.output == BitVec{Bit((q >> 3) & 1), Bit((q >> 2) & 1), Bit((q >> 1) & 1), Bit(q & 1)});
    }
  }
  const auto t = genlib::pointer_chase_table(3);
  CHECK(t.chase(1) == t.next[t.start]);
}

TEST_CASE("replay_run") {
  SUBCASE("one read is one pass") {
    const auto m = random_machine(1);
    const auto r = replay_run(m, 1, initial_config(m));
    CHECK(r.report.passes == 1);
    CHECK(r.read_bits.size() == 1);
    CHECK(r.config == naive_run(m, 1).config);
  }
  SUBCASE("write-free program over fresh addresses") {
    std::vector<Action> reads;
    for (Address a = 0; a < 8; ++a) reads.push_back(Action::read_tape(100 + 3 * a));
    const auto m = straight_line(reads);
    const auto r = replay_run(m, 8, initial_config(m));
    CHECK(r.read_bits == BitVec(8, 0));
    CHECK(r.config == naive_run(m, 8).config);
    CHECK(r.report.passes == 8);
  }
  SUBCASE("pointer chase for 16 reads") {
    const auto m = to_machine(genlib::gen_program({genlib::Family::PointerChase, 8, 5}));
    const auto r = replay_run(m, 16, initial_config(m));
    CHECK(r.config == naive_run(m, 16).config);
    CHECK(r.report.peak_bits <= m.internal_bits + 16 + 2 * m.tape_addr_bits);
    CHECK(r.report.live_state_copies == 1);
  }
  SUBCASE("random programs agree with naive_run at every length") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto m = random_machine(seed);
      const auto truth = naive_run(m, 40);
      for (Step t = 0; t <= 40; t += 5) {
        const auto r = replay_run(m, t, initial_config(m));
        REQUIRE(r.config == naive_run(m, t).config);
        std::vector<Bit> expect;
        for (const auto& e : truth.trace) {
          if (e.is_read && e.step < t) expect.push_back(e.bit);
        }
        REQUIRE(r.read_bits == expect);
        REQUIRE(r.report.peak_bits <= m.internal_bits + t + 2 * m.tape_addr_bits);
      }
    }
  }
}

TEST_CASE("block_sim small examples") {
  SUBCASE("a write between two reads is seen by the second") {
    const auto m = straight_line({Action::read_tape(3), Action::write_tape(9, 1), Action::read_tape(9)});
    const auto truth = naive_run(m, 2).config;
    for (unsigned i = 0; i < config_width(m); ++i) {
      BlockSimOptions o;
      o.base_threshold = 2;
      CHECK(block_sim(m, {0, 2}, StateSource::initial(m), StateQuery::config_bit(i), o).value ==
            config_bit(m, truth, i));
    }
  }
  SUBCASE("upper half reading fresh addresses stores zeros") {
    std::vector<Action> acts;
    for (Address a = 0; a < 8; ++a) acts.push_back(Action::read_tape(40 + a));
    const auto m = straight_line(acts);
    BlockSimOptions o;
    o.base_threshold = 2;
    const auto list = build_stored_list(m, StateSource::initial(m), 0, 4, 8, o);
    CHECK(list.entries.size() == 4);
    for (const auto& e : list.entries) CHECK(e.bit == 0);
    CHECK(list.offsets() == std::vector<std::uint64_t>{0, 1, 2, 3});
  }
  SUBCASE("stored list holds first reads of cells not rewritten in b..c") {
    // Reads 0..1 in a..b; b..c writes cell 20 before reading it, then reads 10 twice.
    const auto m = straight_line({Action::write_tape(10, 1), Action::read_tape(1), Action::read_tape(2),
                                  Action::write_tape(20, 1), Action::read_tape(20), Action::read_tape(10),
                                  Action::read_tape(10), Action::read_tape(30)});
    BlockSimOptions o;
    o.base_threshold = 2;
    const auto list = build_stored_list(m, StateSource::initial(m), 0, 2, 6, o);
    CHECK(list.offsets() == std::vector<std::uint64_t>{1, 3});
    CHECK(list.entries[0].bit == 1);
    CHECK(list.entries[1].bit == 0);
    CHECK(verify_stored_list(m, StateSource::initial(m), 0, 2, 6, list, o));
  }
}

TEST_CASE("block_sim tower equivalence on random programs") {
  for (std::uint64_t seed = 100; seed < 116; ++seed) {
    const auto m = random_machine(seed, 8 + seed % 12);
    const Step n = 48;
    const auto truth = naive_run(m, n);
    const auto cells = touched(truth.trace);
    for (Step t : {Step{0}, Step{1}, Step{17}, n}) {
      const auto expect = naive_run(m, t).config;
      const auto tape = tape_at(truth.trace, t);
      for (int variant = 0; variant < 4; ++variant) {
        BlockSimOptions o;
        // Strategy A recomputes per demand, so its recursion stays shallow.
        const Step thresholds[] = {2, 8, 4};
        o.base_threshold = variant == 3 ? std::nullopt : std::optional<Step>(thresholds[variant]);
        o.plan = RamPlan::uniform(variant % 2 ? Strategy::A : Strategy::B);
        o.budget_search = variant == 2;
        const auto full = block_sim(m, {0, t}, StateSource::initial(m), StateQuery::full(), o);
        REQUIRE(full.config == expect);
        REQUIRE(full.report.copies_within_frames);
        REQUIRE(full.report.live_state_copies <= full.report.peak_frames);
        for (unsigned i = 0; i < config_width(m); ++i) {
          REQUIRE(block_sim(m, {0, t}, StateSource::initial(m), StateQuery::config_bit(i), o).value ==
                  config_bit(m, expect, i));
        }
        if (variant == 0 || t == n) {
          for (Address a : cells) {
            auto it = tape.find(a);
            const Bit want = it == tape.end() ? 0 : it->second;
            REQUIRE(block_sim(m, {0, t}, StateSource::initial(m), StateQuery::tape_bit(a), o).value == want);
          }
        }
      }
    }
  }
}

TEST_CASE("block_sim with mixed per-interval strategies") {
  const auto m = random_machine(77, 14);
  const Step n = 64;
  const auto truth = naive_run(m, n).config;
  BlockSimOptions o;
  o.base_threshold = 8;
  o.plan.fallback = Strategy::B;
  o.plan.choices[{0, n}] = Strategy::A;
  o.plan.choices[{32, 64}] = Strategy::A;
  const auto r = block_sim(m, {0, n}, StateSource::initial(m), StateQuery::full(), o);
  CHECK(r.config == truth);
  CHECK(r.report.recompute_count > 0);
  CHECK(r.report.stored_list_bits > 0);
}

TEST_CASE("block_sim on a pointer chase, where every upper read is a stored entry") {
  const auto m = to_machine(genlib::gen_program({genlib::Family::PointerChase, 16, 2}));
  const Step n = 32;
  const auto truth = naive_run(m, n).config;
  BlockSimOptions o;
  o.base_threshold = 8;
  const auto b = block_sim(m, {0, n}, StateSource::initial(m), StateQuery::full(), o);
  CHECK(b.config == truth);
  CHECK(b.report.stored_list_bits > 0);
  o.plan.choices[{0, n}] = Strategy::A;
  o.reverify = false;
  const auto mixed = block_sim(m, {0, n}, StateSource::initial(m), StateQuery::full(), o);
  CHECK(mixed.config == truth);
  CHECK(mixed.report.recompute_count > 0);
}

TEST_CASE("default threshold") {
  const auto m = random_machine(1);
  CHECK(default_base_threshold(m, 256) == 64);
  CHECK(default_base_threshold(m, 64) == 23);
  CHECK(default_base_threshold(m, 1) == 1);
}

TEST_CASE("stored-list guesses: exactly one verifies") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto m = random_machine(seed + 500, 6);
    BlockSimOptions o;
    o.base_threshold = 2;
    const Step a = 0, b = 3, c = 8;
    const auto src = StateSource::initial(m);
    const auto built = build_stored_list(m, src, a, b, c, o);
    const Step span = c - b;
    int verified = 0;
    for (std::uint64_t mask = 0; mask < (1U << span); ++mask) {
      std::vector<std::uint64_t> offsets;
      for (Step i = 0; i < span; ++i) {
        if (mask >> i & 1U) offsets.push_back(i);
      }
      for (std::uint64_t bits = 0; bits < (1U << offsets.size()); ++bits) {
        BitVec bv;
        for (std::size_t i = 0; i < offsets.size(); ++i) bv.push_back(Bit(bits >> i & 1U));
        const auto guess = StoredReadList::from_offsets(offsets, bv);
        if (verify_stored_list(m, src, a, b, c, guess, o)) {
          ++verified;
          CHECK(guess == built);
        }
      }
    }
    CHECK(verified == 1);
  }
}

TEST_CASE("ram_edges") {
  SUBCASE("per access counting") {
    // Write A in 0..1; read A twice in 1..3.
    const auto m = straight_line({Action::write_tape(4, 1), Action::read_tape(0), Action::read_tape(4),
                                  Action::read_tape(4)});
    const auto tr = naive_run(m, 3).trace;
    CHECK(ram_edges(tr, {0, 1}, {1, 3}) == 2);
  }
  SUBCASE("reads after a write in the same interval") {
    const auto m = straight_line({Action::read_tape(0), Action::write_tape(6, 1), Action::read_tape(6)});
    const auto tr = naive_run(m, 2).trace;
    CHECK(ram_edges(tr, {0, 1}, {1, 2}) == 0);
    CHECK(ram_edges(tr, {1, 2}, {1, 2}) == 1);
  }
  SUBCASE("bounds, contraction and the recursive identity") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto m = random_machine(seed + 900, 6 + seed % 20);
      const auto tr = naive_run(m, 256).trace;
      const Step n = naive_run(m, 256).reads;
      for (Step threshold : {Step{2}, Step{5}, Step{16}}) {
        for (Step a = 0; a + 2 <= n; a += 1 + n / 7) {
          for (Step c = a + 2; c <= n; c += 1 + n / 5) {
            const Step b = a + (c - a) / 2;
            const auto whole = ram_edge_total(tr, {a, c}, threshold);
            REQUIRE(whole >= c - a);
            REQUIRE(whole <= 2 * (c - a));
            if (c - a >= threshold) {
              const auto l = ram_edge_total(tr, {a, b}, threshold);
              const auto r = ram_edge_total(tr, {b, c}, threshold);
              REQUIRE(whole == l + r + ram_edges(tr, {a, b}, {b, c}));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("program and trace formats") {
  const auto p = genlib::gen_program({genlib::Family::PointerChase, 3, 11});
  const std::string text = write_program(p);
  CHECK(parse_program(text) == p);
  CHECK(write_program(parse_program(text)) == text);

  const auto tr = naive_run(to_machine(p), 100).trace;
  CHECK(parse_trace_jsonl(write_trace_jsonl(tr)) == tr);
  CHECK(write_trace_jsonl({TraceEvent{3, true, 9, 1}}) == "{\"step\":3,\"op\":\"R\",\"addr\":9,\"bit\":1}\n");

  CHECK_THROWS_AS(parse_program("{\"schema\":2}"), Error);
  CHECK_THROWS_AS(parse_program("not json"), Error);
  TableProgram partial;
  partial.num_states = 2;
  partial.rules.push_back(any(0, 1, Action::read_tape(0)));
  CHECK_THROWS_AS(to_machine(partial), Error);
  partial.halt_on_missing = true;
  CHECK_NOTHROW(to_machine(partial));
  partial.rules.push_back(any(0, 1, Action::read_tape(1)));
  CHECK_THROWS_AS(to_machine(partial), Error);
}

TEST_CASE("report JSON is schema-versioned") {
  const auto m = random_machine(3);
  const auto r = block_sim(m, {0, 16}, StateSource::initial(m), StateQuery::full());
  const std::string json = to_json(r.report);
  CHECK(json.rfind("{\"schema\":1,", 0) == 0);
  CHECK(json.find("\"stored_list_bits\"") != std::string::npos);
  CHECK(json.find("\"unwritten_reads\":\"edge_from_step_0\"") != std::string::npos);
}
