// Acceptance harness: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,2,...] [--known-fail 4,...]
//
// Exit status is the number of failing criteria that were not declared
// known failures. Known failures still print FAIL.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spacesim/blockeval.hpp"
#include "spacesim/circuit.hpp"
#include "spacesim/genlib.hpp"
#include "spacesim/program_io.hpp"
#include "spacesim/ramsim.hpp"
#include "spacesim/stored_list.hpp"

using namespace spacesim;
using genlib::Family;
using genlib::SplitMix64;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

BitVec random_bits(SplitMix64& rng, std::size_t n) {
  BitVec v(n);
  for (auto& b : v) b = static_cast<Bit>(rng.below(2));
  return v;
}

circuit::Circuit random_circuit(SplitMix64& rng, std::uint64_t max_gates) {
  // Mostly random layered circuits, with some structured ones mixed in.
  switch (rng.below(8)) {
    case 0: {
      const auto leaves = 1 + rng.below((max_gates + 4) / 5);
      return genlib::gen_circuit({Family::ParityTree, leaves, 0});
    }
    case 1: {
      const auto width = 1 + rng.below(std::min<std::uint64_t>(max_gates / 10, 64));
      return genlib::gen_circuit({Family::RippleAdder, width, 0});
    }
    default:
      return genlib::gen_circuit({Family::RandomLayered, 1 + rng.below(max_gates), rng.next()});
  }
}

// ---------------------------------------------------------------------------

Verdict circuits_oracle() {
  const auto t0 = Clock::now();
  SplitMix64 rng(1001);
  const int trials = 1000;
  int agree = 0;
  std::uint64_t over_model = 0, largest = 0;
  for (int t = 0; t < trials; ++t) {
    const auto c = random_circuit(rng, 4096);
    const auto in = random_bits(rng, c.num_inputs());
    const auto g = static_cast<circuit::GateIndex>(rng.below(c.size()));
    const auto model = blockeval::SpaceModel::defaults_for(c.size());
    const auto plan =
        blockeval::plan_optimal(c, {0, c.size()}, model, blockeval::SplitPolicy::Midpoint);
    const auto r = blockeval::eval_with_plan(c, in, plan, g, model);
    agree += r.value == circuit::naive_eval(c, in)[g];
    over_model += r.report.peak_stored_bits > blockeval::model_space(c, plan, model);
    largest = std::max<std::uint64_t>(largest, c.size());
  }
  const double secs = seconds_since(t0);
  return {agree == trials && secs < 300.0,
          fmt("%d/%d agree, largest %llu gates, %llu runs above modeled space, %.1f s", agree, trials,
              (unsigned long long)largest, (unsigned long long)over_model, secs)};
}

Verdict deepening_oracle() {
  const auto t0 = Clock::now();
  SplitMix64 rng(2002);
  const int trials = 100;
  int agree = 0, within = 0;
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const auto c = random_circuit(rng, 256);
    const auto in = random_bits(rng, c.num_inputs());
    const auto g = c.output_gate();
    auto model = blockeval::SpaceModel::defaults_for(c.size());
    model.frame_overhead_bits = 0;
    const auto optimum = blockeval::model_space(
        c, blockeval::plan_optimal(c, {0, c.size()}, model, blockeval::SplitPolicy::Midpoint), model);
    const auto r = blockeval::eval_deepening(c, in, g, blockeval::SplitPolicy::Midpoint, model);
    agree += r.value == circuit::naive_eval(c, in)[g];
    within += r.report.budget <= 2 * optimum;
    worst = std::max(worst, double(r.report.budget) / double(optimum));
  }
  const double secs = seconds_since(t0);
  return {agree == trials && within == trials && secs < 600.0,
          fmt("%d/%d agree, %d/%d budgets within 2x the optimal model (worst %.2fx), %.1f s", agree,
              trials, within, trials, worst, secs)};
}

Verdict edge_identities() {
  SplitMix64 rng(3003);
  const int pairs = 10000;
  int violations = 0;
  double worst_cross = 0;
  circuit::Circuit c = random_circuit(rng, 2048);
  for (int t = 0; t < pairs; ++t) {
    if (t % 50 == 0) c = random_circuit(rng, 2048);
    const auto n = c.size();
    std::size_t p[4];
    for (auto& x : p) x = rng.below(n + 1);
    std::sort(p, p + 4);
    const auto [a, b, x, d] = std::tuple{p[0], p[1], p[2], p[3]};
    const auto whole = circuit::count_interval_edges(c, a, x).total();
    const auto parts = circuit::count_interval_edges(c, a, b).total() +
                       circuit::count_interval_edges(c, b, x).total() +
                       circuit::count_cross_edges(c, a, b, b, x).functional;
    violations += whole != parts;
    const auto cross = circuit::count_cross_edges(c, a, b, x, d).functional;
    violations += cross > 3 * (d - x);
    if (d > x) worst_cross = std::max(worst_cross, double(cross) / double(d - x));
  }
  return {violations == 0, fmt("%d pairs, %d violations, largest Edges(a..b,c..d)/(d-c) = %.2f",
                               pairs, violations, worst_cross)};
}

Verdict scaling_trend() {
  const auto t0 = Clock::now();
  std::vector<double> ratio, density;
  std::string rows;
  double last_plan_secs = 0;
  for (unsigned e : {10U, 12U, 14U, 16U, 18U}) {
    const auto view = genlib::parity_tree_view(std::uint64_t{1} << e);
    const auto n = view.size();
    const auto model = blockeval::SpaceModel::defaults_for(n);
    const auto tp = Clock::now();
    const auto plan = blockeval::plan_optimal(view, {0, n}, model, blockeval::SplitPolicy::Midpoint);
    last_plan_secs = seconds_since(tp);
    const auto space = blockeval::model_space(view, plan, model);
    density.push_back(double(space) / double(n));
    ratio.push_back(double(space) * std::log2(double(n)) / double(n));
    rows += fmt(" 2^%u:%llu/%zu", e, (unsigned long long)space, n);
  }
  const double spread = *std::max_element(ratio.begin(), ratio.end()) /
                        *std::min_element(ratio.begin(), ratio.end());
  bool decreasing = true;
  for (std::size_t i = 1; i < density.size(); ++i) decreasing &= density[i] < density[i - 1];
  return {spread <= 2.0 && decreasing && last_plan_secs < 300.0,
          fmt("space*log2(n)/n spread %.1fx (limit 2), space/n %s, planner %.2f s at 2^18, total %.1f s;",
              spread, decreasing ? "strictly decreasing" : "not decreasing", last_plan_secs,
              seconds_since(t0)) +
              rows};
}

Verdict epsilon_check() {
  bool ok = true;
  std::string detail;
  for (const auto& [name, k] : {std::pair{"1/2", 0.5}, {"2/3", 2.0 / 3.0}, {"5/6", 5.0 / 6.0}}) {
    const auto eps = blockeval::epsilon_iterate(1.0, k, 64);
    double worst = 0;
    for (std::size_t i = 1; i < eps.size(); ++i) {
      ok &= eps[i] < eps[i - 1];
      worst = std::max(worst, double(i) * eps[i]);
    }
    ok &= worst <= 10.0;
    detail += fmt("k=%s: eps_64=%.4f max i*eps_i=%.3f; ", name, eps.back(), worst);
  }
  return {ok, detail};
}

std::map<ramsim::Address, Bit> tape_at(const std::vector<ramsim::TraceEvent>& trace, ramsim::Step t) {
  std::map<ramsim::Address, Bit> tape;
  for (const auto& e : trace) {
    if (e.step >= t) break;
    if (!e.is_read) tape[e.addr] = e.bit;
  }
  return tape;
}

Verdict ram_tower() {
  const auto t0 = Clock::now();
  SplitMix64 rng(6006);
  const int programs = 100;
  int agree = 0, bound_ok = 0;
  std::uint64_t probes = 0, bit_queries = 0;
  for (int p = 0; p < programs; ++p) {
    const auto m = ramsim::to_machine(
        genlib::gen_program({Family::RandomProgram, 4 + rng.below(24), rng.next()}));
    const ramsim::Step steps = 1 + rng.below(256);
    const auto truth = ramsim::naive_run(m, steps);
    std::set<ramsim::Step> times{0, 1, steps / 3, steps / 2, steps};
    times.insert(rng.below(steps + 1));
    bool ok = true, bound = true;
    for (const ramsim::Step t : times) {
      ++probes;
      const auto expect = ramsim::naive_run(m, t).config;
      const auto replay = ramsim::replay_run(m, t, ramsim::initial_config(m));
      ok &= replay.config == expect;
      bound &= replay.report.peak_bits <= m.internal_bits + t + 2 * m.tape_addr_bits;

      ramsim::BlockSimOptions o;
      const auto src = ramsim::StateSource::initial(m);
      ok &= ramsim::block_sim(m, {0, t}, src, ramsim::StateQuery::full(), o).config == expect;
      // One alternative per program: strategy A, budget search, or a deep B tree.
      ramsim::BlockSimOptions alt;
      switch (p % 3) {
        case 0: alt.plan = ramsim::RamPlan::uniform(blockeval::Strategy::A); break;
        case 1: alt.budget_search = true; break;
        default: alt.base_threshold = 4; break;
      }
      ok &= ramsim::block_sim(m, {0, t}, src, ramsim::StateQuery::full(), alt).config == expect;
      if (t == steps) {
        for (unsigned i = 0; i < ramsim::config_width(m); ++i) {
          ++bit_queries;
          ok &= ramsim::block_sim(m, {0, t}, src, ramsim::StateQuery::config_bit(i), o).value ==
                ramsim::config_bit(m, expect, i);
        }
        const auto tape = tape_at(truth.trace, t);
        std::set<ramsim::Address> cells;
        for (const auto& e : truth.trace) cells.insert(e.addr);
        for (const auto a : cells) {
          ++bit_queries;
          const auto it = tape.find(a);
          const Bit want = it == tape.end() ? 0 : it->second;
          ok &= ramsim::block_sim(m, {0, t}, src, ramsim::StateQuery::tape_bit(a), o).value == want;
        }
      }
    }
    agree += ok;
    bound_ok += bound;
  }
  const double secs = seconds_since(t0);
  return {agree == programs && bound_ok == programs && secs < 900.0,
          fmt("%d/%d programs agree over %llu probed times and %llu single-bit queries, "
              "replay bound held for %d/%d, %.1f s",
              agree, programs, (unsigned long long)probes, (unsigned long long)bit_queries, bound_ok,
              programs, secs)};
}

// Independent count of Edges(a..c): one self edge per read, plus one for each
// read whose last write (step 0 if never written) lies in a..c but in a
// different leaf of the midpoint recursion.
std::uint64_t edges_by_leaves(const std::vector<ramsim::TraceEvent>& trace, ramsim::StepInterval iv,
                              ramsim::Step threshold) {
  auto leaf_of = [&](ramsim::Step s) {
    ramsim::StepInterval cur = iv;
    while (!(cur.size() < threshold || cur.size() < 2)) {
      const auto b = cur.a + cur.size() / 2;
      cur = s < b ? ramsim::StepInterval{cur.a, b} : ramsim::StepInterval{b, cur.c};
    }
    return cur;
  };
  std::map<ramsim::Address, ramsim::Step> last_write;
  std::uint64_t total = iv.size();
  for (const auto& e : trace) {
    if (!e.is_read) {
      last_write[e.addr] = e.step;
      continue;
    }
    if (e.step < iv.a || e.step >= iv.c) continue;
    const auto it = last_write.find(e.addr);
    const ramsim::Step w = it == last_write.end() ? 0 : it->second;
    if (w >= iv.a && w < iv.c && leaf_of(w) != leaf_of(e.step)) ++total;
  }
  return total;
}

Verdict ram_edges() {
  SplitMix64 rng(7007);
  std::vector<std::pair<ramsim::MachineSpec, std::vector<ramsim::TraceEvent>>> traces;
  for (int p = 0; p < 100; ++p) {
    auto m = ramsim::to_machine(
        genlib::gen_program({Family::RandomProgram, 4 + rng.below(24), rng.next()}));
    auto trace = ramsim::naive_run(m, 1 + rng.below(512)).trace;
    traces.emplace_back(std::move(m), std::move(trace));
  }
  for (std::uint64_t n = 1; n <= 16; ++n) {
    for (auto f : {Family::PointerChase, Family::BitReversalCopy}) {
      if (f == Family::BitReversalCopy && n > 10) continue;
      const auto prog = genlib::gen_program({f, n, n * 31});
      auto m = ramsim::to_machine(prog);
      auto trace = ramsim::naive_run(m, *prog.time_budget).trace;
      traces.emplace_back(std::move(m), std::move(trace));
    }
  }
  int bounds = 0, identity = 0, contraction = 0;
  double worst = 0;
  std::uint64_t nodes = 0;
  for (const auto& [spec, tr] : traces) {
    ramsim::Step reads = 0;
    for (const auto& e : tr) reads += e.is_read;
    if (reads == 0) continue;
    const ramsim::Step thr_default = ramsim::default_base_threshold(spec, reads);
    for (const ramsim::Step thr : {ramsim::Step{1}, ramsim::Step{2}, ramsim::Step{8}, thr_default}) {
      // Every node of the midpoint recursion.
      std::function<void(ramsim::StepInterval)> visit = [&](ramsim::StepInterval iv) {
        ++nodes;
        const auto e = ramsim::ram_edge_total(tr, iv, thr);
        if (e < iv.size() || e > 2 * iv.size()) ++bounds;
        if (e != edges_by_leaves(tr, iv, thr)) ++identity;
        if (iv.size() < thr || iv.size() < 2) return;
        const auto b = iv.a + iv.size() / 2;
        const auto sub = std::max(ramsim::ram_edge_total(tr, {iv.a, b}, thr),
                                  ramsim::ram_edge_total(tr, {b, iv.c}, thr));
        // Odd lengths split unevenly; the factor is checked once halves are near equal.
        if (iv.size() >= 16) {
          const double factor = double(sub) / double(e);
          worst = std::max(worst, factor);
          if (factor > 2.0 / 3.0 + 0.05) ++contraction;
        }
        visit({iv.a, b});
        visit({b, iv.c});
      };
      visit({0, reads});
    }
  }
  return {bounds == 0 && identity == 0 && contraction == 0,
          fmt("%zu traces, %llu recursion nodes: %d bound, %d identity, %d contraction violations, "
              "worst contraction %.3f",
              traces.size(), (unsigned long long)nodes, bounds, identity, contraction, worst)};
}

Verdict codec() {
  SplitMix64 rng(8008);
  int lossy = 0;
  for (int t = 0; t < 10000; ++t) {
    ramsim::StoredReadList l;
    const auto max_gap = std::uint64_t{1} << rng.below(32);
    const auto entries = rng.below(64);
    for (std::uint64_t i = 0; i < entries; ++i) {
      l.entries.push_back({rng.below(max_gap + 1), static_cast<Bit>(rng.below(2))});
    }
    lossy += !(ramsim::decode(ramsim::encode(l)) == l);
  }
  bool ok = lossy == 0;
  std::string detail = fmt("10000 lists, %d lossy; bits/entry:", lossy);
  for (std::uint64_t inv : {4, 16, 64}) {
    const std::uint64_t span = 1 << 18;
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      std::set<std::uint64_t> picked;
      while (picked.size() < span / inv) picked.insert(rng.below(span));
      const std::vector<std::uint64_t> offsets(picked.begin(), picked.end());
      const auto l = ramsim::StoredReadList::from_offsets(offsets, random_bits(rng, offsets.size()));
      worst = std::max(worst, double(ramsim::encode(l).total_bits()) / double(offsets.size()));
    }
    const double limit = std::log2(double(inv)) + 3.5;
    ok &= worst <= limit;
    detail += fmt(" d=1/%llu %.3f (limit %.1f)", (unsigned long long)inv, worst, limit);
  }
  return {ok, detail};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string only, known;
  app.add_option("--only", only, "Comma-separated criteria to run");
  app.add_option("--known-fail", known, "Criteria expected to fail");
  CLI11_PARSE(app, argc, argv);
  const auto selected = parse_list(only);
  const auto known_fail = parse_list(known);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"oracle equivalence, circuits", circuits_oracle},
      {"oracle equivalence, deepening", deepening_oracle},
      {"edge identities", edge_identities},
      {"space-model scaling trend", scaling_trend},
      {"epsilon recurrence", epsilon_check},
      {"RAM simulator tower", ram_tower},
      {"RAM edge properties", ram_edges},
      {"stored-list codec", codec},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto v = criteria[i].second();
    const bool expected = known_fail.count(id) > 0;
    if (!v.pass && !expected) ++unexpected;
    std::printf("%s %d %s: %s%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first, v.detail.c_str(),
                !v.pass && expected ? " [known failure]" : "");
    std::fflush(stdout);
  }
  return unexpected;
}
