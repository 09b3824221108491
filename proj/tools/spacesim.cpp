#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spacesim/blockeval.hpp"
#include "spacesim/circuit_io.hpp"
#include "spacesim/genlib.hpp"
#include "spacesim/program_io.hpp"
#include "spacesim/ramsim.hpp"

using namespace spacesim;
using json = nlohmann::ordered_json;

namespace {

enum class Format { Json, Csv };

struct ModelFlags {
  std::optional<std::size_t> base_threshold;
  std::optional<std::uint64_t> overhead;
  std::string split = "midpoint";

  blockeval::SpaceModel model_for(std::size_t gates) const {
    auto m = blockeval::SpaceModel::defaults_for(gates);
    if (base_threshold) m.base_threshold = std::max<std::size_t>(*base_threshold, 1);
    if (overhead) m.frame_overhead_bits = *overhead;
    return m;
  }
  blockeval::SplitPolicy policy() const {
    return split == "search" ? blockeval::SplitPolicy::SearchAll : blockeval::SplitPolicy::Midpoint;
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--split", split, "Split points: midpoint or search")
        ->check(CLI::IsMember({"midpoint", "search"}));
    cmd->add_option("--base-threshold", base_threshold, "Largest interval evaluated directly");
    cmd->add_option("--overhead", overhead, "Bits charged per recursion frame");
  }
};

void add_format(CLI::App* cmd, Format& format) {
  cmd->add_option("--format", format, "Report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"json", Format::Json}, {"csv", Format::Csv}}));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

// "1024", "2^10" or "1<<10".
std::uint64_t parse_size(const std::string& text) {
  auto number = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (s.empty() || used != s.size()) throw Error(ErrorCode::ParseError, "bad size '" + text + "'");
    return v;
  };
  for (const std::string sep : {"^", "<<"}) {
    if (const auto at = text.find(sep); at != std::string::npos) {
      const auto lhs = number(text.substr(0, at));
      const auto rhs = number(text.substr(at + sep.size()));
      if (rhs > 40) throw Error(ErrorCode::ParseError, "size too large: " + text);
      std::uint64_t v = 1;
      for (std::uint64_t i = 0; i < rhs; ++i) v *= sep == "^" ? lhs : 2;
      return sep == "^" ? v : lhs * v;
    }
  }
  return number(text);
}

std::vector<std::uint64_t> parse_sizes(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(parse_size(item));
  }
  return out;
}

void print_eval(Format format, Bit value, const blockeval::SpaceReport* report) {
  if (format == Format::Csv) {
    std::cout << "value";
    if (report) std::cout << ",peak_stored_bits,peak_frames,recompute_count,gate_evaluations,budget";
    std::cout << "\n" << int(value);
    if (report) {
      std::cout << "," << report->peak_stored_bits << "," << report->peak_frames << ","
                << report->recompute_count << "," << report->gate_evaluations << "," << report->budget;
    }
    std::cout << "\n";
    return;
  }
  std::cout << int(value) << "\n";
  if (report) std::cout << blockeval::to_json(*report) << "\n";
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string circuit_path;
  std::string input;
  std::optional<std::uint64_t> gate;
  std::string mode = "naive";
  std::string plan_path;
  std::string schedule = "doubling";
  std::optional<std::uint64_t> step_limit;
  ModelFlags model;
  Format format = Format::Json;
};

int cmd_eval(const EvalArgs& args) {
  const auto c = circuit::read_circuit_file(args.circuit_path);
  circuit::require_valid(c);
  const BitVec in = parse_bits(args.input);
  const auto g = static_cast<circuit::GateIndex>(args.gate.value_or(c.output_gate()));
  if (g >= c.size()) throw Error(ErrorCode::GateOutOfPlan, "gate " + std::to_string(g) + " out of range");
  if (args.mode == "naive") {
    print_eval(args.format, circuit::naive_eval(c, in)[g], nullptr);
    return 0;
  }
  const auto m = args.model.model_for(c.size());
  if (args.mode == "plan") {
    const auto plan = args.plan_path.empty()
                          ? blockeval::plan_optimal(c, {0, c.size()}, m, args.model.policy())
                          : blockeval::read_plan_file(args.plan_path);
    blockeval::ExecOptions o;
    if (args.step_limit) o.step_limit = *args.step_limit;
    const auto r = blockeval::eval_with_plan(c, in, plan, g, m, o);
    print_eval(args.format, r.value, &r.report);
    return 0;
  }
  blockeval::DeepeningOptions o;
  if (args.step_limit) o.step_limit = *args.step_limit;
  if (args.schedule == "increment") o.schedule = blockeval::BudgetSchedule::Increment;
  const auto r = blockeval::eval_deepening(c, in, g, args.model.policy(), m, o);
  print_eval(args.format, r.value, &r.report);
  return 0;
}

struct PlanArgs {
  std::string circuit_path;
  std::string out;
  ModelFlags model;
  Format format = Format::Json;
};

int cmd_plan(const PlanArgs& args) {
  const auto c = circuit::read_circuit_file(args.circuit_path);
  circuit::require_valid(c);
  const auto m = args.model.model_for(c.size());
  const auto plan = blockeval::plan_optimal(c, {0, c.size()}, m, args.model.policy());
  const auto space = blockeval::model_space(c, plan, m);
  const auto depth = plan.depth();
  const auto eps = blockeval::epsilon_iterate(to_double(m.epsilon), to_double(m.k),
                                              static_cast<int>(depth));
  if (args.out.empty()) {
    std::cout << blockeval::write_plan(plan);
  } else {
    write_text(args.out, blockeval::write_plan(plan));
  }
  if (args.format == Format::Csv) {
    std::cout << "gates,model_space,depth,epsilon_final\n"
              << c.size() << "," << space << "," << depth << "," << eps.back() << "\n";
    return 0;
  }
  json j;
  j["schema"] = 1;
  j["gates"] = c.size();
  j["model_space"] = space;
  j["direct_bits"] = c.size() + m.frame_overhead_bits;
  j["depth"] = depth;
  j["epsilon"] = eps;
  std::cout << j.dump() << "\n";
  return 0;
}

struct SweepArgs {
  std::string family;
  std::string sizes;
  std::uint64_t seed = 0;
  std::string out;
  ModelFlags model;
  Format format = Format::Csv;
};

int cmd_sweep(const SweepArgs& args) {
  const auto family = genlib::parse_family(args.family);
  if (!genlib::is_circuit_family(family)) {
    throw Error(ErrorCode::BadFamily, std::string(genlib::to_string(family)) + " is not a circuit family");
  }
  std::ostringstream csv;
  json rows = json::array();
  csv << "n,gates,direct_bits,model_space,ratio\n";
  for (const auto n : parse_sizes(args.sizes)) {
    // The view borrows the gates, so a generated circuit must outlive it.
    std::optional<circuit::Circuit> owned;
    if (family != genlib::Family::ParityTree) owned = genlib::gen_circuit({family, n, args.seed});
    const circuit::CircuitView c = owned ? circuit::CircuitView(*owned) : genlib::parity_tree_view(n);
    const auto m = args.model.model_for(c.size());
    const auto plan = blockeval::plan_optimal(c, {0, c.size()}, m, args.model.policy());
    const auto space = blockeval::model_space(c, plan, m);
    const auto gates = c.size();
    const std::uint64_t direct = gates + m.frame_overhead_bits;
    const double ratio = double(space) * std::log2(double(gates)) / double(gates);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", ratio);
    csv << n << "," << gates << "," << direct << "," << space << "," << buf << "\n";
    rows.push_back({{"n", n}, {"gates", gates}, {"direct_bits", direct}, {"model_space", space},
                    {"ratio", ratio}});
  }
  std::string text = csv.str();
  if (args.format == Format::Json) {
    json j;
    j["schema"] = 1;
    j["family"] = genlib::to_string(family);
    j["rows"] = rows;
    text = j.dump() + "\n";
  }
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_text(args.out, text);
  }
  return 0;
}

struct RamArgs {
  std::string program_path;
  std::uint64_t steps = 0;
  std::string mode = "naive";
  std::string query = "full";
  std::optional<std::uint64_t> base_threshold;
  std::string strategy = "B";
  bool search = false;
  bool no_reverify = false;
  std::optional<std::uint64_t> transition_limit;
  Format format = Format::Json;
};

ramsim::StateQuery parse_query(const std::string& q) {
  if (q == "full") return ramsim::StateQuery::full();
  const auto colon = q.find(':');
  if (colon != std::string::npos) {
    const auto kind = q.substr(0, colon);
    const auto value = parse_size(q.substr(colon + 1));
    if (kind == "state") return ramsim::StateQuery::config_bit(static_cast<unsigned>(value));
    if (kind == "tape") return ramsim::StateQuery::tape_bit(value);
  }
  // A bare number is a state bit index.
  return ramsim::StateQuery::config_bit(static_cast<unsigned>(parse_size(q)));
}

std::string answer_text(const ramsim::MachineSpec& spec, const ramsim::StateQuery& q,
                        const ramsim::Config& config, Bit value) {
  if (q.kind == ramsim::StateQuery::Kind::Full) return format_bits(ramsim::config_bits(spec, config));
  return std::to_string(int(value));
}

void print_ram(Format format, const std::string& answer, const ramsim::RamSpaceReport* report) {
  if (format == Format::Csv) {
    std::cout << "state";
    if (report) {
      std::cout << ",peak_bits,live_state_copies,stored_list_bits,peak_frames,recompute_count,"
                   "passes,runs,transitions";
    }
    std::cout << "\n" << answer;
    if (report) {
      std::cout << "," << report->peak_bits << "," << report->live_state_copies << ","
                << report->stored_list_bits << "," << report->peak_frames << ","
                << report->recompute_count << "," << report->passes << "," << report->runs << ","
                << report->transitions;
    }
    std::cout << "\n";
    return;
  }
  std::cout << answer << "\n";
  if (report) std::cout << ramsim::to_json(*report) << "\n";
}

int cmd_ram(const RamArgs& args) {
  const auto program = ramsim::read_program_file(args.program_path);
  const auto spec = ramsim::to_machine(program);
  const auto q = parse_query(args.query);
  if (q.kind == ramsim::StateQuery::Kind::ConfigBit && q.index >= ramsim::config_width(spec)) {
    throw Error(ErrorCode::ParseError, "state bit " + std::to_string(q.index) + " out of range (width " +
                                           std::to_string(ramsim::config_width(spec)) + ")");
  }
  if (args.mode == "naive") {
    const auto r = ramsim::naive_run(spec, args.steps);
    Bit value = 0;
    if (q.kind == ramsim::StateQuery::Kind::ConfigBit) {
      value = ramsim::config_bit(spec, r.config, static_cast<unsigned>(q.index));
    } else if (q.kind == ramsim::StateQuery::Kind::TapeBit) {
      for (const auto& e : r.trace) {
        if (!e.is_read && e.addr == q.index) value = e.bit;
      }
    }
    print_ram(args.format, answer_text(spec, q, r.config, value), nullptr);
    return 0;
  }
  ramsim::BlockSimOptions o;
  o.plan = ramsim::RamPlan::uniform(args.strategy == "A" ? blockeval::Strategy::A : blockeval::Strategy::B);
  o.budget_search = args.search;
  o.reverify = !args.no_reverify;
  if (args.transition_limit) o.transition_limit = *args.transition_limit;
  if (args.mode == "replay") {
    // A threshold above the interval length makes the root a single replay frame.
    o.base_threshold = args.steps + 1;
  } else if (args.base_threshold) {
    o.base_threshold = *args.base_threshold;
  }
  const auto r = ramsim::block_sim(spec, {0, args.steps}, ramsim::StateSource::initial(spec), q, o);
  print_ram(args.format, answer_text(spec, q, r.config, r.value), &r.report);
  return 0;
}

struct GenArgs {
  std::string family;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string input;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  genlib::GenSpec g{genlib::parse_family(args.family), args.n, args.seed, std::nullopt};
  if (!args.input.empty()) g.input = parse_bits(args.input);
  const std::string text = genlib::is_circuit_family(g.family)
                               ? circuit::write_circuit(genlib::gen_circuit(g))
                               : ramsim::write_program(genlib::gen_program(g));
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_text(args.out, text);
  }
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::StepLimitExceeded:
    case ErrorCode::BudgetExceeded:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-metered circuit evaluation and RAM simulation"};
  app.require_subcommand(1);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate one gate of a circuit");
  e->add_option("circuit", eval.circuit_path, "Circuit file")->required();
  e->add_option("input", eval.input, "Input bits, e.g. 0110")->required();
  e->add_option("--gate", eval.gate, "Queried gate (default: the output gate)");
  e->add_option("--mode", eval.mode)->check(CLI::IsMember({"naive", "plan", "deepening"}));
  e->add_option("--plan", eval.plan_path, "Plan file for --mode plan (default: optimal plan)");
  e->add_option("--schedule", eval.schedule, "Deepening budgets")
      ->check(CLI::IsMember({"doubling", "increment"}));
  e->add_option("--step-limit", eval.step_limit, "Abort after this many gate evaluations");
  eval.model.add_to(e);
  add_format(e, eval.format);

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Compute a space-optimal plan");
  p->add_option("circuit", plan.circuit_path, "Circuit file")->required();
  p->add_option("--out", plan.out, "Write the plan here instead of stdout");
  plan.model.add_to(p);
  add_format(p, plan.format);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Modeled space across sizes of a circuit family");
  s->add_option("--family", sweep.family)->required();
  s->add_option("--sizes", sweep.sizes, "Comma-separated sizes; 2^k accepted");
  s->add_option("--seed", sweep.seed);
  s->add_option("--out", sweep.out, "Write the table here instead of stdout");
  sweep.model.add_to(s);
  add_format(s, sweep.format);

  RamArgs ram;
  auto* r = app.add_subcommand("ram", "Simulate a RAM program");
  r->add_option("program", ram.program_path, "Program file (JSON)")->required();
  r->add_option("--steps", ram.steps, "Reads to simulate")->required();
  r->add_option("--mode", ram.mode)->check(CLI::IsMember({"naive", "replay", "block"}));
  r->add_option("--query", ram.query, "full, state:<i> or tape:<addr>");
  r->add_option("--base-threshold", ram.base_threshold, "Shortest interval that is split");
  r->add_option("--strategy", ram.strategy)->check(CLI::IsMember({"A", "B"}));
  r->add_flag("--search", ram.search, "Search strategies under growing budgets");
  r->add_flag("--no-reverify", ram.no_reverify, "Trust stored entries once computed");
  r->add_option("--transition-limit", ram.transition_limit, "Abort after this many transitions");
  add_format(r, ram.format);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a generated circuit or program");
  g->add_option("--family", gen.family)->required();
  g->add_option("--n", gen.n)->required();
  g->add_option("--seed", gen.seed);
  g->add_option("--input", gen.input, "Input bits for program families");
  g->add_option("--out", gen.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*e) return cmd_eval(eval);
    if (*p) return cmd_plan(plan);
    if (*s) return cmd_sweep(sweep);
    if (*r) return cmd_ram(ram);
    if (*g) return cmd_gen(gen);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code(err.code());
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
