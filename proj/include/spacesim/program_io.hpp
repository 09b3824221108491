#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spacesim/ramsim.hpp"

namespace spacesim::ramsim {

/// Which delivered bit a rule applies to: none (previous action was not a
/// read), 0, 1, or any of the three.
enum class LastMatch : std::uint8_t { None, Zero, One, Any };

struct Rule {
  std::uint64_t state = 0;
  LastMatch last = LastMatch::Any;
  std::uint64_t next = 0;
  Action action;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Table-driven machine. A rule for a specific last bit takes precedence
/// over a `*` rule of the same state.
struct TableProgram {
  std::string name;
  Rational delta{1, 2};
  unsigned tape_addr_bits = 16;
  BitVec input;
  std::uint64_t initial_state = 0;
  std::uint64_t num_states = 1;
  /// Unmatched (state, last) pairs halt with empty output instead of being
  /// rejected as a partial table.
  bool halt_on_missing = false;
  /// Reads within which the program is known to halt, if it does.
  std::optional<std::uint64_t> time_budget;
  std::vector<Rule> rules;

  friend bool operator==(const TableProgram&, const TableProgram&) = default;
};

/// Checks the table (determinism, totality, ranges) and compiles it.
MachineSpec to_machine(const TableProgram& program);

// JSON document, schema 1:
//   {"schema":1, "name":..., "delta":"1/2", "tape_addr_bits":16, "input":"0110",
//    "initial_state":0, "states":N, "missing":"halt"|"error", "budget":B,
//    "rules":[{"state":s, "last":"-"|"0"|"1"|"*", "next":t,
//              "op":"R","addr":x | "op":"W","addr":x,"bit":b | "op":"I","pos":p |
//              "op":"H","out":"0101"}, ...]}
TableProgram parse_program(std::string_view json_text);
TableProgram read_program_file(const std::string& path);
std::string write_program(const TableProgram& program);

/// One JSON object per line: {"step":s,"op":"R"|"W","addr":x,"bit":b}.
std::string write_trace_jsonl(const std::vector<TraceEvent>& trace);
std::vector<TraceEvent> parse_trace_jsonl(std::string_view text);

}  // namespace spacesim::ramsim
