#include "spacesim/program_io.hpp"

#include <fstream>
#include <json.hpp>
#include <memory>
#include <sstream>

namespace spacesim::ramsim {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_machine(const std::string& what) { throw Error(ErrorCode::BadMachine, what); }
[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

int slot(std::optional<Bit> last) { return last ? 1 + *last : 0; }

const char* last_name(LastMatch m) {
  switch (m) {
    case LastMatch::None: return "-";
    case LastMatch::Zero: return "0";
    case LastMatch::One: return "1";
    case LastMatch::Any: return "*";
  }
  return "*";
}

LastMatch parse_last(const std::string& s) {
  if (s == "-") return LastMatch::None;
  if (s == "0") return LastMatch::Zero;
  if (s == "1") return LastMatch::One;
  if (s == "*") return LastMatch::Any;
  parse_error("rule field \"last\" must be one of - 0 1 *, got \"" + s + "\"");
}

template <class T>
T field(const ordered_json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) parse_error(where + ": missing field \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_error(where + ": field \"" + key + "\" has the wrong type");
  }
}

}  // namespace

MachineSpec to_machine(const TableProgram& p) {
  if (p.num_states == 0) bad_machine("program has no states");
  if (p.initial_state >= p.num_states) bad_machine("initial state out of range");
  if (p.tape_addr_bits == 0 || p.tape_addr_bits > 64) bad_machine("tape_addr_bits must be in 1..64");
  if (p.num_states > (std::uint64_t{1} << 26)) bad_machine("state table too large");

  // Dense (state, slot) -> rule index; -1 means unmatched. Specific rules
  // are placed after `*` rules so they win.
  auto table = std::make_shared<std::vector<std::int64_t>>(p.num_states * 3, -1);
  std::vector<std::uint8_t> specific(p.num_states * 3, 0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t r = 0; r < p.rules.size(); ++r) {
      const Rule& rule = p.rules[r];
      const bool any = rule.last == LastMatch::Any;
      if (any != (pass == 0)) continue;
      const std::string where = "rule " + std::to_string(r);
      if (rule.state >= p.num_states) bad_machine(where + ": state out of range");
      if (rule.next >= p.num_states) bad_machine(where + ": next state out of range");
      const Action& a = rule.action;
      if ((a.kind == ActionKind::ReadTape || a.kind == ActionKind::WriteTape) &&
          p.tape_addr_bits < 64 && (a.addr >> p.tape_addr_bits) != 0) {
        bad_machine(where + ": tape address out of range");
      }
      if (a.kind == ActionKind::ReadInput && a.addr >= p.input.size()) {
        bad_machine(where + ": input position out of range");
      }
      for (int s = 0; s < 3; ++s) {
        if (!any && s != static_cast<int>(rule.last)) continue;
        const std::size_t k = rule.state * 3 + static_cast<std::size_t>(s);
        if (any ? (*table)[k] != -1 : specific[k] != 0) {
          bad_machine(where + ": duplicate rule for state " + std::to_string(rule.state) +
                      " last " + last_name(rule.last));
        }
        (*table)[k] = static_cast<std::int64_t>(r);
        if (!any) specific[k] = 1;
      }
    }
  }
  if (!p.halt_on_missing) {
    for (std::size_t k = 0; k < table->size(); ++k) {
      if ((*table)[k] == -1) {
        bad_machine("no rule for state " + std::to_string(k / 3) + " last " +
                    last_name(static_cast<LastMatch>(k % 3)));
      }
    }
  }

  MachineSpec spec;
  spec.name = p.name;
  spec.delta = p.delta;
  spec.internal_bits = bit_width_for(p.num_states - 1);
  spec.input = p.input;
  spec.tape_addr_bits = p.tape_addr_bits;
  spec.initial_state = p.initial_state;
  auto rules = std::make_shared<std::vector<Rule>>(p.rules);
  spec.transition = [table, rules](std::uint64_t state, std::optional<Bit> last) -> Transition {
    const std::int64_t r = (*table)[state * 3 + static_cast<std::size_t>(slot(last))];
    if (r < 0) return {state, Action::halt()};
    const Rule& rule = (*rules)[static_cast<std::size_t>(r)];
    return {rule.next, rule.action};
  };
  return spec;
}

TableProgram parse_program(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("program JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("program JSON must be an object");
  if (field<int>(j, "schema", "program") != 1) parse_error("unsupported program schema");

  TableProgram p;
  p.name = j.value("name", "");
  if (j.contains("delta")) {
    const auto& d = j["delta"];
    p.delta = parse_rational(d.is_string() ? d.get<std::string>() : d.dump());
  }
  p.tape_addr_bits = field<unsigned>(j, "tape_addr_bits", "program");
  p.input = parse_bits(j.value("input", ""));
  p.initial_state = j.value("initial_state", std::uint64_t{0});
  p.num_states = field<std::uint64_t>(j, "states", "program");
  const std::string missing = j.value("missing", "error");
  if (missing != "halt" && missing != "error") parse_error("\"missing\" must be halt or error");
  p.halt_on_missing = missing == "halt";
  if (j.contains("budget")) p.time_budget = field<std::uint64_t>(j, "budget", "program");

  const auto rules = j.find("rules");
  if (rules == j.end() || !rules->is_array()) parse_error("program: \"rules\" must be an array");
  for (std::size_t r = 0; r < rules->size(); ++r) {
    const auto& jr = (*rules)[r];
    const std::string where = "rule " + std::to_string(r);
    if (!jr.is_object()) parse_error(where + ": must be an object");
    Rule rule;
    rule.state = field<std::uint64_t>(jr, "state", where);
    rule.last = parse_last(jr.value("last", "*"));
    rule.next = field<std::uint64_t>(jr, "next", where);
    const auto op = field<std::string>(jr, "op", where);
    if (op == "R") {
      rule.action = Action::read_tape(field<std::uint64_t>(jr, "addr", where));
    } else if (op == "W") {
      const auto bit = field<unsigned>(jr, "bit", where);
      if (bit > 1) parse_error(where + ": bit must be 0 or 1");
      rule.action = Action::write_tape(field<std::uint64_t>(jr, "addr", where), static_cast<Bit>(bit));
    } else if (op == "I") {
      rule.action = Action::read_input(field<std::uint64_t>(jr, "pos", where));
    } else if (op == "H") {
      rule.action = Action::halt(parse_bits(jr.value("out", "")));
    } else {
      parse_error(where + ": unknown op \"" + op + "\"");
    }
    p.rules.push_back(std::move(rule));
  }
  return p;
}

TableProgram read_program_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open program file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str());
}

std::string write_program(const TableProgram& p) {
  ordered_json j;
  j["schema"] = 1;
  j["name"] = p.name;
  j["delta"] = format_rational(p.delta);
  j["tape_addr_bits"] = p.tape_addr_bits;
  j["input"] = format_bits(p.input);
  j["initial_state"] = p.initial_state;
  j["states"] = p.num_states;
  j["missing"] = p.halt_on_missing ? "halt" : "error";
  if (p.time_budget) j["budget"] = *p.time_budget;
  // Rules go one per line so large tables stay diffable.
  std::string head = j.dump();
  head.pop_back();
  std::string out = head + ",\"rules\":[";
  for (std::size_t r = 0; r < p.rules.size(); ++r) {
    const Rule& rule = p.rules[r];
    ordered_json jr;
    jr["state"] = rule.state;
    jr["last"] = last_name(rule.last);
    jr["next"] = rule.next;
    const Action& a = rule.action;
    switch (a.kind) {
      case ActionKind::ReadTape:
        jr["op"] = "R";
        jr["addr"] = a.addr;
        break;
      case ActionKind::WriteTape:
        jr["op"] = "W";
        jr["addr"] = a.addr;
        jr["bit"] = a.bit;
        break;
      case ActionKind::ReadInput:
        jr["op"] = "I";
        jr["pos"] = a.addr;
        break;
      case ActionKind::Halt:
        jr["op"] = "H";
        jr["out"] = format_bits(a.output);
        break;
    }
    out += r == 0 ? "\n" : ",\n";
    out += jr.dump();
  }
  out += "\n]}\n";
  return out;
}

std::string write_trace_jsonl(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& e : trace) {
    ordered_json j;
    j["step"] = e.step;
    j["op"] = e.is_read ? "R" : "W";
    j["addr"] = e.addr;
    j["bit"] = e.bit;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent> parse_trace_jsonl(std::string_view text) {
  std::vector<TraceEvent> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "trace line " + std::to_string(line_no);
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      parse_error(where + ": invalid JSON");
    }
    TraceEvent e;
    e.step = field<std::uint64_t>(j, "step", where);
    const auto op = field<std::string>(j, "op", where);
    if (op != "R" && op != "W") parse_error(where + ": op must be R or W");
    e.is_read = op == "R";
    e.addr = field<std::uint64_t>(j, "addr", where);
    const auto bit = field<unsigned>(j, "bit", where);
    if (bit > 1) parse_error(where + ": bit must be 0 or 1");
    e.bit = static_cast<Bit>(bit);
    out.push_back(e);
  }
  return out;
}

}  // namespace spacesim::ramsim
