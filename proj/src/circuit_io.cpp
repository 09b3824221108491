#include "spacesim/circuit_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace spacesim::circuit {

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what,
                             ErrorCode code = ErrorCode::ParseError) {
  throw Error(code, "line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint32_t to_u32(std::string_view tok, std::size_t line_no) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "expected a nonnegative integer, got '" + std::string(tok) + "'");
  }
  return v;
}

std::uint32_t header_field(std::string_view tok, std::string_view key, std::size_t line_no) {
  if (tok.substr(0, key.size()) != key || tok.size() == key.size() || tok[key.size()] != '=') {
    parse_fail(line_no, "expected '" + std::string(key) + "=<value>' in header");
  }
  return to_u32(tok.substr(key.size() + 1), line_no);
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  std::size_t n = 0;
  std::uint32_t inputs = 0;
  GateIndex output = 0;
  bool have_header = false;
  std::vector<Gate> gates;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }

    if (!have_header) {
      if (toks[0] != "circuit" || toks.size() != 4) {
        parse_fail(line_no, "expected header 'circuit n=<gates> inputs=<k> output=<idx>'");
      }
      n = header_field(toks[1], "n", line_no);
      inputs = header_field(toks[2], "inputs", line_no);
      output = header_field(toks[3], "output", line_no);
      have_header = true;
      gates.reserve(n);
      continue;
    }

    if (toks.size() < 2) parse_fail(line_no, "gate line needs an index and an op");
    const auto idx = to_u32(toks[0], line_no);
    if (idx != gates.size()) {
      parse_fail(line_no, "gate index " + std::to_string(idx) + " out of order (expected " +
                              std::to_string(gates.size()) + ")");
    }
    const std::string_view op = toks[1];
    const std::size_t args = toks.size() - 2;
    // Extra sources on a logic gate are a fan-in violation, not a typo.
    auto want = [&](std::size_t k, bool sources = true) {
      if (sources && args > k) {
        parse_fail(line_no, std::string(op) + " takes at most " + std::to_string(k) + " source(s)",
                   ErrorCode::FanInExceeded);
      }
      if (args != k) {
        parse_fail(line_no, std::string(op) + " takes " + std::to_string(k) + " argument(s)");
      }
    };
    if (op == "INPUT") {
      want(1, false);
      gates.push_back(Gate::input(to_u32(toks[2], line_no)));
    } else if (op == "CONST") {
      want(1, false);
      auto bit = to_u32(toks[2], line_no);
      if (bit > 1) parse_fail(line_no, "CONST takes 0 or 1");
      gates.push_back(Gate::constant(bit == 1));
    } else if (op == "NOT") {
      want(1);
      gates.push_back(Gate::not_of(to_u32(toks[2], line_no)));
    } else if (op == "DUP") {
      want(1);
      gates.push_back(Gate::dup(to_u32(toks[2], line_no)));
    } else if (op == "AND") {
      want(2);
      gates.push_back(Gate::and_of(to_u32(toks[2], line_no), to_u32(toks[3], line_no)));
    } else if (op == "OR") {
      want(2);
      gates.push_back(Gate::or_of(to_u32(toks[2], line_no), to_u32(toks[3], line_no)));
    } else {
      parse_fail(line_no, "unknown gate op '" + std::string(op) + "'");
    }
    if (end == text.size()) break;
  }

  if (!have_header) parse_fail(line_no, "missing 'circuit' header");
  if (gates.size() != n) {
    parse_fail(line_no, "header declares " + std::to_string(n) + " gates, found " +
                            std::to_string(gates.size()));
  }
  return Circuit(std::move(gates), inputs, output);
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open circuit file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

void write_circuit(std::ostream& out, const CircuitView& circuit) {
  out << "circuit n=" << circuit.size() << " inputs=" << circuit.num_inputs()
      << " output=" << circuit.output_gate() << '\n';
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const Gate g = circuit.gate(static_cast<GateIndex>(i));
    out << i << ' ' << to_string(g.op) << ' ' << g.arg0;
    if (g.fan_in() == 2) out << ' ' << g.arg1;
    out << '\n';
  }
}

std::string write_circuit(const CircuitView& circuit) {
  std::ostringstream out;
  write_circuit(out, circuit);
  return out.str();
}

}  // namespace spacesim::circuit
