#include "spacesim/circuit.hpp"

#include <string>

namespace spacesim::circuit {

const char* to_string(GateOp op) {
  switch (op) {
    case GateOp::Input: return "INPUT";
    case GateOp::Const: return "CONST";
    case GateOp::Not: return "NOT";
    case GateOp::And: return "AND";
    case GateOp::Or: return "OR";
    case GateOp::Dup: return "DUP";
  }
  return "?";
}

unsigned Gate::fan_in() const noexcept {
  switch (op) {
    case GateOp::Input:
    case GateOp::Const: return 0;
    case GateOp::Not:
    case GateOp::Dup: return 1;
    case GateOp::And:
    case GateOp::Or: return 2;
  }
  return 0;
}

Circuit::Circuit(std::vector<Gate> gates, std::uint32_t num_inputs,
                 std::optional<GateIndex> output)
    : gates_(std::move(gates)), num_inputs_(num_inputs) {
  output_ = output.value_or(gates_.empty() ? 0 : static_cast<GateIndex>(gates_.size() - 1));
}

Circuit CircuitView::materialize() const {
  std::vector<Gate> gates;
  gates.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) gates.push_back(gate(static_cast<GateIndex>(i)));
  return Circuit(std::move(gates), num_inputs_, output_);
}

namespace {

ValidationResult fail(ErrorCode rule, GateIndex gate, std::string what) {
  return {Diagnostic{rule, gate, "gate " + std::to_string(gate) + ": " + std::move(what)}};
}

}  // namespace

ValidationResult validate(const CircuitView& circuit) {
  const std::size_t n = circuit.size();
  if (n == 0) {
    return {Diagnostic{ErrorCode::BadInterval, 0, "circuit has no gates"}};
  }
  if (circuit.output_gate() >= n) {
    return fail(ErrorCode::BadInterval, circuit.output_gate(), "output gate out of range");
  }
  std::vector<std::uint8_t> fan_out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = static_cast<GateIndex>(i);
    const Gate gate = circuit.gate(g);
    if (gate.op == GateOp::Input && gate.arg0 >= circuit.num_inputs()) {
      return fail(ErrorCode::BadInputIndex, g,
                  "input index " + std::to_string(gate.arg0) + " >= " +
                      std::to_string(circuit.num_inputs()));
    }
    if (gate.op == GateOp::Const && gate.arg0 > 1) {
      return fail(ErrorCode::BadInputIndex, g, "constant must be 0 or 1");
    }
    for (unsigned p = 0; p < gate.fan_in(); ++p) {
      const GateIndex src = gate.source(p);
      if (src >= g) {
        return fail(ErrorCode::NonTopological, g,
                    "source " + std::to_string(src) + " is not below the gate");
      }
      if (++fan_out[src] > kMaxFanOut) {
        return fail(ErrorCode::FanOutExceeded, src,
                    "fan-out exceeds " + std::to_string(kMaxFanOut));
      }
    }
  }
  return {};
}

void require_valid(const CircuitView& circuit) {
  auto result = validate(circuit);
  if (!result.ok()) throw Error(result.diagnostic->rule, result.diagnostic->message);
}

BitVec naive_eval(const CircuitView& circuit, std::span<const Bit> input_bits) {
  if (input_bits.size() != circuit.num_inputs()) {
    throw Error(ErrorCode::InputLengthMismatch,
                "expected " + std::to_string(circuit.num_inputs()) + " input bits, got " +
                    std::to_string(input_bits.size()));
  }
  BitVec values(circuit.size(), 0);
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const Gate g = circuit.gate(static_cast<GateIndex>(i));
    Bit v = 0;
    switch (g.op) {
      case GateOp::Input: v = input_bits[g.arg0]; break;
      case GateOp::Const: v = static_cast<Bit>(g.arg0 & 1U); break;
      case GateOp::Not: v = !values[g.arg0]; break;
      case GateOp::Dup: v = values[g.arg0]; break;
      case GateOp::And: v = values[g.arg0] & values[g.arg1]; break;
      case GateOp::Or: v = values[g.arg0] | values[g.arg1]; break;
    }
    values[i] = v;
  }
  return values;
}

EdgeCount count_cross_edges(const CircuitView& circuit, std::size_t a, std::size_t b,
                            std::size_t c, std::size_t d) {
  if (!(a <= b && b <= c && c <= d && d <= circuit.size())) {
    throw Error(ErrorCode::BadInterval, "cross-edge intervals must satisfy a<=b<=c<=d<=n");
  }
  EdgeCount count;
  for (std::size_t dst = c; dst < d; ++dst) {
    const Gate g = circuit.gate(static_cast<GateIndex>(dst));
    for (unsigned p = 0; p < g.fan_in(); ++p) {
      const GateIndex src = g.source(p);
      if (src >= a && src < b) ++count.functional;
    }
  }
  return count;
}

EdgeCount count_interval_edges(const CircuitView& circuit, std::size_t a, std::size_t c) {
  if (!(a <= c && c <= circuit.size())) {
    throw Error(ErrorCode::BadInterval, "interval must satisfy a<=c<=n");
  }
  EdgeCount count;
  for (std::size_t dst = a; dst < c; ++dst) {
    const Gate g = circuit.gate(static_cast<GateIndex>(dst));
    for (unsigned p = 0; p < g.fan_in(); ++p) {
      if (g.source(p) >= a) ++count.functional;
    }
  }
  count.self_wires = c - a;
  return count;
}

}  // namespace spacesim::circuit
