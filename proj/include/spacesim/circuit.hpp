#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spacesim/bits.hpp"
#include "spacesim/error.hpp"

namespace spacesim::circuit {

using GateIndex = std::uint32_t;

enum class GateOp : std::uint8_t { Input, Const, Not, And, Or, Dup };

const char* to_string(GateOp op);

/// One gate of a topologically ordered circuit.
///
/// `arg0` is the input index (Input), the constant bit (Const), or the first
/// source gate; `arg1` is the second source of And/Or and unused otherwise.
struct Gate {
  GateOp op = GateOp::Const;
  std::uint32_t arg0 = 0;
  std::uint32_t arg1 = 0;

  static Gate input(std::uint32_t index) { return {GateOp::Input, index, 0}; }
  static Gate constant(bool bit) { return {GateOp::Const, bit ? 1U : 0U, 0}; }
  static Gate not_of(GateIndex src) { return {GateOp::Not, src, 0}; }
  static Gate and_of(GateIndex a, GateIndex b) { return {GateOp::And, a, b}; }
  static Gate or_of(GateIndex a, GateIndex b) { return {GateOp::Or, a, b}; }
  static Gate dup(GateIndex src) { return {GateOp::Dup, src, 0}; }

  /// Number of functional wires entering this gate (0, 1 or 2).
  unsigned fan_in() const noexcept;
  /// Source gate feeding input port `port` (< fan_in()).
  GateIndex source(unsigned port) const noexcept { return port == 0 ? arg0 : arg1; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// A wire is identified by its destination gate and port; `src` is implied
/// by the destination but carried along for convenience.
struct Wire {
  GateIndex src = 0;
  GateIndex dst = 0;
  unsigned port = 0;

  friend auto operator<=>(const Wire&, const Wire&) = default;
};

/// Materialized circuit: gates 0..n-1 with every source below its consumer.
class Circuit {
 public:
  Circuit() = default;
  Circuit(std::vector<Gate> gates, std::uint32_t num_inputs,
          std::optional<GateIndex> output = std::nullopt);

  std::size_t size() const noexcept { return gates_.size(); }
  std::uint32_t num_inputs() const noexcept { return num_inputs_; }
  GateIndex output_gate() const noexcept { return output_; }
  const Gate& gate(GateIndex i) const { return gates_[i]; }
  std::span<const Gate> gates() const noexcept { return gates_; }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::vector<Gate> gates_;
  std::uint32_t num_inputs_ = 0;
  GateIndex output_ = 0;
};

/// Read-only access to a circuit either materialized or described by a
/// gate-descriptor callback (index -> Gate). Every operation in this library
/// takes a view, so both forms are accepted wherever a circuit is.
class CircuitView {
 public:
  using Descriptor = std::function<Gate(GateIndex)>;

  CircuitView(const Circuit& c)  // NOLINT(google-explicit-constructor)
      : gates_(c.gates().data()),
        size_(c.size()),
        num_inputs_(c.num_inputs()),
        output_(c.output_gate()) {}

  CircuitView(std::size_t size, std::uint32_t num_inputs, GateIndex output,
              Descriptor describe)
      : describe_(std::move(describe)),
        size_(size),
        num_inputs_(num_inputs),
        output_(output) {}

  Gate gate(GateIndex i) const { return gates_ ? gates_[i] : describe_(i); }
  std::size_t size() const noexcept { return size_; }
  std::uint32_t num_inputs() const noexcept { return num_inputs_; }
  GateIndex output_gate() const noexcept { return output_; }

  /// Copies every gate out of the view.
  Circuit materialize() const;

 private:
  const Gate* gates_ = nullptr;
  Descriptor describe_;
  std::size_t size_ = 0;
  std::uint32_t num_inputs_ = 0;
  GateIndex output_ = 0;
};

struct EdgeCount {
  std::uint64_t functional = 0;
  std::uint64_t self_wires = 0;

  std::uint64_t total() const noexcept { return functional + self_wires; }
  friend bool operator==(const EdgeCount&, const EdgeCount&) = default;
};

struct Diagnostic {
  ErrorCode rule;
  GateIndex gate;
  std::string message;
};

/// Ok when `diagnostic` is empty.
struct ValidationResult {
  std::optional<Diagnostic> diagnostic;

  bool ok() const noexcept { return !diagnostic.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
};

inline constexpr unsigned kMaxFanOut = 2;

ValidationResult validate(const CircuitView& circuit);
/// Throws Error carrying the diagnostic if the circuit is invalid.
void require_valid(const CircuitView& circuit);

/// Value of every gate in one forward pass.
BitVec naive_eval(const CircuitView& circuit, std::span<const Bit> input_bits);

/// Wires with source in [a, b) and destination in [c, d); self_wires is 0.
EdgeCount count_cross_edges(const CircuitView& circuit, std::size_t a, std::size_t b,
                            std::size_t c, std::size_t d);

/// Wires with both endpoints in [a, c), plus one accounting self-wire per gate.
EdgeCount count_interval_edges(const CircuitView& circuit, std::size_t a, std::size_t c);

}  // namespace spacesim::circuit
