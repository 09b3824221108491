#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spacesim/circuit.hpp"
#include "spacesim/plan.hpp"
#include "spacesim/rational.hpp"

namespace spacesim::blockeval {

using circuit::CircuitView;
using circuit::GateIndex;

enum class SplitPolicy { Midpoint, SearchAll };

/// Cost parameters shared by the planner, the executor's meter, and the
/// deepening search.
struct SpaceModel {
  /// Intervals of at most this many gates are evaluated directly.
  std::size_t base_threshold = 1;
  /// Bits charged for every live recursion frame.
  std::uint64_t frame_overhead_bits = 0;
  /// Contraction constant and starting space/edges ratio, used by reports.
  Rational k{5, 6};
  Rational epsilon{1};
  /// SearchAll admits b only when min(b-a, c-b) >= split_const * (c-a).
  Rational split_const{1, 4};

  /// base_threshold = max(ceil(log2 n), 1), frame_overhead_bits = 4*ceil(log2 n).
  static SpaceModel defaults_for(std::size_t gate_count);
};

struct SpaceReport {
  std::uint64_t peak_stored_bits = 0;
  std::uint64_t peak_frames = 0;
  /// Frame-local stored bits per plan interval (largest seen).
  std::map<Interval, std::uint64_t> per_interval;
  std::uint64_t recompute_count = 0;
  std::uint64_t gate_evaluations = 0;
  /// Budget at which eval_deepening succeeded; 0 for plan execution.
  std::uint64_t budget = 0;
};

std::string to_json(const SpaceReport& report);

struct EvalResult {
  Bit value = 0;
  SpaceReport report;
};

struct ExecOptions {
  std::uint64_t step_limit = std::numeric_limits<std::uint64_t>::max();
};

enum class BudgetSchedule { Doubling, Increment };

struct DeepeningOptions {
  BudgetSchedule schedule = BudgetSchedule::Doubling;
  std::uint64_t step_limit = std::numeric_limits<std::uint64_t>::max();
};

/// Structural check: intervals inside the circuit, children tiling their
/// parent at b with a < b < c. Throws Error(MalformedPlan).
void check_plan(const CircuitView& circuit, const Plan& plan);

/// Modeled bits of a plan:
///   Direct  -> (c-a) + overhead
///   Split A -> left + right + overhead
///   Split B -> max(left, right) + Edges(a..b, b..c) + overhead
std::uint64_t model_space(const CircuitView& circuit, const Plan& plan, const SpaceModel& model);

/// Exact interval DP minimizing model_space. Intervals of size <= base_threshold
/// become Direct; larger ones split at the midpoint (Midpoint) or at the best
/// admissible b (SearchAll). Ties prefer B, then the smaller b.
Plan plan_optimal(const CircuitView& circuit, Interval interval, const SpaceModel& model,
                  SplitPolicy policy);

/// Evaluates `query_gate` by executing the plan with an instrumented meter.
/// The plan's root must start at gate 0 and contain the query.
EvalResult eval_with_plan(const CircuitView& circuit, std::span<const Bit> input_bits,
                          const Plan& plan, GateIndex query_gate, const SpaceModel& model,
                          const ExecOptions& options = {});

/// Deterministic simulation of the nondeterministic evaluator: depth-first
/// over strategy (and split) choices under budgets 1, 2, 4, ... (or +1),
/// backtracking whenever the meter would exceed the budget.
EvalResult eval_deepening(const CircuitView& circuit, std::span<const Bit> input_bits,
                          GateIndex query_gate, SplitPolicy policy, const SpaceModel& model,
                          const DeepeningOptions& options = {});

/// eps_{i+1} = eps_i * (1 + k*eps_i) / (1 + eps_i); returns eps_0..eps_steps.
template <typename T>
std::vector<T> epsilon_iterate(T epsilon0, T k, int steps) {
  std::vector<T> out{epsilon0};
  out.reserve(static_cast<std::size_t>(steps) + 1);
  T eps = epsilon0;
  for (int i = 0; i < steps; ++i) {
    eps = eps * (T(1) + k * eps) / (T(1) + eps);
    out.push_back(eps);
  }
  return out;
}

/// Upper bound min((x-y)*eps, x*k*eps + y) on the space of an interval with
/// x edges of which y cross the split, when both halves have ratio eps.
double split_space_bound(double x, double y, double k, double eps);
/// The y at which the two branches of split_space_bound meet.
double worst_case_crossing(double x, double k, double eps);

}  // namespace spacesim::blockeval
