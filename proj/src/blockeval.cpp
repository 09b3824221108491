#include "spacesim/blockeval.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <stdexcept>

namespace spacesim::blockeval {

using circuit::Gate;
using circuit::GateOp;
using circuit::Wire;

SpaceModel SpaceModel::defaults_for(std::size_t gate_count) {
  SpaceModel m;
  const unsigned lg = ceil_log2(gate_count);
  m.base_threshold = std::max<std::size_t>(lg, 1);
  m.frame_overhead_bits = 4ULL * lg;
  return m;
}

std::string to_json(const SpaceReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["peak_stored_bits"] = report.peak_stored_bits;
  j["peak_frames"] = report.peak_frames;
  j["recompute_count"] = report.recompute_count;
  j["gate_evaluations"] = report.gate_evaluations;
  if (report.budget != 0) j["budget"] = report.budget;
  auto per = nlohmann::ordered_json::array();
  for (const auto& [iv, bits] : report.per_interval) per.push_back({iv.a, iv.c, bits});
  j["per_interval"] = std::move(per);
  return j.dump();
}

// ---------------------------------------------------------------------------
// Plan structure and the space model

void check_plan(const CircuitView& circuit, const Plan& plan) {
  auto bad = [](const PlanNode& n, const std::string& what) {
    throw Error(ErrorCode::MalformedPlan, "plan node (" + std::to_string(n.interval.a) + ", " +
                                              std::to_string(n.interval.c) + "): " + what);
  };
  const auto count = static_cast<std::int32_t>(plan.node_count());
  for (std::int32_t i = 0; i < count; ++i) {
    const auto& n = plan.node(i);
    if (n.interval.a >= n.interval.c) bad(n, "empty interval");
    if (n.interval.c > circuit.size()) bad(n, "interval exceeds the circuit");
    if (!n.is_split) continue;
    if (!(n.interval.a < n.b && n.b < n.interval.c)) bad(n, "split point outside (a, c)");
    if (n.left <= i || n.right <= i || n.left >= count || n.right >= count) {
      bad(n, "bad child index");
    }
    if (plan.node(n.left).interval != Interval{n.interval.a, n.b} ||
        plan.node(n.right).interval != Interval{n.b, n.interval.c}) {
      bad(n, "children do not tile the interval at b");
    }
  }
}

namespace {

std::uint64_t model_node(const CircuitView& circuit, const Plan& plan, std::int32_t index,
                         const SpaceModel& model) {
  const auto& n = plan.node(index);
  if (!n.is_split) return n.interval.size() + model.frame_overhead_bits;
  const auto left = model_node(circuit, plan, n.left, model);
  const auto right = model_node(circuit, plan, n.right, model);
  if (n.strategy == Strategy::A) return left + right + model.frame_overhead_bits;
  const auto cross =
      circuit::count_cross_edges(circuit, n.interval.a, n.b, n.b, n.interval.c).functional;
  return std::max(left, right) + cross + model.frame_overhead_bits;
}

bool admissible(const SpaceModel& model, std::size_t a, std::size_t b, std::size_t c) {
  const auto shorter = static_cast<std::int64_t>(std::min(b - a, c - b));
  const auto len = static_cast<std::int64_t>(c - a);
  return shorter * model.split_const.denominator() >= model.split_const.numerator() * len;
}

/// Split candidates for an interval above the base threshold, ascending.
/// The midpoint is always admitted so every interval has at least one.
std::vector<std::size_t> split_candidates(const SpaceModel& model, Interval iv,
                                          SplitPolicy policy) {
  const std::size_t mid = (iv.a + iv.c) / 2;
  if (policy == SplitPolicy::Midpoint) return {mid};
  std::vector<std::size_t> out;
  for (std::size_t b = iv.a + 1; b < iv.c; ++b) {
    if (b == mid || admissible(model, iv.a, b, iv.c)) out.push_back(b);
  }
  return out;
}

class MidpointPlanner {
 public:
  MidpointPlanner(const CircuitView& circuit, const SpaceModel& model)
      : circuit_(circuit), model_(model) {}

  Plan run(Interval iv) && {
    build(iv);
    return std::move(builder_).finish();
  }

 private:
  std::uint64_t build(Interval iv) {
    if (iv.size() <= model_.base_threshold) {
      builder_.add_direct(iv);
      return iv.size() + model_.frame_overhead_bits;
    }
    const std::size_t b = (iv.a + iv.c) / 2;
    const auto self = builder_.add_split(iv, b, Strategy::B);
    const auto left_index = builder_.next_index();
    const auto left = build({iv.a, b});
    const auto right_index = builder_.next_index();
    const auto right = build({b, iv.c});
    builder_.set_children(self, left_index, right_index);

    const auto cross = circuit::count_cross_edges(circuit_, iv.a, b, b, iv.c).functional;
    const auto cost_b = std::max(left, right) + cross;
    const auto cost_a = left + right;
    if (cost_a < cost_b) {
      builder_.set_strategy(self, Strategy::A);
      return cost_a + model_.frame_overhead_bits;
    }
    return cost_b + model_.frame_overhead_bits;
  }

  const CircuitView& circuit_;
  const SpaceModel& model_;
  PlanBuilder builder_;
};

/// Bottom-up DP over every sub-interval; O(m^2) memory, O(m^3) time.
class SearchAllPlanner {
 public:
  SearchAllPlanner(const CircuitView& circuit, const SpaceModel& model, Interval root)
      : model_(model), base_(root.a), m_(root.size()), stride_(m_ + 1) {
    internal_.assign(stride_ * stride_, 0);
    cost_.assign(stride_ * stride_, 0);
    choice_.assign(stride_ * stride_, Choice{});
    // internal(a, c): functional wires with both ends in a..c (local offsets).
    for (std::size_t a = 0; a < m_; ++a) {
      std::uint32_t running = 0;
      for (std::size_t c = a + 1; c <= m_; ++c) {
        const Gate g = circuit.gate(static_cast<GateIndex>(base_ + c - 1));
        for (unsigned p = 0; p < g.fan_in(); ++p) {
          if (g.source(p) >= base_ + a) ++running;
        }
        internal_[at(a, c)] = running;
      }
    }
  }

  Plan run() && {
    for (std::size_t len = 1; len <= m_; ++len) {
      for (std::size_t a = 0; a + len <= m_; ++a) solve(a, a + len);
    }
    PlanBuilder builder;
    emit(builder, 0, m_);
    return std::move(builder).finish();
  }

 private:
  struct Choice {
    std::size_t b = 0;
    Strategy strategy = Strategy::B;
  };

  std::size_t at(std::size_t a, std::size_t c) const { return a * stride_ + c; }

  void solve(std::size_t a, std::size_t c) {
    const std::size_t len = c - a;
    if (len <= model_.base_threshold) {
      cost_[at(a, c)] = len + model_.frame_overhead_bits;
      return;
    }
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    Choice pick;
    for (std::size_t b : split_candidates(model_, {a, c}, SplitPolicy::SearchAll)) {
      const auto left = cost_[at(a, b)];
      const auto right = cost_[at(b, c)];
      const auto cross = internal_[at(a, c)] - internal_[at(a, b)] - internal_[at(b, c)];
      const auto cost_b = std::max(left, right) + cross;
      const auto cost_a = left + right;
      if (cost_b < best) {
        best = cost_b;
        pick = {b, Strategy::B};
      }
      if (cost_a < best) {
        best = cost_a;
        pick = {b, Strategy::A};
      }
    }
    cost_[at(a, c)] = best + model_.frame_overhead_bits;
    choice_[at(a, c)] = pick;
  }

  std::int32_t emit(PlanBuilder& builder, std::size_t a, std::size_t c) {
    const Interval iv{base_ + a, base_ + c};
    if (c - a <= model_.base_threshold) return builder.add_direct(iv);
    const auto& pick = choice_[at(a, c)];
    const auto self = builder.add_split(iv, base_ + pick.b, pick.strategy);
    const auto left = emit(builder, a, pick.b);
    const auto right = emit(builder, pick.b, c);
    builder.set_children(self, left, right);
    return self;
  }

  const SpaceModel& model_;
  std::size_t base_;
  std::size_t m_;
  std::size_t stride_;
  std::vector<std::uint32_t> internal_;
  std::vector<std::uint64_t> cost_;
  std::vector<Choice> choice_;
};

}  // namespace

std::uint64_t model_space(const CircuitView& circuit, const Plan& plan, const SpaceModel& model) {
  check_plan(circuit, plan);
  return model_node(circuit, plan, 0, model);
}

Plan plan_optimal(const CircuitView& circuit, Interval interval, const SpaceModel& model,
                  SplitPolicy policy) {
  circuit::require_valid(circuit);
  if (interval.a >= interval.c || interval.c > circuit.size()) {
    throw Error(ErrorCode::BadInterval, "planning interval must satisfy a < c <= n");
  }
  if (model.base_threshold < 1) {
    throw Error(ErrorCode::BadInterval, "base_threshold must be at least 1");
  }
  if (policy == SplitPolicy::Midpoint) return MidpointPlanner(circuit, model).run(interval);
  return SearchAllPlanner(circuit, model, interval).run();
}

// ---------------------------------------------------------------------------
// Instrumented execution

namespace {

/// Thrown when a charge would exceed the active budget; caught only by the
/// deepening search's choice points.
struct OverBudget {};

class Meter {
 public:
  Meter(std::uint64_t budget, std::uint64_t frame_bits, std::uint64_t step_limit,
        std::uint64_t steps_so_far = 0)
      : budget_(budget), frame_bits_(frame_bits), step_limit_(step_limit), steps_(steps_so_far) {}

  void charge(std::uint64_t bits) {
    if (bits > budget_ - current_) throw OverBudget{};
    current_ += bits;
    peak_ = std::max(peak_, current_);
  }
  void release(std::uint64_t bits) noexcept { current_ -= bits; }

  void enter_frame() {
    charge(frame_bits_);
    peak_frames_ = std::max(peak_frames_, ++frames_);
  }
  void leave_frame() noexcept {
    --frames_;
    release(frame_bits_);
  }

  void step() {
    if (++steps_ > step_limit_) {
      throw Error(ErrorCode::StepLimitExceeded,
                  "gate evaluation limit of " + std::to_string(step_limit_) + " exceeded");
    }
  }
  void recompute() noexcept { ++recomputes_; }
  void record(Interval iv, std::uint64_t bits) {
    auto& slot = per_interval_[iv];
    slot = std::max(slot, bits);
  }

  std::uint64_t steps() const noexcept { return steps_; }

  SpaceReport report() const {
    SpaceReport r;
    r.peak_stored_bits = peak_;
    r.peak_frames = peak_frames_;
    r.per_interval = per_interval_;
    r.recompute_count = recomputes_;
    r.gate_evaluations = steps_;
    return r;
  }

 private:
  std::uint64_t budget_;
  std::uint64_t frame_bits_;
  std::uint64_t step_limit_;
  std::uint64_t steps_;
  std::uint64_t current_ = 0;
  std::uint64_t peak_ = 0;
  std::uint64_t frames_ = 0;
  std::uint64_t peak_frames_ = 0;
  std::uint64_t recomputes_ = 0;
  std::map<Interval, std::uint64_t> per_interval_;
};

class Charge {
 public:
  Charge(Meter& meter, std::uint64_t bits) : meter_(meter), bits_(bits) { meter_.charge(bits_); }
  ~Charge() { meter_.release(bits_); }
  Charge(const Charge&) = delete;
  Charge& operator=(const Charge&) = delete;

 private:
  Meter& meter_;
  std::uint64_t bits_;
};

class FrameScope {
 public:
  explicit FrameScope(Meter& meter) : meter_(meter) { meter_.enter_frame(); }
  ~FrameScope() { meter_.leave_frame(); }
  FrameScope(const FrameScope&) = delete;
  FrameScope& operator=(const FrameScope&) = delete;

 private:
  Meter& meter_;
};

/// Supplies the value carried by a wire whose source lies below the
/// interval currently being evaluated.
using Reader = std::function<Bit(const Wire&)>;
/// Query gates are sorted and distinct; answers come back in the same order.
using Queries = std::vector<GateIndex>;
using SubEval = std::function<BitVec(const Queries&, const Reader&)>;

/// Splits a query set at b, all answers below b first.
std::pair<Queries, Queries> split_queries(const Queries& q, std::size_t b) {
  const auto mid = std::lower_bound(q.begin(), q.end(), static_cast<GateIndex>(b));
  return {Queries(q.begin(), mid), Queries(mid, q.end())};
}

BitVec concat(BitVec low, const BitVec& high) {
  low.insert(low.end(), high.begin(), high.end());
  return low;
}

/// Evaluation primitives shared by plan execution and the deepening search.
class Engine {
 public:
  Engine(const CircuitView& circuit, std::span<const Bit> inputs, Meter& meter)
      : circuit_(circuit), inputs_(inputs), meter_(&meter) {}

  void set_meter(Meter& meter) { meter_ = &meter; }
  Meter& meter() { return *meter_; }

  /// Forward pass over gates a..max query, one stored bit per gate.
  BitVec direct(Interval iv, const Queries& queries, const Reader& outer) {
    const std::size_t stored = queries.back() + 1 - iv.a;
    Charge storage(*meter_, stored);
    meter_->record(iv, stored);
    BitVec values(stored, 0);
    for (std::size_t i = iv.a; i < iv.a + stored; ++i) {
      meter_->step();
      const auto gi = static_cast<GateIndex>(i);
      const Gate g = circuit_.gate(gi);
      auto in = [&](unsigned port) -> Bit {
        const GateIndex src = g.source(port);
        if (src >= iv.a) return values[src - iv.a];
        return outer(Wire{src, gi, port});
      };
      Bit v = 0;
      switch (g.op) {
        case GateOp::Input: v = inputs_[g.arg0]; break;
        case GateOp::Const: v = static_cast<Bit>(g.arg0 & 1U); break;
        case GateOp::Not: v = !in(0); break;
        case GateOp::Dup: v = in(0); break;
        case GateOp::And: {
          const Bit x = in(0);
          v = x & in(1);
          break;
        }
        case GateOp::Or: {
          const Bit x = in(0);
          v = x | in(1);
          break;
        }
      }
      values[i - iv.a] = v;
    }
    BitVec out;
    out.reserve(queries.size());
    for (auto q : queries) out.push_back(values[q - iv.a]);
    return out;
  }

  /// Strategy A: run the upper part and recompute the lower part for every
  /// wire it reads from below b.
  BitVec split_a(Interval iv, std::size_t b, const Queries& queries, const Reader& outer,
                 const SubEval& left, const SubEval& right) {
    meter_->record(iv, 0);
    const auto [low, high] = split_queries(queries, b);
    BitVec out = low.empty() ? BitVec{} : left(low, outer);
    Reader reader = [&](const Wire& w) -> Bit {
      if (w.src >= iv.a && w.src < b) {
        meter_->recompute();
        return left(Queries{w.src}, outer)[0];
      }
      return outer(w);
    };
    return concat(std::move(out), right(high, reader));
  }

  /// Strategy B: one pass over the lower part fills one bit per crossing
  /// wire, kept in (src, dst, port) order; the upper part then reads it.
  BitVec split_b(Interval iv, std::size_t b, const Queries& queries, const Reader& outer,
                 const SubEval& left, const SubEval& right) {
    const auto [low, high] = split_queries(queries, b);
    std::vector<Wire> wires;
    for (std::size_t dst = b; dst <= queries.back(); ++dst) {
      const Gate g = circuit_.gate(static_cast<GateIndex>(dst));
      for (unsigned p = 0; p < g.fan_in(); ++p) {
        const GateIndex src = g.source(p);
        if (src >= iv.a && src < b) wires.push_back({src, static_cast<GateIndex>(dst), p});
      }
    }
    std::sort(wires.begin(), wires.end());

    Charge storage(*meter_, wires.size());
    meter_->record(iv, wires.size());
    Queries sources = low;
    for (const auto& w : wires) sources.push_back(w.src);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    const BitVec lower = sources.empty() ? BitVec{} : left(sources, outer);
    auto lower_value = [&](GateIndex g) {
      return lower[static_cast<std::size_t>(
          std::lower_bound(sources.begin(), sources.end(), g) - sources.begin())];
    };
    BitVec values(wires.size(), 0);
    for (std::size_t i = 0; i < wires.size(); ++i) values[i] = lower_value(wires[i].src);
    BitVec out;
    for (auto q : low) out.push_back(lower_value(q));

    Reader reader = [&](const Wire& w) -> Bit {
      if (w.src >= iv.a && w.src < b) {
        auto it = std::lower_bound(wires.begin(), wires.end(), w);
        if (it == wires.end() || *it != w) throw std::logic_error("crossing wire not buffered");
        return values[static_cast<std::size_t>(it - wires.begin())];
      }
      return outer(w);
    };
    return concat(std::move(out), right(high, reader));
  }

 private:
  const CircuitView& circuit_;
  std::span<const Bit> inputs_;
  Meter* meter_;
};

const Reader& root_reader() {
  static const Reader reader = [](const Wire&) -> Bit {
    throw std::logic_error("gate below the root interval requested");
  };
  return reader;
}

class PlanExecutor {
 public:
  PlanExecutor(const Plan& plan, Engine& engine) : plan_(plan), engine_(engine) {}

  BitVec exec(std::int32_t index, const Queries& queries, const Reader& outer) {
    FrameScope frame(engine_.meter());
    const auto& n = plan_.node(index);
    if (!n.is_split) return engine_.direct(n.interval, queries, outer);
    // Trimming: nothing at or above b matters for queries below it.
    if (queries.back() < n.b) return exec(n.left, queries, outer);
    SubEval left = [&](const Queries& q, const Reader& r) { return exec(n.left, q, r); };
    SubEval right = [&](const Queries& q, const Reader& r) { return exec(n.right, q, r); };
    if (n.strategy == Strategy::A) return engine_.split_a(n.interval, n.b, queries, outer, left, right);
    return engine_.split_b(n.interval, n.b, queries, outer, left, right);
  }

 private:
  const Plan& plan_;
  Engine& engine_;
};

class DeepeningSearch {
 public:
  DeepeningSearch(const SpaceModel& model, SplitPolicy policy, Engine& engine)
      : model_(model), policy_(policy), engine_(engine) {}

  BitVec search(Interval iv, const Queries& queries, const Reader& outer) {
    FrameScope frame(engine_.meter());
    if (iv.size() <= model_.base_threshold) return engine_.direct(iv, queries, outer);
    for (std::size_t b : split_candidates(model_, iv, policy_)) {
      if (queries.back() < b) {
        try {
          return search({iv.a, b}, queries, outer);
        } catch (const OverBudget&) {
          continue;
        }
      }
      SubEval left = [&](const Queries& q, const Reader& r) { return search({iv.a, b}, q, r); };
      SubEval right = [&](const Queries& q, const Reader& r) { return search({b, iv.c}, q, r); };
      try {
        return engine_.split_b(iv, b, queries, outer, left, right);
      } catch (const OverBudget&) {
      }
      try {
        return engine_.split_a(iv, b, queries, outer, left, right);
      } catch (const OverBudget&) {
      }
    }
    throw OverBudget{};
  }

 private:
  const SpaceModel& model_;
  SplitPolicy policy_;
  Engine& engine_;
};

void check_inputs(const CircuitView& circuit, std::span<const Bit> input_bits) {
  if (input_bits.size() != circuit.num_inputs()) {
    throw Error(ErrorCode::InputLengthMismatch,
                "expected " + std::to_string(circuit.num_inputs()) + " input bits, got " +
                    std::to_string(input_bits.size()));
  }
}

}  // namespace

EvalResult eval_with_plan(const CircuitView& circuit, std::span<const Bit> input_bits,
                          const Plan& plan, GateIndex query_gate, const SpaceModel& model,
                          const ExecOptions& options) {
  check_inputs(circuit, input_bits);
  check_plan(circuit, plan);
  const auto& root = plan.root().interval;
  if (root.a != 0 || !root.contains(query_gate)) {
    throw Error(ErrorCode::GateOutOfPlan,
                "gate " + std::to_string(query_gate) + " is not covered by a plan rooted at 0");
  }
  Meter meter(std::numeric_limits<std::uint64_t>::max(), model.frame_overhead_bits,
              options.step_limit);
  Engine engine(circuit, input_bits, meter);
  PlanExecutor exec(plan, engine);
  EvalResult result;
  result.value = exec.exec(0, Queries{query_gate}, root_reader())[0];
  result.report = meter.report();
  return result;
}

EvalResult eval_deepening(const CircuitView& circuit, std::span<const Bit> input_bits,
                          GateIndex query_gate, SplitPolicy policy, const SpaceModel& model,
                          const DeepeningOptions& options) {
  check_inputs(circuit, input_bits);
  if (query_gate >= circuit.size()) {
    throw Error(ErrorCode::GateOutOfPlan, "gate " + std::to_string(query_gate) + " out of range");
  }
  const Interval root{0, circuit.size()};
  std::uint64_t budget = 1;
  std::uint64_t steps = 0;
  while (true) {
    Meter meter(budget, model.frame_overhead_bits, options.step_limit, steps);
    Engine engine(circuit, input_bits, meter);
    DeepeningSearch search(model, policy, engine);
    try {
      EvalResult result;
      result.value = search.search(root, Queries{query_gate}, root_reader())[0];
      result.report = meter.report();
      result.report.budget = budget;
      return result;
    } catch (const OverBudget&) {
      steps = meter.steps();
    }
    budget = options.schedule == BudgetSchedule::Doubling ? budget * 2 : budget + 1;
  }
}

double split_space_bound(double x, double y, double k, double eps) {
  return std::min((x - y) * eps, x * k * eps + y);
}

double worst_case_crossing(double x, double k, double eps) {
  return x * (1.0 - k) * eps / (eps + 1.0);
}

}  // namespace spacesim::blockeval
