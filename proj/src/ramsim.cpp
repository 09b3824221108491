#include "spacesim/ramsim.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>
#include <unordered_map>

namespace spacesim::ramsim {

unsigned config_width(const MachineSpec& spec) { return spec.internal_bits + 3; }

Bit config_bit(const MachineSpec& spec, const Config& config, unsigned index) {
  if (index < spec.internal_bits) return static_cast<Bit>((config.state >> index) & 1U);
  switch (index - spec.internal_bits) {
    case 0: return config.last.has_value();
    case 1: return config.last.value_or(0);
    case 2: return config.halted;
    default:
      throw Error(ErrorCode::BadInputIndex, "config bit " + std::to_string(index) +
                                                " out of range (width " +
                                                std::to_string(config_width(spec)) + ")");
  }
}

BitVec config_bits(const MachineSpec& spec, const Config& config) {
  BitVec out(config_width(spec));
  for (unsigned i = 0; i < out.size(); ++i) out[i] = config_bit(spec, config, i);
  return out;
}

Config initial_config(const MachineSpec& spec) { return Config{spec.initial_state, {}, false}; }

Strategy RamPlan::at(StepInterval iv) const {
  auto it = choices.find(iv);
  return it == choices.end() ? fallback : it->second;
}

StateSource StateSource::initial(const MachineSpec& spec) {
  const Config start = initial_config(spec);
  return {[start] { return start; }, [](Address, Step) -> Bit { return 0; }};
}

std::string to_json(const RamSpaceReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["peak_bits"] = r.peak_bits;
  j["live_state_copies"] = r.live_state_copies;
  j["stored_list_bits"] = r.stored_list_bits;
  j["peak_frames"] = r.peak_frames;
  j["recompute_count"] = r.recompute_count;
  j["passes"] = r.passes;
  j["runs"] = r.runs;
  j["transitions"] = r.transitions;
  if (r.budget != 0) j["budget"] = r.budget;
  j["copies_within_frames"] = r.copies_within_frames;
  // Edge convention used by ram_edges for cells read before any write.
  j["unwritten_reads"] = "edge_from_step_0";
  return j.dump();
}

namespace {

void check_spec(const MachineSpec& spec) {
  if (!spec.transition) throw Error(ErrorCode::BadMachine, "machine has no transition function");
  if (spec.internal_bits == 0 || spec.internal_bits > 64) {
    throw Error(ErrorCode::BadMachine, "internal_bits must be in 1..64");
  }
  if (spec.tape_addr_bits == 0 || spec.tape_addr_bits > 64) {
    throw Error(ErrorCode::BadMachine, "tape_addr_bits must be in 1..64");
  }
  if (spec.delta <= 0 || spec.delta >= 1) throw Error(ErrorCode::BadMachine, "delta must be in (0, 1)");
}

/// Runs free actions from `cfg` up to the next tape read request. Returns
/// the requested address, or nothing once the machine has halted. The
/// caller delivers the read by setting cfg.last.
class Runner {
 public:
  explicit Runner(const MachineSpec& spec) : spec_(spec) {}

  std::function<void()> on_transition;

  template <class OnWrite>
  std::optional<Address> to_read(Config& cfg, OnWrite&& on_write, BitVec* output = nullptr) {
    std::uint64_t free_actions = 0;
    while (!cfg.halted) {
      if (on_transition) on_transition();
      const Transition t = spec_.transition(cfg.state, cfg.last);
      if (spec_.internal_bits < 64 && (t.next_state >> spec_.internal_bits) != 0) {
        throw Error(ErrorCode::BadMachine, "next state " + std::to_string(t.next_state) +
                                               " does not fit in internal_bits");
      }
      cfg.state = t.next_state;
      const Action& a = t.action;
      switch (a.kind) {
        case ActionKind::ReadTape:
          check_addr(a.addr);
          return a.addr;
        case ActionKind::WriteTape:
          check_addr(a.addr);
          on_write(a.addr, static_cast<Bit>(a.bit & 1U));
          cfg.last.reset();
          break;
        case ActionKind::ReadInput:
          if (a.addr >= spec_.input.size()) {
            throw Error(ErrorCode::BadMachine, "input position " + std::to_string(a.addr) +
                                                   " out of range");
          }
          cfg.last = spec_.input[a.addr];
          break;
        case ActionKind::Halt:
          cfg.halted = true;
          cfg.last.reset();
          if (output) *output = a.output;
          return std::nullopt;
      }
      if (++free_actions > spec_.max_free_actions) {
        throw Error(ErrorCode::StepLimitExceeded, "more than " +
                                                      std::to_string(spec_.max_free_actions) +
                                                      " consecutive actions without a tape read");
      }
    }
    return std::nullopt;
  }

 private:
  void check_addr(Address addr) const {
    if (spec_.tape_addr_bits < 64 && (addr >> spec_.tape_addr_bits) != 0) {
      throw Error(ErrorCode::BadMachine, "tape address " + std::to_string(addr) + " out of range");
    }
  }

  const MachineSpec& spec_;
};

RunResult naive(const MachineSpec& spec, Step budget, bool to_halt) {
  check_spec(spec);
  RunResult r;
  r.config = initial_config(spec);
  std::unordered_map<Address, Bit> tape;
  Runner runner(spec);
  auto on_write = [&](Address addr, Bit bit) {
    tape[addr] = bit;
    r.trace.push_back({r.reads, false, addr, bit});
  };
  // Without to_halt the run stops at the read boundary right after `budget`
  // reads; with it, the machine must reach Halt before asking for one more.
  while (to_halt || r.reads < budget) {
    const auto addr = runner.to_read(r.config, on_write, &r.output);
    if (!addr) break;
    if (r.reads == budget) {
      throw BudgetExceededError("machine still running after " + std::to_string(budget) + " reads",
                                std::move(r));
    }
    auto it = tape.find(*addr);
    const Bit bit = it == tape.end() ? 0 : it->second;
    r.trace.push_back({r.reads, true, *addr, bit});
    r.config.last = bit;
    ++r.reads;
  }
  r.halted = r.config.halted;
  return r;
}

struct OverBudget {};

class Meter {
 public:
  explicit Meter(std::uint64_t budget = std::numeric_limits<std::uint64_t>::max(),
                 std::uint64_t transition_limit = std::numeric_limits<std::uint64_t>::max())
      : budget_(budget), transition_limit_(transition_limit) {}

  void charge(std::uint64_t bits) {
    if (bits > budget_ - current_) throw OverBudget{};
    current_ += bits;
    report_.peak_bits = std::max(report_.peak_bits, current_);
  }
  void release(std::uint64_t bits) { current_ -= bits; }

  void enter_frame() {
    ++frames_;
    report_.peak_frames = std::max(report_.peak_frames, frames_);
  }
  void leave_frame() { --frames_; }

  void add_copy() {
    ++copies_;
    report_.live_state_copies = std::max(report_.live_state_copies, copies_);
    if (copies_ > frames_) report_.copies_within_frames = false;
  }
  void drop_copy() { --copies_; }

  void list_bits(std::uint64_t bits) {
    report_.stored_list_bits = std::max(report_.stored_list_bits, bits);
  }

  void transition() {
    if (transitions_ >= transition_limit_) {
      throw Error(ErrorCode::StepLimitExceeded,
                  "transition limit " + std::to_string(transition_limit_) + " reached");
    }
    ++transitions_;
  }
  void recompute() { ++report_.recompute_count; }
  void pass() { ++report_.passes; }
  void run() { ++report_.runs; }

  std::uint64_t transitions() const { return transitions_; }
  void set_transitions(std::uint64_t t) { transitions_ = t; }

  RamSpaceReport report() const {
    RamSpaceReport r = report_;
    r.transitions = transitions_;
    return r;
  }

 private:
  std::uint64_t budget_;
  std::uint64_t transition_limit_;
  std::uint64_t current_ = 0;
  std::uint64_t frames_ = 0;
  std::uint64_t copies_ = 0;
  std::uint64_t transitions_ = 0;
  RamSpaceReport report_;
};

/// Storage held by a frame; can grow and be released before the frame ends.
class Charge {
 public:
  explicit Charge(Meter& meter, std::uint64_t bits = 0) : meter_(meter) { grow(bits); }
  ~Charge() { reset(); }
  Charge(const Charge&) = delete;
  Charge& operator=(const Charge&) = delete;

  void grow(std::uint64_t bits) {
    meter_.charge(bits);
    bits_ += bits;
  }
  void resize(std::uint64_t bits) {
    if (bits > bits_) {
      grow(bits - bits_);
    } else {
      meter_.release(bits_ - bits);
      bits_ = bits;
    }
  }
  void reset() { resize(0); }

 private:
  Meter& meter_;
  std::uint64_t bits_ = 0;
};

/// One live copy of the machine configuration.
class StateCopy {
 public:
  StateCopy(Meter& meter, unsigned width) : meter_(meter), storage_(meter, width) {
    meter_.add_copy();
  }
  ~StateCopy() { meter_.drop_copy(); }
  StateCopy(const StateCopy&) = delete;
  StateCopy& operator=(const StateCopy&) = delete;

 private:
  Meter& meter_;
  Charge storage_;
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

/// A tape-bit question about the end of an interval; `demand` is the read
/// step that originally asked for it.
struct TapeAsk {
  Address addr;
  Step demand;
};

struct Ask {
  bool full = true;
  TapeAsk tape{0, 0};
};

struct Answer {
  Config config;
  Bit bit = 0;
};

/// Raised by a strategy-B list source for a demanded read it has no entry
/// for yet; caught by the frame that owns the list.
struct NeedEntry {
  const void* owner;
  Address addr;
  Step demand;
};

class Simulator {
 public:
  Simulator(const MachineSpec& spec, const BlockSimOptions& options, Step threshold, Meter& meter)
      : spec_(spec), options_(options), threshold_(threshold), meter_(&meter), runner_(spec) {
    runner_.on_transition = [this] { meter_->transition(); };
  }

  void set_meter(Meter& meter) { meter_ = &meter; }

  Answer eval(StepInterval iv, const StateSource& src, const Ask& ask) {
    if (iv.size() < threshold_ || iv.size() < 2) return replay(iv, src, ask);
    FrameScope frame(*meter_);
    const Step b = iv.a + iv.size() / 2;
    if (!options_.budget_search) {
      return options_.plan.at(iv) == Strategy::A ? split_a(iv, b, src, ask)
                                                 : split_b(iv, b, src, ask);
    }
    try {
      return split_b(iv, b, src, ask);
    } catch (const OverBudget&) {
    }
    return split_a(iv, b, src, ask);
  }

  /// Replay frame: one running configuration, the read bits of the current
  /// pass prefix, a tracked address with its value, and a read counter.
  Answer replay(StepInterval iv, const StateSource& src, const Ask& ask,
               BitVec* reads_out = nullptr) {
    FrameScope frame(*meter_);
    const Step m = iv.size();
    StateCopy running(*meter_, config_width(spec_));
    Charge registers(*meter_, spec_.tape_addr_bits + 2 + ceil_log2(m + 1));
    Charge read_storage(*meter_);
    BitVec reads;
    auto no_write = [](Address, Bit) {};

    Config cfg = src.config();
    Config final_cfg = cfg;
    std::optional<Address> next;
    if (m > 0) {
      meter_->run();
      next = runner_.to_read(cfg, no_write);
      if (!next) final_cfg = cfg;
    }
    for (Step j = 0; j < m && next; ++j) {
      meter_->run();
      meter_->pass();
      cfg = src.config();
      const Address x = *next;
      bool written = false;
      Bit tracked = 0;
      auto watch = [&](Address addr, Bit bit) {
        if (addr == x) {
          written = true;
          tracked = bit;
        }
      };
      for (Step idx = 0;; ++idx) {
        const auto addr = runner_.to_read(cfg, watch);
        if (!addr) throw std::logic_error("replay diverged: machine halted before a known read");
        if (idx < j) {
          // A cell read earlier in this interval already has a known value.
          watch(*addr, reads[idx]);
          cfg.last = reads[idx];
          continue;
        }
        if (*addr != x) throw std::logic_error("replay diverged: read address changed");
        const Bit bit = written ? tracked : src.tape_bit(x, iv.a + j);
        read_storage.grow(1);
        reads.push_back(bit);
        cfg.last = bit;
        break;
      }
      final_cfg = cfg;
      if (j + 1 < m) {
        next = runner_.to_read(cfg, no_write);
        if (!next) final_cfg = cfg;
      }
    }
    if (reads_out) *reads_out = reads;
    if (ask.full) return {final_cfg, 0};

    // One more run from the start, watching the queried address up to time c.
    meter_->run();
    cfg = src.config();
    bool written = false;
    Bit tracked = 0;
    auto watch = [&](Address addr, Bit bit) {
      if (addr == ask.tape.addr) {
        written = true;
        tracked = bit;
      }
    };
    bool halted = false;
    for (Step idx = 0; idx < reads.size(); ++idx) {
      const auto addr = runner_.to_read(cfg, watch);
      if (!addr) {
        halted = true;
        break;
      }
      watch(*addr, reads[idx]);
      cfg.last = reads[idx];
    }
    if (!halted && reads.size() < m) runner_.to_read(cfg, watch);
    const Bit bit = written ? tracked : src.tape_bit(ask.tape.addr, ask.tape.demand);
    return {final_cfg, bit};
  }

  Answer split_a(StepInterval iv, Step b, const StateSource& src, const Ask& ask) {
    const StepInterval left{iv.a, b};
    const Config at_b = eval(left, src, Ask{}).config;
    StateCopy snapshot(*meter_, config_width(spec_));
    StateSource upper{[&] { return at_b; },
                      [&](Address addr, Step demand) -> Bit {
                        meter_->recompute();
                        return eval(left, src, Ask{false, {addr, demand}}).bit;
                      }};
    return eval({b, iv.c}, upper, ask);
  }

  Answer split_b(StepInterval iv, Step b, const StateSource& src, const Ask& ask) {
    const StepInterval left{iv.a, b};
    const Config at_b = eval(left, src, Ask{}).config;
    std::optional<StateCopy> snapshot;
    snapshot.emplace(*meter_, config_width(spec_));
    std::optional<Charge> list_storage;
    list_storage.emplace(*meter_);

    ListFrame frame;
    const StateSource upper = list_source(iv, b, at_b, frame);
    Answer answer;
    for (;;) {
      frame.deferred = false;
      try {
        answer = eval({b, iv.c}, upper, ask);
        break;
      } catch (const NeedEntry& need) {
        if (need.owner != &frame) throw;
        extend(iv, b, src, upper, frame, ask, need, *list_storage);
      }
    }
    if (!frame.deferred) return answer;

    // The queried cell is first needed after c: its time-c value is its
    // time-b value, which the lower half answers without the list.
    list_storage.reset();
    snapshot.reset();
    return {answer.config, eval(left, src, Ask{false, ask.tape}).bit};
  }

  StoredReadList build_list(StepInterval iv, Step b, const StateSource& src) {
    FrameScope scope(*meter_);
    const StepInterval left{iv.a, b};
    const Config at_b = eval(left, src, Ask{}).config;
    StateCopy snapshot(*meter_, config_width(spec_));
    Charge list_storage(*meter_);
    ListFrame frame;
    const StateSource upper = list_source(iv, b, at_b, frame);
    for (;;) {
      try {
        eval({b, iv.c}, upper, Ask{});
        return frame.list;
      } catch (const NeedEntry& need) {
        if (need.owner != &frame) throw;
        extend(iv, b, src, upper, frame, Ask{}, need, list_storage);
      }
    }
  }

 private:
  struct ListFrame {
    StoredReadList list;
    std::vector<Step> offsets;
    bool deferred = false;
    /// When set, a lookup of this entry unwinds instead of answering.
    std::optional<std::size_t> probe;
  };

  /// Appends the entry the upper half just asked for. With re-verification
  /// on, every earlier entry is then checked again: the upper half is rerun
  /// up to that entry's lookup, unwound, and the lower half recomputes it.
  /// Nothing of the upper half is live while the lower half runs.
  void extend(StepInterval iv, Step b, const StateSource& src, const StateSource& upper,
              ListFrame& frame, const Ask& ask, const NeedEntry& need, Charge& storage) {
    const StepInterval left{iv.a, b};
    const Bit bit = eval(left, src, Ask{false, {need.addr, need.demand}}).bit;
    const Step offset = need.demand - b;
    const Step next = frame.offsets.empty() ? 0 : frame.offsets.back() + 1;
    if (offset < next) throw std::logic_error("stored-read list extended out of order");
    frame.list.entries.push_back({offset - next, bit});
    frame.offsets.push_back(offset);
    const auto bits = encode(frame.list).total_bits();
    storage.resize(bits);
    meter_->list_bits(bits);
    if (!options_.reverify) return;
    for (std::size_t i = 0; i + 1 < frame.offsets.size(); ++i) {
      frame.probe = i;
      std::optional<NeedEntry> hit;
      try {
        eval({b, iv.c}, upper, ask);
      } catch (const NeedEntry& probed) {
        if (probed.owner != &frame) {
          frame.probe.reset();
          throw;
        }
        hit = probed;
      }
      frame.probe.reset();
      frame.deferred = false;
      if (!hit) throw std::logic_error("stored-read entry not reached on verification");
      const Bit fresh = eval(left, src, Ask{false, {hit->addr, hit->demand}}).bit;
      if (fresh != frame.list.entries[i].bit) {
        throw std::logic_error("stored-read entry failed verification");
      }
    }
  }

  /// Source for b..c backed by the time-b snapshot and the stored-read list.
  StateSource list_source(StepInterval iv, Step b, const Config& at_b, ListFrame& frame) {
    return {[&at_b] { return at_b; },
            [iv, b, &frame](Address addr, Step demand) -> Bit {
              if (demand >= iv.c) {
                frame.deferred = true;
                return 0;
              }
              const auto it =
                  std::lower_bound(frame.offsets.begin(), frame.offsets.end(), demand - b);
              if (it == frame.offsets.end() || *it != demand - b) {
                throw NeedEntry{&frame, addr, demand};
              }
              const auto i = static_cast<std::size_t>(it - frame.offsets.begin());
              if (frame.probe == i) throw NeedEntry{&frame, addr, demand};
              return frame.list.entries[i].bit;
            }};
  }

  const MachineSpec& spec_;
  const BlockSimOptions& options_;
  Step threshold_;
  Meter* meter_;
  Runner runner_;
};

}  // namespace

RunResult naive_run(const MachineSpec& spec, Step time_budget) {
  return naive(spec, time_budget, false);
}

RunResult naive_run_to_halt(const MachineSpec& spec, Step time_budget) {
  return naive(spec, time_budget, true);
}

ReplayResult replay_run(const MachineSpec& spec, Step m, const Config& start) {
  StateSource src = StateSource::initial(spec);
  src.config = [start] { return start; };
  return replay_run(spec, m, src);
}

ReplayResult replay_run(const MachineSpec& spec, Step m, const StateSource& start) {
  check_spec(spec);
  Meter meter;
  BlockSimOptions options;
  Simulator sim(spec, options, std::numeric_limits<Step>::max(), meter);
  ReplayResult out;
  out.config = sim.replay({0, m}, start, Ask{}, &out.read_bits).config;
  out.report = meter.report();
  return out;
}

Step default_base_threshold(const MachineSpec& spec, Step n) {
  if (n <= 1) return 1;
  const double e = (1.0 + to_double(spec.delta)) / 2.0;
  auto t = static_cast<Step>(std::ceil(std::pow(static_cast<double>(n), e) - 1e-9));
  return std::max<Step>(t, 1);
}

BlockSimResult block_sim(const MachineSpec& spec, StepInterval iv, const StateSource& source,
                         StateQuery query, const BlockSimOptions& options) {
  check_spec(spec);
  if (iv.c < iv.a) throw Error(ErrorCode::BadInterval, "interval end before start");
  if (query.kind == StateQuery::Kind::ConfigBit && query.index >= config_width(spec)) {
    throw Error(ErrorCode::BadInputIndex, "config bit " + std::to_string(query.index) +
                                              " out of range");
  }
  const Step threshold = options.base_threshold.value_or(default_base_threshold(spec, iv.size()));
  const Ask ask = query.kind == StateQuery::Kind::TapeBit ? Ask{false, {query.index, iv.c}} : Ask{};

  auto finish = [&](const Answer& ans, const Meter& meter) {
    BlockSimResult r;
    r.config = ans.config;
    r.value = query.kind == StateQuery::Kind::TapeBit
                  ? ans.bit
                  : query.kind == StateQuery::Kind::ConfigBit
                        ? config_bit(spec, ans.config, static_cast<unsigned>(query.index))
                        : 0;
    r.report = meter.report();
    return r;
  };

  if (!options.budget_search) {
    Meter meter(std::numeric_limits<std::uint64_t>::max(), options.transition_limit);
    Simulator sim(spec, options, threshold, meter);
    return finish(sim.eval(iv, source, ask), meter);
  }
  std::uint64_t transitions = 0;
  for (std::uint64_t budget = 1;;) {
    Meter meter(budget, options.transition_limit);
    meter.set_transitions(transitions);
    Simulator sim(spec, options, threshold, meter);
    try {
      auto r = finish(sim.eval(iv, source, ask), meter);
      r.report.budget = budget;
      return r;
    } catch (const OverBudget&) {
      transitions = meter.transitions();
    }
    if (budget > (std::uint64_t{1} << 62)) throw Error(ErrorCode::BudgetExceeded, "no budget suffices");
    budget = options.schedule == RamBudgetSchedule::Doubling ? budget * 2 : budget + 1;
  }
}

StoredReadList build_stored_list(const MachineSpec& spec, const StateSource& source, Step a,
                                 Step b, Step c, const BlockSimOptions& options) {
  check_spec(spec);
  if (!(a <= b && b <= c)) throw Error(ErrorCode::BadInterval, "need a <= b <= c");
  Meter meter;
  const Step threshold = options.base_threshold.value_or(default_base_threshold(spec, c - a));
  Simulator sim(spec, options, threshold, meter);
  return sim.build_list({a, c}, b, source);
}

bool verify_stored_list(const MachineSpec& spec, const StateSource& source, Step a, Step b,
                        Step c, const StoredReadList& guess, const BlockSimOptions& options) {
  check_spec(spec);
  if (!(a <= b && b <= c)) throw Error(ErrorCode::BadInterval, "need a <= b <= c");
  Meter meter;
  const Step threshold = options.base_threshold.value_or(default_base_threshold(spec, c - a));
  Simulator sim(spec, options, threshold, meter);
  const Config at_b = sim.eval({a, b}, source, Ask{}).config;
  const auto offsets = guess.offsets();
  std::vector<Step> demanded;
  bool ok = true;
  StateSource upper{[&] { return at_b; },
                    [&](Address addr, Step demand) -> Bit {
                      if (demand >= c) return 0;
                      const Step off = demand - b;
                      if (std::find(demanded.begin(), demanded.end(), off) == demanded.end()) {
                        demanded.push_back(off);
                      }
                      auto it = std::find(offsets.begin(), offsets.end(), off);
                      if (it == offsets.end()) {
                        ok = false;
                        return 0;
                      }
                      const Bit claimed = guess.entries[static_cast<std::size_t>(it - offsets.begin())].bit;
                      if (claimed != sim.eval({a, b}, source, Ask{false, {addr, demand}}).bit) ok = false;
                      return claimed;
                    }};
  sim.eval({b, c}, upper, Ask{});
  std::sort(demanded.begin(), demanded.end());
  return ok && demanded == offsets;
}

std::uint64_t ram_edges(const std::vector<TraceEvent>& trace, StepInterval source,
                        StepInterval dest) {
  // Never-written cells behave as if written at time 0, by the initial interval.
  std::unordered_map<Address, Step> last_write;
  std::uint64_t count = 0;
  for (const auto& e : trace) {
    if (!e.is_read) {
      last_write[e.addr] = e.step;
      continue;
    }
    if (e.step < dest.a || e.step >= dest.c) continue;
    auto it = last_write.find(e.addr);
    const Step w = it == last_write.end() ? 0 : it->second;
    if (w >= source.a && w < source.c) ++count;
  }
  return count;
}

std::uint64_t ram_edge_total(const std::vector<TraceEvent>& trace, StepInterval iv,
                             Step base_threshold) {
  if (iv.size() < base_threshold || iv.size() < 2) return iv.size();
  const Step b = iv.a + iv.size() / 2;
  return ram_edge_total(trace, {iv.a, b}, base_threshold) +
         ram_edge_total(trace, {b, iv.c}, base_threshold) +
         ram_edges(trace, {iv.a, b}, {b, iv.c});
}

}  // namespace spacesim::ramsim
