#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spacesim/bits.hpp"
#include "spacesim/error.hpp"
#include "spacesim/plan.hpp"
#include "spacesim/rational.hpp"
#include "spacesim/stored_list.hpp"

namespace spacesim::ramsim {

using Address = std::uint64_t;
/// Time is counted in tape reads; writes, input reads and internal work are free.
using Step = std::uint64_t;
using blockeval::Strategy;

enum class ActionKind : std::uint8_t { ReadTape, WriteTape, ReadInput, Halt };

struct Action {
  ActionKind kind = ActionKind::Halt;
  /// Tape address (ReadTape/WriteTape) or input position (ReadInput).
  Address addr = 0;
  Bit bit = 0;
  BitVec output;

  static Action read_tape(Address addr) { return {ActionKind::ReadTape, addr, 0, {}}; }
  static Action write_tape(Address addr, Bit bit) { return {ActionKind::WriteTape, addr, bit, {}}; }
  static Action read_input(Address pos) { return {ActionKind::ReadInput, pos, 0, {}}; }
  static Action halt(BitVec output = {}) { return {ActionKind::Halt, 0, 0, std::move(output)}; }

  friend bool operator==(const Action&, const Action&) = default;
};

struct Transition {
  std::uint64_t next_state = 0;
  Action action;
};

/// (internal state, bit delivered by the previous ReadTape/ReadInput) -> transition.
using TransitionFn = std::function<Transition(std::uint64_t, std::optional<Bit>)>;

struct MachineSpec {
  std::string name;
  Rational delta{1, 2};
  /// Width of the internal state, at most 64.
  unsigned internal_bits = 1;
  BitVec input;
  /// The tape has 2^tape_addr_bits cells, all initially 0.
  unsigned tape_addr_bits = 16;
  std::uint64_t initial_state = 0;
  TransitionFn transition;
  /// Guard against machines that loop forever without reading the tape.
  std::uint64_t max_free_actions = 1U << 20;
};

/// Machine configuration at a read boundary: right after the t-th tape read
/// has been delivered (t = 0 is the initial configuration).
struct Config {
  std::uint64_t state = 0;
  std::optional<Bit> last;
  bool halted = false;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Configuration bits: internal state bits 0..internal_bits-1, then
/// has-last, last value, halted.
unsigned config_width(const MachineSpec& spec);
Bit config_bit(const MachineSpec& spec, const Config& config, unsigned index);
BitVec config_bits(const MachineSpec& spec, const Config& config);
Config initial_config(const MachineSpec& spec);

/// One tape access. Reads carry their 0-based read index; writes carry the
/// number of reads completed before them, so a write stamped t happens
/// inside interval t..t+1, before read t.
struct TraceEvent {
  Step step = 0;
  bool is_read = false;
  Address addr = 0;
  Bit bit = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct RunResult {
  Config config;
  std::vector<TraceEvent> trace;
  Step reads = 0;
  bool halted = false;
  BitVec output;
};

/// Direct simulation with a sparse tape; stops after `time_budget` reads or at Halt.
RunResult naive_run(const MachineSpec& spec, Step time_budget);

class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, RunResult partial)
      : Error(ErrorCode::BudgetExceeded, what), partial_(std::move(partial)) {}
  const RunResult& partial() const noexcept { return partial_; }

 private:
  RunResult partial_;
};

/// Like naive_run, but a machine still running after `time_budget` reads is
/// an error carrying the partial trace.
RunResult naive_run_to_halt(const MachineSpec& spec, Step time_budget);

/// Half-open interval of read steps.
struct StepInterval {
  Step a = 0;
  Step c = 0;

  Step size() const noexcept { return c - a; }
  friend auto operator<=>(const StepInterval&, const StepInterval&) = default;
};

/// Access to the machine state at the start of an interval. `tape_bit`
/// receives the absolute read step whose evaluation needs the value.
struct StateSource {
  std::function<Config()> config;
  std::function<Bit(Address addr, Step demand)> tape_bit;

  /// Initial configuration over an all-zero tape.
  static StateSource initial(const MachineSpec& spec);
};

struct RamSpaceReport {
  std::uint64_t peak_bits = 0;
  std::uint64_t live_state_copies = 0;
  std::uint64_t stored_list_bits = 0;
  std::uint64_t peak_frames = 0;
  std::uint64_t recompute_count = 0;
  /// Read extensions performed by replay frames.
  std::uint64_t passes = 0;
  /// Machine runs started from a checkpoint (replay passes plus discovery runs).
  std::uint64_t runs = 0;
  std::uint64_t transitions = 0;
  std::uint64_t budget = 0;
  /// False if live state copies ever exceeded the number of live frames.
  bool copies_within_frames = true;
};

std::string to_json(const RamSpaceReport& report);

struct ReplayResult {
  Config config;
  BitVec read_bits;
  RamSpaceReport report;
};

/// Replays m reads from `start` storing only the configuration, the bits
/// read so far, and one tracked address: pass j re-runs the machine from the
/// start and learns read j's value by watching the single address read j
/// uses (found at the end of the previous run) for writes and earlier reads.
ReplayResult replay_run(const MachineSpec& spec, Step m, const Config& start);
ReplayResult replay_run(const MachineSpec& spec, Step m, const StateSource& start);

/// What block_sim reports about the state at the end of its interval.
struct StateQuery {
  enum class Kind : std::uint8_t { ConfigBit, TapeBit, Full };
  Kind kind = Kind::Full;
  std::uint64_t index = 0;  // config bit index or tape address

  static StateQuery config_bit(unsigned i) { return {Kind::ConfigBit, i}; }
  static StateQuery tape_bit(Address addr) { return {Kind::TapeBit, addr}; }
  static StateQuery full() { return {Kind::Full, 0}; }
};

/// Per-interval strategy choices for block_sim; unlisted intervals use `fallback`.
struct RamPlan {
  Strategy fallback = Strategy::B;
  std::map<StepInterval, Strategy> choices;

  Strategy at(StepInterval iv) const;
  static RamPlan uniform(Strategy s) { return {s, {}}; }
};

enum class RamBudgetSchedule { Doubling, Increment };

struct BlockSimOptions {
  /// Intervals shorter than this are replayed directly. Defaults to
  /// ceil(n^((1+delta)/2)) for a root interval of n reads.
  std::optional<Step> base_threshold;
  RamPlan plan;
  /// Replace the plan by depth-first search over strategies under growing budgets.
  bool budget_search = false;
  RamBudgetSchedule schedule = RamBudgetSchedule::Doubling;
  /// Re-check every stored entry against a fresh recomputation on each
  /// extension run while building a stored-read list.
  bool reverify = true;
  std::uint64_t transition_limit = std::numeric_limits<std::uint64_t>::max();
};

struct BlockSimResult {
  Bit value = 0;
  Config config;  // filled for Full queries
  RamSpaceReport report;
};

Step default_base_threshold(const MachineSpec& spec, Step n);

/// Answers `query` about the state at time iv.c, given access to the state at iv.a.
BlockSimResult block_sim(const MachineSpec& spec, StepInterval iv, const StateSource& source,
                         StateQuery query, const BlockSimOptions& options = {});

/// Builds the stored-read list strategy B keeps for the upper half b..c of
/// a..c: time-b values of every read in b..c whose address was not written
/// earlier in b..c, in read order.
StoredReadList build_stored_list(const MachineSpec& spec, const StateSource& source, Step a,
                                 Step b, Step c, const BlockSimOptions& options = {});

/// True when evaluating b..c against `guess` demands exactly the listed read
/// offsets and every listed bit equals the true time-b value.
bool verify_stored_list(const MachineSpec& spec, const StateSource& source, Step a, Step b,
                        Step c, const StoredReadList& guess, const BlockSimOptions& options = {});

/// Read accesses in c..d whose address was last written within a..b
/// (per access). A cell never written before its read counts as written at
/// step 0, so such reads belong to whichever source interval holds step 0.
std::uint64_t ram_edges(const std::vector<TraceEvent>& trace, StepInterval source,
                        StepInterval dest);

/// Edges(a..c) as the recursion defines it: c-a below the base threshold,
/// otherwise Edges(a..b) + Edges(b..c) + ram_edges(a..b, b..c) at the midpoint.
std::uint64_t ram_edge_total(const std::vector<TraceEvent>& trace, StepInterval iv,
                             Step base_threshold);

}  // namespace spacesim::ramsim
