#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spacesim::blockeval {

/// Half-open gate interval a..c (gates a, a+1, ..., c-1).
struct Interval {
  std::size_t a = 0;
  std::size_t c = 0;

  std::size_t size() const noexcept { return c - a; }
  bool contains(std::size_t g) const noexcept { return g >= a && g < c; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// A: recompute the lower half on every crossing-wire demand.
/// B: evaluate the lower half once and keep one bit per crossing wire.
enum class Strategy : std::uint8_t { A, B };

struct PlanNode {
  Interval interval;
  bool is_split = false;
  std::size_t b = 0;
  Strategy strategy = Strategy::B;
  std::int32_t left = -1;
  std::int32_t right = -1;

  friend bool operator==(const PlanNode&, const PlanNode&) = default;
};

/// Binary tree of interval decisions, stored as a flat arena with the root at
/// index 0 and children laid out in pre-order.
class Plan {
 public:
  static Plan direct(Interval interval);
  static Plan split(Interval interval, std::size_t b, Strategy strategy, const Plan& left,
                    const Plan& right);

  const PlanNode& root() const { return nodes_.front(); }
  const PlanNode& node(std::int32_t index) const { return nodes_[static_cast<std::size_t>(index)]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  /// Number of split levels on the longest root-to-leaf path.
  std::size_t depth() const;

  friend bool operator==(const Plan&, const Plan&) = default;

 private:
  friend class PlanBuilder;
  std::vector<PlanNode> nodes_;
};

/// Incremental pre-order construction, used by the planner and the parser.
class PlanBuilder {
 public:
  /// Reserves a node slot and returns its index.
  std::int32_t add_direct(Interval interval);
  std::int32_t add_split(Interval interval, std::size_t b, Strategy strategy);
  void set_children(std::int32_t parent, std::int32_t left, std::int32_t right);
  void set_strategy(std::int32_t node, Strategy strategy);
  /// Index the next added node will receive.
  std::int32_t next_index() const noexcept { return static_cast<std::int32_t>(nodes_.size()); }
  Plan finish() &&;

 private:
  std::vector<PlanNode> nodes_;
};

/// `(direct a c)` / `(split a c b A|B <left> <right>)`, one node per line,
/// children indented two spaces per level.
std::string write_plan(const Plan& plan);
Plan parse_plan(std::string_view text);
Plan read_plan_file(const std::string& path);

}  // namespace spacesim::blockeval
