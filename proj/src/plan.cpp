#include "spacesim/plan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "spacesim/error.hpp"

namespace spacesim::blockeval {

std::int32_t PlanBuilder::add_direct(Interval interval) {
  nodes_.push_back(PlanNode{interval, false, 0, Strategy::B, -1, -1});
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t PlanBuilder::add_split(Interval interval, std::size_t b, Strategy strategy) {
  nodes_.push_back(PlanNode{interval, true, b, strategy, -1, -1});
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

void PlanBuilder::set_children(std::int32_t parent, std::int32_t left, std::int32_t right) {
  auto& node = nodes_[static_cast<std::size_t>(parent)];
  node.left = left;
  node.right = right;
}

void PlanBuilder::set_strategy(std::int32_t node, Strategy strategy) {
  nodes_[static_cast<std::size_t>(node)].strategy = strategy;
}

Plan PlanBuilder::finish() && {
  if (nodes_.empty()) throw Error(ErrorCode::MalformedPlan, "empty plan");
  Plan plan;
  plan.nodes_ = std::move(nodes_);
  return plan;
}

Plan Plan::direct(Interval interval) {
  PlanBuilder builder;
  builder.add_direct(interval);
  return std::move(builder).finish();
}

Plan Plan::split(Interval interval, std::size_t b, Strategy strategy, const Plan& left,
                 const Plan& right) {
  Plan plan;
  plan.nodes_.reserve(1 + left.nodes_.size() + right.nodes_.size());
  plan.nodes_.push_back(PlanNode{interval, true, b, strategy, 1, 0});
  auto append = [&plan](const Plan& sub) {
    const auto offset = static_cast<std::int32_t>(plan.nodes_.size());
    for (PlanNode n : sub.nodes_) {
      if (n.is_split) {
        n.left += offset;
        n.right += offset;
      }
      plan.nodes_.push_back(n);
    }
    return offset;
  };
  append(left);
  plan.nodes_[0].right = append(right);
  return plan;
}

std::size_t Plan::depth() const {
  // Children always follow their parent in the arena, so a reverse sweep
  // sees both subtrees before the node itself.
  std::vector<std::size_t> d(nodes_.size(), 0);
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const auto& n = nodes_[i];
    if (n.is_split) {
      d[i] = 1 + std::max(d[static_cast<std::size_t>(n.left)], d[static_cast<std::size_t>(n.right)]);
    }
  }
  return d.empty() ? 0 : d[0];
}

namespace {

void write_node(std::ostringstream& out, const Plan& plan, std::int32_t index, int indent) {
  const auto& n = plan.node(index);
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  if (!n.is_split) {
    out << "(direct " << n.interval.a << ' ' << n.interval.c << ")";
    return;
  }
  out << "(split " << n.interval.a << ' ' << n.interval.c << ' ' << n.b << ' '
      << (n.strategy == Strategy::A ? 'A' : 'B') << '\n';
  write_node(out, plan, n.left, indent + 1);
  out << '\n';
  write_node(out, plan, n.right, indent + 1);
  out << ')';
}

class PlanParser {
 public:
  explicit PlanParser(std::string_view text) : text_(text) {}

  Plan parse() {
    node();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after plan");
    return std::move(builder_).finish();
  }

 private:
  std::int32_t node() {
    expect('(');
    const auto kind = word();
    if (kind == "direct") {
      Interval iv{number(), number()};
      expect(')');
      return builder_.add_direct(iv);
    }
    if (kind != "split") fail("expected 'direct' or 'split', got '" + std::string(kind) + "'");
    Interval iv{number(), number()};
    const auto b = number();
    const auto strat = word();
    if (strat != "A" && strat != "B") fail("strategy must be A or B");
    const auto self = builder_.add_split(iv, b, strat == "A" ? Strategy::A : Strategy::B);
    const auto left = node();
    const auto right = node();
    builder_.set_children(self, left, right);
    expect(')');
    return self;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '\n') {
        ++line_;
      } else if (ch != ' ' && ch != '\t' && ch != '\r') {
        break;
      }
      ++pos_;
    }
  }

  void expect(char ch) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  std::string_view word() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected a keyword");
    return text_.substr(start, pos_ - start);
  }

  std::size_t number() {
    skip_ws();
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "plan line " + std::to_string(line_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  PlanBuilder builder_;
};

}  // namespace

std::string write_plan(const Plan& plan) {
  std::ostringstream out;
  write_node(out, plan, 0, 0);
  out << '\n';
  return out.str();
}

Plan parse_plan(std::string_view text) { return PlanParser(text).parse(); }

Plan read_plan_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open plan file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

}  // namespace spacesim::blockeval
