#include "coevo/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "coevo/error.hpp"

namespace coevo {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "process_span", "min_process_span", "op_number", "start_time", "earliest_start", "proc_time", "machine_number",
};

struct OpSpec {
  ExprOp op;
  std::string_view name;
  int min_arity;
  int max_arity;
};

constexpr std::array<OpSpec, 9> kOps = {{
    {ExprOp::Add, "add", 2, 8},
    {ExprOp::Sub, "sub", 2, 2},
    {ExprOp::Mul, "mul", 2, 8},
    {ExprOp::Div, "div", 2, 2},
    {ExprOp::Min, "min", 2, 8},
    {ExprOp::Max, "max", 2, 8},
    {ExprOp::Neg, "neg", 1, 1},
    {ExprOp::Sqrt, "sqrt", 1, 1},
    {ExprOp::Log, "log", 1, 1},
}};

double clamp_value(double v) {
  if (std::isnan(v)) return 0.0;
  return std::clamp(v, -PriorityExpr::kValueLimit, PriorityExpr::kValueLimit);
}

class Parser {
public:
  Parser(std::string_view text, std::optional<GeneLevel> level, ExprLimits limits)
      : text_(text), level_(level), limits_(limits) {}

  std::vector<PriorityExpr::Node> run() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    parse_node(1);
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return std::move(nodes_);
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::GrammarError, fmt::format("{} at position {}", what, pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void push(PriorityExpr::Node node) {
    if (static_cast<int>(nodes_.size()) >= limits_.max_nodes) {
      throw Error(ErrorCode::BoundsExceeded, fmt::format("more than {} nodes", limits_.max_nodes));
    }
    nodes_.push_back(node);
  }

  void parse_node(int depth) {
    if (depth > limits_.max_depth) {
      throw Error(ErrorCode::BoundsExceeded, fmt::format("depth exceeds {}", limits_.max_depth));
    }
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == ')') fail("unexpected ')'");
    if (text_[pos_] != '(') {
      parse_atom();
      return;
    }
    ++pos_;
    skip_space();
    const auto head_pos = pos_;
    const auto head = atom();
    const auto spec = std::find_if(kOps.begin(), kOps.end(), [&](const OpSpec& s) { return s.name == head; });
    if (spec == kOps.end()) {
      pos_ = head_pos;
      fail(fmt::format("unknown operator '{}'", head));
    }
    const auto slot = nodes_.size();
    push({spec->op, 0});
    int arity = 0;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      parse_node(depth + 1);
      ++arity;
    }
    if (arity < spec->min_arity || arity > spec->max_arity) {
      fail(fmt::format("'{}' takes {}..{} arguments, got {}", spec->name, spec->min_arity, spec->max_arity, arity));
    }
    nodes_[slot].arity = static_cast<std::uint8_t>(arity);
  }

  void parse_atom() {
    const auto start = pos_;
    const auto token = atom();
    if (auto feature = feature_from_name(token)) {
      if (level_ && feature_level(*feature) != *level_) {
        pos_ = start;
        fail(fmt::format("terminal '{}' is not available at this level", token));
      }
      PriorityExpr::Node node{ExprOp::Terminal};
      node.feature = *feature;
      push(node);
      return;
    }
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      pos_ = start;
      fail(fmt::format("unknown symbol '{}'", token));
    }
    PriorityExpr::Node node{ExprOp::Literal};
    node.value = value;
    push(node);
  }

  std::string_view text_;
  std::optional<GeneLevel> level_;
  ExprLimits limits_;
  std::size_t pos_ = 0;
  std::vector<PriorityExpr::Node> nodes_;
};

double eval_at(const std::vector<PriorityExpr::Node>& nodes, std::size_t& cursor, const Bindings& b) {
  const auto& node = nodes[cursor++];
  switch (node.op) {
    case ExprOp::Literal: return clamp_value(node.value);
    case ExprOp::Terminal:
      if (!b.bound(node.feature)) {
        throw Error(ErrorCode::UnboundTerminal, std::string(feature_name(node.feature)));
      }
      return clamp_value(b.get(node.feature));
    case ExprOp::Neg: return -eval_at(nodes, cursor, b);
    case ExprOp::Sqrt: return std::sqrt(std::abs(eval_at(nodes, cursor, b)));
    case ExprOp::Log: return std::log1p(std::abs(eval_at(nodes, cursor, b)));
    case ExprOp::Sub: {
      const double lhs = eval_at(nodes, cursor, b);
      return clamp_value(lhs - eval_at(nodes, cursor, b));
    }
    case ExprOp::Div: {
      const double lhs = eval_at(nodes, cursor, b);
      const double rhs = eval_at(nodes, cursor, b);
      return rhs == 0.0 ? lhs : clamp_value(lhs / rhs);
    }
    case ExprOp::Add:
    case ExprOp::Mul:
    case ExprOp::Min:
    case ExprOp::Max: {
      double acc = eval_at(nodes, cursor, b);
      for (int k = 1; k < node.arity; ++k) {
        const double v = eval_at(nodes, cursor, b);
        switch (node.op) {
          case ExprOp::Add: acc = clamp_value(acc + v); break;
          case ExprOp::Mul: acc = clamp_value(acc * v); break;
          case ExprOp::Min: acc = std::min(acc, v); break;
          default: acc = std::max(acc, v); break;
        }
      }
      return acc;
    }
  }
  return 0.0;
}

void print_at(const std::vector<PriorityExpr::Node>& nodes, std::size_t& cursor, std::string& out) {
  const auto& node = nodes[cursor++];
  switch (node.op) {
    case ExprOp::Literal: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, node.value);
      out.append(buf, ptr);
      return;
    }
    case ExprOp::Terminal: out += feature_name(node.feature); return;
    default: break;
  }
  out += '(';
  out += op_name(node.op);
  for (int k = 0; k < node.arity; ++k) {
    out += ' ';
    print_at(nodes, cursor, out);
  }
  out += ')';
}

int depth_at(const std::vector<PriorityExpr::Node>& nodes, std::size_t& cursor) {
  const auto& node = nodes[cursor++];
  int deepest = 0;
  for (int k = 0; k < node.arity; ++k) deepest = std::max(deepest, depth_at(nodes, cursor));
  return deepest + 1;
}

}  // namespace

std::string_view feature_name(Feature f) { return kFeatureNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> feature_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kFeatureNames.size(); ++k) {
    if (kFeatureNames[k] == name) return static_cast<Feature>(k);
  }
  return std::nullopt;
}

GeneLevel feature_level(Feature f) {
  return static_cast<int>(f) <= static_cast<int>(Feature::OpNumber) ? GeneLevel::Job : GeneLevel::Operation;
}

std::vector<std::string_view> terminal_names(GeneLevel level) {
  std::vector<std::string_view> names;
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    if (feature_level(static_cast<Feature>(k)) == level) names.push_back(kFeatureNames[k]);
  }
  return names;
}

std::string_view op_name(ExprOp op) {
  for (const auto& spec : kOps) {
    if (spec.op == op) return spec.name;
  }
  return op == ExprOp::Literal ? "literal" : "terminal";
}

Bindings Bindings::for_job(const JobFeatures& job) {
  Bindings b;
  b.set(Feature::ProcessSpan, job.process_span)
      .set(Feature::MinProcessSpan, job.min_process_span)
      .set(Feature::OpNumber, job.op_number);
  return b;
}

Bindings Bindings::for_op(const OpFeatures& op) {
  Bindings b;
  b.set(Feature::StartTime, op.start_time)
      .set(Feature::EarliestStart, op.earliest_start)
      .set(Feature::ProcTime, op.proc_time)
      .set(Feature::MachineNumber, op.machine_number);
  return b;
}

PriorityExpr PriorityExpr::parse(std::string_view text, std::optional<GeneLevel> level, ExprLimits limits) {
  return PriorityExpr(Parser(text, level, limits).run());
}

PriorityExpr PriorityExpr::terminal(Feature f) {
  Node node{ExprOp::Terminal};
  node.feature = f;
  return PriorityExpr({node});
}

double PriorityExpr::evaluate(const Bindings& bindings) const {
  if (nodes_.empty()) return 0.0;
  std::size_t cursor = 0;
  return clamp_value(eval_at(nodes_, cursor, bindings));
}

std::string PriorityExpr::to_string() const {
  std::string out;
  if (nodes_.empty()) return out;
  std::size_t cursor = 0;
  print_at(nodes_, cursor, out);
  return out;
}

int PriorityExpr::depth() const {
  if (nodes_.empty()) return 0;
  std::size_t cursor = 0;
  return depth_at(nodes_, cursor);
}

}  // namespace coevo
