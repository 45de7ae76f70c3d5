#pragma once

#include <array>
#include <bitset>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/features.hpp"
#include "coevo/genetics.hpp"

namespace coevo {

/// Terminals of the priority language: the seven genetic features.
enum class Feature : std::uint8_t {
  ProcessSpan,
  MinProcessSpan,
  OpNumber,
  StartTime,
  EarliestStart,
  ProcTime,
  MachineNumber,
};
inline constexpr std::size_t kFeatureCount = 7;

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);
GeneLevel feature_level(Feature f);
/// Terminal names usable at a level, in declaration order.
std::vector<std::string_view> terminal_names(GeneLevel level);

/// Values for the terminals an expression may reference.
class Bindings {
public:
  Bindings& set(Feature f, double value) {
    values_[static_cast<std::size_t>(f)] = value;
    bound_.set(static_cast<std::size_t>(f));
    return *this;
  }
  bool bound(Feature f) const { return bound_.test(static_cast<std::size_t>(f)); }
  double get(Feature f) const { return values_[static_cast<std::size_t>(f)]; }

  static Bindings for_job(const JobFeatures& job);
  static Bindings for_op(const OpFeatures& op);

private:
  std::array<double, kFeatureCount> values_{};
  std::bitset<kFeatureCount> bound_;
};

enum class ExprOp : std::uint8_t { Literal, Terminal, Add, Sub, Mul, Div, Min, Max, Neg, Sqrt, Log };

struct ExprLimits {
  int max_depth = 12;
  int max_nodes = 200;
};

/// Priority expression over genetic features, stored in prefix order.
///
/// Text form is an S-expression: `(div (neg proc_time) (add 1 machine_number))`.
/// add/mul/min/max take two or more arguments, sub/div exactly two, and
/// neg/sqrt/log one. Semantics: div is protected (x/0 = x), sqrt takes |x|,
/// log is ln(1+|x|). Every intermediate is clamped to +-kValueLimit, so
/// evaluation is finite for finite inputs.
class PriorityExpr {
public:
  static constexpr double kValueLimit = 1e100;

  struct Node {
    ExprOp op = ExprOp::Literal;
    std::uint8_t arity = 0;
    Feature feature = Feature::ProcessSpan;
    double value = 0.0;
    bool operator==(const Node&) const = default;
  };

  PriorityExpr() = default;

  /// Parses and checks bounds. When `level` is given, terminals of the other
  /// level are rejected. Throws Error(GrammarError | BoundsExceeded).
  static PriorityExpr parse(std::string_view text, std::optional<GeneLevel> level = std::nullopt,
                            ExprLimits limits = {});
  static PriorityExpr terminal(Feature f);

  /// Throws Error(UnboundTerminal) when a referenced terminal has no value.
  double evaluate(const Bindings& bindings) const;

  std::string to_string() const;
  int depth() const;
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  bool operator==(const PriorityExpr&) const = default;

  explicit PriorityExpr(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

private:
  std::vector<Node> nodes_;
};

std::string_view op_name(ExprOp op);

}  // namespace coevo
