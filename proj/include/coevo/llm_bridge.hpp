#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coevo/expr.hpp"
#include "coevo/meta_operator.hpp"
#include "coevo/rng.hpp"

namespace coevo {

/// Search state handed to the generator before an operator is replaced.
struct EvolutionReport {
  struct OperatorLine {
    std::string thought;
    double fitness = 0;
    bool operator==(const OperatorLine&) const = default;
  };

  double min_fitness = 0;  // smallest 1/makespan in the population
  double avg_fitness = 0;
  double min_rate = 0;  // relative change since the previous operator evolution
  double avg_rate = 0;
  std::vector<OperatorLine> operators;
  std::optional<std::string> analysis;

  bool operator==(const EvolutionReport&) const = default;
};

/// Builds a report from the current population makespans and the fitness values
/// recorded at the previous evolution (or at initialization).
EvolutionReport summarize_population(std::span<const Time> makespans, double previous_min_fitness,
                                     double previous_avg_fitness, std::span<const Operator> ops);

/// Text describing population change (R_pop).
std::string population_text(const EvolutionReport& report);
/// Text listing each operator's thought and fitness (R_op).
std::string operator_text(const EvolutionReport& report);
/// Request sent to the generator's analysis step.
std::string analysis_request(const EvolutionReport& report);

struct PromptBundle {
  std::string task_description;
  std::string prior_knowledge;
  std::string expected_output;
  std::string code_template;
  std::optional<std::string> population_changes;
  std::optional<std::string> operator_performance;
  std::optional<std::string> analysis;
  std::optional<std::string> improvement_instruction;
  std::optional<EvolutionReport> context;

  /// Rendered prompt as sent to a model.
  std::string to_text() const;
  std::string to_json() const;
  static PromptBundle from_json(const std::string& text);

  bool operator==(const PromptBundle&) const = default;
};

inline constexpr const char* kDistinctnessInstruction =
    "Please develop a completely new algorithm distinct from the previous ones.";

PromptBundle build_initial_prompt(const Instance& inst);
PromptBundle build_improve_prompt(const PromptBundle& init, const EvolutionReport& report);

struct Candidate {
  std::string thought;
  PriorityExpr job_expr;
  PriorityExpr op_expr;
};

/// Extracts `{thought}`, `JOB: <expr>` and `OP: <expr>` from generator output,
/// parses both expressions and probe-evaluates them. Throws Error with
/// MissingThought, GrammarError, BoundsExceeded or NonFiniteProbe.
Candidate parse_candidate(const std::string& text);

/// Source of candidate heuristics and analyses: offline stubs or a remote model.
/// Calls never throw for transport reasons; failures come back as text that the
/// retry loop rejects.
class HeuristicGenerator {
public:
  virtual ~HeuristicGenerator() = default;
  virtual std::string name() const = 0;
  virtual std::string generate(const PromptBundle& prompt, Rng& rng) = 0;
  virtual std::string analyze(const std::string& request, Rng& rng) = 0;
  /// Rewording of the task description to diversify later generations.
  virtual std::string refine_task(const std::string& task, Rng&) { return task; }
};

/// Stub that always answers with the same candidate text.
class FixedCandidateGenerator : public HeuristicGenerator {
public:
  FixedCandidateGenerator(std::string name, std::string candidate)
      : name_(std::move(name)), candidate_(std::move(candidate)) {}
  std::string name() const override { return name_; }
  std::string generate(const PromptBundle&, Rng&) override { return candidate_; }
  std::string analyze(const std::string& request, Rng& rng) override;

private:
  std::string name_;
  std::string candidate_;
};

/// Stub that samples random expressions from the grammar using the caller's RNG.
class RandomExprGenerator : public HeuristicGenerator {
public:
  explicit RandomExprGenerator(int max_depth = 4) : max_depth_(max_depth) {}
  std::string name() const override { return "random"; }
  std::string generate(const PromptBundle& prompt, Rng& rng) override;
  std::string analyze(const std::string& request, Rng& rng) override;

  std::string sample_expression(GeneLevel level, Rng& rng) const;

private:
  int max_depth_;
};

/// Shortest-processing-time reference: prefers short operations and short jobs.
std::unique_ptr<HeuristicGenerator> make_spt_stub();
/// Most-work-remaining flavoured reference.
std::unique_ptr<HeuristicGenerator> make_mwr_stub();
std::vector<std::unique_ptr<HeuristicGenerator>> stub_generators();

/// HTTP endpoint: POST {"prompt", "seed"} as JSON, expects {"text"} back.
class RemoteGenerator : public HeuristicGenerator {
public:
  RemoteGenerator(std::string url, std::string token = {},
                  std::chrono::milliseconds timeout = std::chrono::seconds(60));
  std::string name() const override { return "remote"; }
  std::string generate(const PromptBundle& prompt, Rng& rng) override;
  std::string analyze(const std::string& request, Rng& rng) override;
  std::string refine_task(const std::string& task, Rng& rng) override;

  /// Last transport error, empty after a successful call.
  const std::string& last_error() const { return last_error_; }

private:
  std::optional<std::string> post(const std::string& prompt, Rng& rng);

  std::string base_;
  std::string path_;
  std::string token_;
  std::chrono::milliseconds timeout_;
  std::string last_error_;
};

/// Builds a generator by CLI name: spt, mwr, random or remote. `remote` reads
/// GENERATOR_URL and GENERATOR_TOKEN from the environment.
std::unique_ptr<HeuristicGenerator> make_generator(const std::string& name);

struct GenerationOutcome {
  Operator op;
  int attempts = 0;
};

/// Generate-validate loop; throws Error(GenerationExhausted) after max_retries
/// rejected candidates.
GenerationOutcome generate_operator(const PromptBundle& prompt, HeuristicGenerator& endpoint, int max_retries,
                                    Rng& rng, int id, Origin origin);

/// Builds the improvement prompt from the initial prompt and the report, lets
/// the endpoint reword the task, then runs the generate-validate loop. The
/// caller decides which operator the result replaces.
GenerationOutcome evolve_operator(const PromptBundle& init, const EvolutionReport& report,
                                  HeuristicGenerator& endpoint, int max_retries, Rng& rng, int id, int iteration);

}  // namespace coevo
