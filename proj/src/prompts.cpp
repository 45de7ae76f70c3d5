#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "coevo/error.hpp"
#include "coevo/llm_bridge.hpp"

namespace coevo {

namespace {

double relative_change(double current, double previous) {
  return previous > 0.0 ? (current - previous) / previous : 0.0;
}

std::string join(const std::vector<std::string_view>& items, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += items[k];
  }
  return out;
}

void section(std::string& out, std::string_view title, const std::string& body) {
  out += fmt::format("### {}\n{}\n\n", title, body);
}

}  // namespace

EvolutionReport summarize_population(std::span<const Time> makespans, double previous_min_fitness,
                                     double previous_avg_fitness, std::span<const Operator> ops) {
  EvolutionReport report;
  if (!makespans.empty()) {
    double min_f = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (Time c : makespans) {
      const double f = 1.0 / static_cast<double>(c);
      min_f = std::min(min_f, f);
      sum += f;
    }
    report.min_fitness = min_f;
    report.avg_fitness = sum / static_cast<double>(makespans.size());
  }
  report.min_rate = relative_change(report.min_fitness, previous_min_fitness);
  report.avg_rate = relative_change(report.avg_fitness, previous_avg_fitness);
  for (const auto& op : ops) report.operators.push_back({op.thought, operator_fitness(op)});
  return report;
}

std::string population_text(const EvolutionReport& report) {
  return fmt::format(
      "Solution population (fitness = 1/makespan): minimum fitness {} ({:+}% since the last operator "
      "update), average fitness {} ({:+}% since the last operator update).",
      report.min_fitness, report.min_rate * 100.0, report.avg_fitness, report.avg_rate * 100.0);
}

std::string operator_text(const EvolutionReport& report) {
  std::string out = "Current operators (success rate = improved offspring / uses):";
  for (std::size_t k = 0; k < report.operators.size(); ++k) {
    out += fmt::format("\n{}. {{{}}} success rate {}", k + 1, report.operators[k].thought, report.operators[k].fitness);
  }
  return out;
}

std::string analysis_request(const EvolutionReport& report) {
  return fmt::format(
      "{}\n{}\nIdentify what currently limits the improvement of the solution population, explain the "
      "search preferences and weaknesses of each operator's gene selection, and suggest how a new "
      "operator should prioritise jobs and operations.",
      population_text(report), operator_text(report));
}

std::string PromptBundle::to_text() const {
  std::string out;
  section(out, "Task", task_description);
  section(out, "Prior knowledge", prior_knowledge);
  if (population_changes) section(out, "Population changes", *population_changes);
  if (operator_performance) section(out, "Operator performance", *operator_performance);
  if (analysis) section(out, "Analysis and suggestions", *analysis);
  if (improvement_instruction) section(out, "Requirement", *improvement_instruction);
  section(out, "Expected output", expected_output);
  section(out, "Template", code_template);
  return out;
}

namespace {

nlohmann::ordered_json report_to_json(const EvolutionReport& r) {
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (const auto& line : r.operators) ops.push_back({{"thought", line.thought}, {"fitness", line.fitness}});
  nlohmann::ordered_json doc = {{"min_fitness", r.min_fitness}, {"avg_fitness", r.avg_fitness},
                                {"min_rate", r.min_rate},       {"avg_rate", r.avg_rate},
                                {"operators", ops}};
  if (r.analysis) doc["analysis"] = *r.analysis;
  return doc;
}

EvolutionReport report_from_json(const nlohmann::json& doc) {
  EvolutionReport r;
  r.min_fitness = doc.at("min_fitness").get<double>();
  r.avg_fitness = doc.at("avg_fitness").get<double>();
  r.min_rate = doc.at("min_rate").get<double>();
  r.avg_rate = doc.at("avg_rate").get<double>();
  for (const auto& line : doc.at("operators")) {
    r.operators.push_back({line.at("thought").get<std::string>(), line.at("fitness").get<double>()});
  }
  if (doc.contains("analysis")) r.analysis = doc.at("analysis").get<std::string>();
  return r;
}

template <typename Json>
void put_optional(Json& doc, const char* key, const std::optional<std::string>& value) {
  if (value) doc[key] = *value;
}

std::optional<std::string> get_optional(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) return std::nullopt;
  return doc.at(key).get<std::string>();
}

}  // namespace

std::string PromptBundle::to_json() const {
  nlohmann::ordered_json doc = {{"task_description", task_description},
                                {"prior_knowledge", prior_knowledge},
                                {"expected_output", expected_output},
                                {"code_template", code_template}};
  put_optional(doc, "population_changes", population_changes);
  put_optional(doc, "operator_performance", operator_performance);
  put_optional(doc, "analysis", analysis);
  put_optional(doc, "improvement_instruction", improvement_instruction);
  if (context) doc["context"] = report_to_json(*context);
  return doc.dump(2);
}

PromptBundle PromptBundle::from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  PromptBundle b;
  b.task_description = doc.at("task_description").get<std::string>();
  b.prior_knowledge = doc.at("prior_knowledge").get<std::string>();
  b.expected_output = doc.at("expected_output").get<std::string>();
  b.code_template = doc.at("code_template").get<std::string>();
  b.population_changes = get_optional(doc, "population_changes");
  b.operator_performance = get_optional(doc, "operator_performance");
  b.analysis = get_optional(doc, "analysis");
  b.improvement_instruction = get_optional(doc, "improvement_instruction");
  if (doc.contains("context")) b.context = report_from_json(doc.at("context"));
  return b;
}

PromptBundle build_initial_prompt(const Instance& inst) {
  PromptBundle b;
  b.task_description = fmt::format(
      "We solve a flexible job shop scheduling problem with {} jobs, {} machines{} and the goal of "
      "minimising the makespan (completion time of the last operation). A genetic algorithm perturbs "
      "solutions by reordering jobs and reassigning operations to machines. Design a heuristic that "
      "scores every job (how useful it is to move it in the sequence) and every operation (how useful it "
      "is to change its machine). Higher scores mean the gene is more likely to be perturbed.",
      inst.job_count(), inst.machine_count(),
      inst.distributed() ? fmt::format(" spread over {} identical factories", inst.factory_count()) : "");
  b.prior_knowledge =
      "Classical dispatching rules are useful references, for example the Shortest Processing Time (SPT) "
      "rule, which favours operations that finish quickly. Features available for each job:\n"
      "- process_span: finish time of the job's last operation minus start time of its first operation.\n"
      "- min_process_span: sum over the job's operations of the fastest eligible processing time.\n"
      "- op_number: number of operations of the job.\n"
      "Features available for each operation:\n"
      "- start_time: scheduled start time of the operation.\n"
      "- earliest_start: completion time of the preceding operation of the same job (0 for the first).\n"
      "- proc_time: processing time on the currently assigned machine.\n"
      "- machine_number: number of machines able to process the operation.";
  b.expected_output =
      "First summarise the idea of your heuristic in one sentence enclosed in braces, like {...}. Then give "
      "exactly two expressions, one per line, written in the template language: a line starting with "
      "'JOB:' containing the job priority expression and a line starting with 'OP:' containing the "
      "operation priority expression. Do not add any other text.";
  b.code_template = fmt::format(
      "Expressions are S-expressions evaluated once per gene.\n"
      "JOB terminals: {}\n"
      "OP terminals: {}\n"
      "Operators: (add a b ...), (sub a b), (mul a b ...), (div a b) with division by zero returning a, "
      "(min a b ...), (max a b ...), (neg a), (sqrt a) = sqrt(|a|), (log a) = ln(1+|a|). Numeric literals "
      "are allowed. Maximum depth 12 and at most 200 nodes per expression.\n"
      "Outputs: the JOB expression yields the list of job priorities, the OP expression yields the list of "
      "operation priorities. Example:\n"
      "{{Prefer short operations}}\nJOB: (neg min_process_span)\nOP: (neg proc_time)",
      join(terminal_names(GeneLevel::Job), ", "), join(terminal_names(GeneLevel::Operation), ", "));
  return b;
}

PromptBundle build_improve_prompt(const PromptBundle& init, const EvolutionReport& report) {
  PromptBundle b = init;
  b.population_changes = population_text(report);
  b.operator_performance = operator_text(report);
  b.analysis = report.analysis;
  b.improvement_instruction = kDistinctnessInstruction;
  b.context = report;
  return b;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

/// Text of the expression following `marker`: a balanced parenthesised form or one atom.
std::string expression_after(std::string_view text, std::string_view marker) {
  const auto at = text.find(marker);
  if (at == std::string_view::npos) {
    throw Error(ErrorCode::GrammarError, fmt::format("missing '{}' expression", marker));
  }
  std::size_t pos = at + marker.size();
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '`')) ++pos;
  const auto start = pos;
  if (pos < text.size() && text[pos] == '(') {
    int depth = 0;
    for (; pos < text.size(); ++pos) {
      if (text[pos] == '(') ++depth;
      if (text[pos] == ')' && --depth == 0) return std::string(text.substr(start, pos + 1 - start));
    }
    throw Error(ErrorCode::GrammarError, fmt::format("unbalanced parentheses after '{}'", marker));
  }
  while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '`') ++pos;
  return std::string(text.substr(start, pos - start));
}

/// Synthetic feature values the probe evaluation runs on.
const std::vector<std::pair<JobFeatures, OpFeatures>>& probe_points() {
  static const std::vector<std::pair<JobFeatures, OpFeatures>> points = {
      {{0, 0, 1}, {0, 0, 1, 1}},
      {{12, 9, 3}, {5, 4, 3, 2}},
      {{250, 120, 15}, {180, 170, 20, 10}},
      {{1e6, 5e5, 100}, {9e5, 8e5, 1e4, 50}},
  };
  return points;
}

}  // namespace

Candidate parse_candidate(const std::string& text) {
  const auto open = text.find('{');
  const auto close = open == std::string::npos ? std::string::npos : text.find('}', open + 1);
  if (open == std::string::npos || close == std::string::npos) {
    throw Error(ErrorCode::MissingThought, "no brace-delimited thought");
  }
  Candidate c;
  c.thought = trim(std::string_view(text).substr(open + 1, close - open - 1));
  if (c.thought.empty()) throw Error(ErrorCode::MissingThought, "empty thought");

  const auto rest = std::string_view(text).substr(close + 1);
  c.job_expr = PriorityExpr::parse(expression_after(rest, "JOB:"), GeneLevel::Job);
  c.op_expr = PriorityExpr::parse(expression_after(rest, "OP:"), GeneLevel::Operation);

  for (const auto& [job, op] : probe_points()) {
    const double jv = c.job_expr.evaluate(Bindings::for_job(job));
    const double ov = c.op_expr.evaluate(Bindings::for_op(op));
    if (!std::isfinite(jv) || !std::isfinite(ov)) {
      throw Error(ErrorCode::NonFiniteProbe, "expression is not finite on a probe point");
    }
  }
  return c;
}

GenerationOutcome generate_operator(const PromptBundle& prompt, HeuristicGenerator& endpoint, int max_retries,
                                    Rng& rng, int id, Origin origin) {
  std::string last_failure = "no attempt made";
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    const auto text = endpoint.generate(prompt, rng);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      last_failure = "empty response";
      continue;
    }
    try {
      auto candidate = parse_candidate(text);
      Operator op;
      op.id = id;
      op.thought = std::move(candidate.thought);
      op.job_expr = std::move(candidate.job_expr);
      op.op_expr = std::move(candidate.op_expr);
      op.origin = origin;
      return {std::move(op), attempt};
    } catch (const Error& e) {
      last_failure = e.what();
    }
  }
  throw Error(ErrorCode::GenerationExhausted,
              fmt::format("{} produced no valid operator in {} attempts (last: {})", endpoint.name(), max_retries,
                          last_failure));
}

GenerationOutcome evolve_operator(const PromptBundle& init, const EvolutionReport& report,
                                  HeuristicGenerator& endpoint, int max_retries, Rng& rng, int id, int iteration) {
  auto prompt = build_improve_prompt(init, report);
  prompt.task_description = endpoint.refine_task(prompt.task_description, rng);
  return generate_operator(prompt, endpoint, max_retries, rng, id, {Origin::Kind::Evolved, iteration});
}

}  // namespace coevo
