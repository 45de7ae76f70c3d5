#include <array>
#include <cstdlib>

#include <fmt/format.h>

#include "coevo/error.hpp"
#include "coevo/llm_bridge.hpp"

namespace coevo {

namespace {

std::string canned_analysis(const std::string& request) {
  return fmt::format(
      "Offline analysis ({} characters of context). Operators with a low success rate perturb genes that "
      "rarely lie on the critical path. Favour jobs with a long processing span and operations that start "
      "late or run on slow machines.",
      request.size());
}

const std::array<ExprOp, 9> kInnerOps = {ExprOp::Add, ExprOp::Sub, ExprOp::Mul, ExprOp::Div, ExprOp::Min,
                                         ExprOp::Max, ExprOp::Neg, ExprOp::Sqrt, ExprOp::Log};

int arity_of(ExprOp op) {
  switch (op) {
    case ExprOp::Neg:
    case ExprOp::Sqrt:
    case ExprOp::Log:
      return 1;
    default:
      return 2;
  }
}

void sample_into(std::string& out, GeneLevel level, int depth_left, Rng& rng) {
  const auto names = terminal_names(level);
  const bool leaf = depth_left <= 1 || uniform01(rng) < 0.3;
  if (leaf) {
    if (uniform01(rng) < 0.8) {
      out += names[uniform_index(rng, names.size())];
    } else {
      out += fmt::format("{}", static_cast<double>(1 + uniform_index(rng, 20)) / 4.0);
    }
    return;
  }
  const ExprOp op = kInnerOps[uniform_index(rng, kInnerOps.size())];
  out += '(';
  out += op_name(op);
  for (int k = 0; k < arity_of(op); ++k) {
    out += ' ';
    sample_into(out, level, depth_left - 1, rng);
  }
  out += ')';
}

}  // namespace

std::string FixedCandidateGenerator::analyze(const std::string& request, Rng&) { return canned_analysis(request); }

std::string RandomExprGenerator::sample_expression(GeneLevel level, Rng& rng) const {
  std::string out;
  sample_into(out, level, max_depth_, rng);
  return out;
}

std::string RandomExprGenerator::generate(const PromptBundle&, Rng& rng) {
  const auto job = sample_expression(GeneLevel::Job, rng);
  const auto op = sample_expression(GeneLevel::Operation, rng);
  return fmt::format("{{Randomly composed priority rule}}\nJOB: {}\nOP: {}", job, op);
}

std::string RandomExprGenerator::analyze(const std::string& request, Rng&) { return canned_analysis(request); }

std::unique_ptr<HeuristicGenerator> make_spt_stub() {
  return std::make_unique<FixedCandidateGenerator>(
      "spt",
      "{Perturb short jobs and short operations first, following the shortest processing time rule}\n"
      "JOB: (neg min_process_span)\nOP: (neg proc_time)");
}

std::unique_ptr<HeuristicGenerator> make_mwr_stub() {
  return std::make_unique<FixedCandidateGenerator>(
      "mwr",
      "{Perturb jobs with the most work spread over time and operations that become ready early}\n"
      "JOB: process_span\nOP: (neg earliest_start)");
}

std::vector<std::unique_ptr<HeuristicGenerator>> stub_generators() {
  std::vector<std::unique_ptr<HeuristicGenerator>> out;
  out.push_back(make_spt_stub());
  out.push_back(make_mwr_stub());
  out.push_back(std::make_unique<RandomExprGenerator>());
  return out;
}

std::unique_ptr<HeuristicGenerator> make_generator(const std::string& name) {
  if (name == "spt") return make_spt_stub();
  if (name == "mwr") return make_mwr_stub();
  if (name == "random") return std::make_unique<RandomExprGenerator>();
  if (name == "remote") {
    const char* url = std::getenv("GENERATOR_URL");
    if (url == nullptr || *url == '\0') {
      throw Error(ErrorCode::ConfigInvalid, "generator 'remote' needs GENERATOR_URL");
    }
    const char* token = std::getenv("GENERATOR_TOKEN");
    return std::make_unique<RemoteGenerator>(url, token ? token : "");
  }
  throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown generator '{}'", name));
}

}  // namespace coevo
