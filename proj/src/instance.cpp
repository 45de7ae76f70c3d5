#include "coevo/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "coevo/error.hpp"

namespace coevo {

Instance::Instance(int machine_count, std::vector<JobData> jobs, int factory_count,
                   std::optional<Time> known_lb, std::string name)
    : name_(std::move(name)),
      machine_count_(machine_count),
      factory_count_(factory_count),
      known_lb_(known_lb),
      jobs_(std::move(jobs)) {
  job_offset_.reserve(jobs_.size());
  for (int i = 0; i < job_count(); ++i) {
    job_offset_.push_back(static_cast<int>(op_job_.size()));
    for (const auto& op : jobs_[i]) {
      op_job_.push_back(i);
      flat_ops_.push_back(op);
    }
  }
  const auto m = static_cast<std::size_t>(std::max(machine_count_, 0));
  time_table_.assign(flat_ops_.size() * m, 0);
  min_time_.assign(flat_ops_.size(), 0);
  for (std::size_t k = 0; k < flat_ops_.size(); ++k) {
    Time best = 0;
    for (const auto& alt : flat_ops_[k]) {
      if (alt.machine >= 0 && alt.machine < machine_count_) {
        time_table_[k * m + alt.machine] = alt.time;
      }
      if (best == 0 || alt.time < best) best = alt.time;
    }
    min_time_[k] = best;
  }
}

Instance Instance::with_factories(int factory_count) const {
  return Instance(machine_count_, jobs_, factory_count, known_lb_, name_);
}

Instance Instance::with_known_lb(std::optional<Time> lb) const {
  return Instance(machine_count_, jobs_, factory_count_, lb, name_);
}

Instance Instance::with_name(std::string name) const {
  return Instance(machine_count_, jobs_, factory_count_, known_lb_, std::move(name));
}

std::string Violation::describe() const {
  switch (kind) {
    case ViolationKind::NoJobs: return "instance has no jobs";
    case ViolationKind::NoMachines: return "machine count must be positive";
    case ViolationKind::EmptyJob: return fmt::format("job {} has no operations", job);
    case ViolationKind::EmptyMachineSet:
      return fmt::format("EmptyMachineSet({},{})", job, op);
    case ViolationKind::NonPositiveTime:
      return fmt::format("NonPositiveTime({},{},{})", job, op, machine);
    case ViolationKind::MachineIdOutOfRange:
      return fmt::format("MachineIdOutOfRange({},{},{})", job, op, machine);
    case ViolationKind::DuplicateMachine:
      return fmt::format("DuplicateMachine({},{},{})", job, op, machine);
    case ViolationKind::BadFactoryCount: return "factory count must be >= 1";
    case ViolationKind::NonPositiveLowerBound: return "known lower bound must be positive";
  }
  return "unknown violation";
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  if (inst.job_count() == 0) out.push_back({ViolationKind::NoJobs});
  if (inst.machine_count() <= 0) out.push_back({ViolationKind::NoMachines});
  if (inst.factory_count() < 1) out.push_back({ViolationKind::BadFactoryCount});
  if (inst.known_lb() && *inst.known_lb() <= 0) out.push_back({ViolationKind::NonPositiveLowerBound});
  for (int i = 0; i < inst.job_count(); ++i) {
    if (inst.op_count(i) == 0) out.push_back({ViolationKind::EmptyJob, i});
    for (int j = 0; j < inst.op_count(i); ++j) {
      const auto alts = inst.eligible(i, j);
      if (alts.empty()) out.push_back({ViolationKind::EmptyMachineSet, i, j});
      std::vector<int> seen;
      for (const auto& alt : alts) {
        if (alt.machine < 0 || alt.machine >= inst.machine_count()) {
          out.push_back({ViolationKind::MachineIdOutOfRange, i, j, alt.machine});
        }
        if (alt.time <= 0) out.push_back({ViolationKind::NonPositiveTime, i, j, alt.machine});
        if (std::find(seen.begin(), seen.end(), alt.machine) != seen.end()) {
          out.push_back({ViolationKind::DuplicateMachine, i, j, alt.machine});
        }
        seen.push_back(alt.machine);
      }
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const auto start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

class JobLineReader {
public:
  JobLineReader(std::vector<std::string_view> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

  long long next(const char* what) {
    if (pos_ >= tokens_.size()) {
      throw ParseError(ErrorCode::TruncatedJobLine, line_, fmt::format("missing {}", what));
    }
    const auto token = tokens_[pos_++];
    auto value = parse_number<long long>(token);
    if (!value) {
      throw ParseError(ErrorCode::TruncatedJobLine, line_,
                       fmt::format("expected integer {} but found '{}'", what, token));
    }
    return *value;
  }

  bool exhausted() const { return pos_ >= tokens_.size(); }

private:
  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

Instance parse_fjs(std::istream& in, std::string name) {
  std::string line;
  int line_no = 0;
  auto next_content_line = [&](std::vector<std::string_view>& tokens) {
    while (std::getline(in, line)) {
      ++line_no;
      tokens = split_tokens(line);
      if (!tokens.empty()) return true;
    }
    return false;
  };

  std::vector<std::string_view> tokens;
  if (!next_content_line(tokens)) {
    throw ParseError(ErrorCode::MalformedHeader, line_no + 1, "missing header line");
  }
  if (tokens.size() < 2 || tokens.size() > 3) {
    throw ParseError(ErrorCode::MalformedHeader, line_no, "expected 'jobs machines [avg]'");
  }
  const auto job_count = parse_number<int>(tokens[0]);
  const auto machine_count = parse_number<int>(tokens[1]);
  if (!job_count || !machine_count || *job_count <= 0 || *machine_count <= 0) {
    throw ParseError(ErrorCode::MalformedHeader, line_no, "job and machine counts must be positive integers");
  }
  if (tokens.size() == 3 && !parse_number<double>(tokens[2])) {
    throw ParseError(ErrorCode::MalformedHeader, line_no, "average machines token is not a number");
  }

  std::vector<JobData> jobs;
  jobs.reserve(*job_count);
  for (int i = 0; i < *job_count; ++i) {
    if (!next_content_line(tokens)) {
      throw ParseError(ErrorCode::TruncatedJobLine, line_no + 1,
                       fmt::format("expected {} job lines, found {}", *job_count, i));
    }
    JobLineReader reader(tokens, line_no);
    const auto op_count = reader.next("operation count");
    if (op_count <= 0) {
      throw ParseError(ErrorCode::TruncatedJobLine, line_no, "operation count must be positive");
    }
    JobData job;
    for (long long j = 0; j < op_count; ++j) {
      const auto k = reader.next("alternative count");
      if (k <= 0) {
        throw ParseError(ErrorCode::EmptyMachineSet, line_no,
                         fmt::format("operation {} has no eligible machine", j + 1));
      }
      OperationData op;
      for (long long a = 0; a < k; ++a) {
        const auto machine = reader.next("machine id");
        const auto time = reader.next("processing time");
        if (machine < 1 || machine > *machine_count) {
          throw ParseError(ErrorCode::MachineIdOutOfRange, line_no,
                           fmt::format("machine {} outside 1..{}", machine, *machine_count));
        }
        if (time <= 0) {
          throw ParseError(ErrorCode::NonPositiveTime, line_no,
                           fmt::format("processing time {} on machine {}", time, machine));
        }
        op.push_back({static_cast<int>(machine - 1), time});
      }
      job.push_back(std::move(op));
    }
    if (!reader.exhausted()) {
      throw ParseError(ErrorCode::TrailingTokens, line_no, "extra tokens after last operation");
    }
    jobs.push_back(std::move(job));
  }
  if (next_content_line(tokens)) {
    throw ParseError(ErrorCode::TrailingTokens, line_no, "content after the last job line");
  }

  Instance inst(*machine_count, std::move(jobs), 1, std::nullopt, std::move(name));
  if (auto violations = validate(inst); !violations.empty()) {
    throw Error(ErrorCode::InvalidInstance, violations.front().describe());
  }
  return inst;
}

Instance parse_fjs_text(const std::string& text, std::string name) {
  std::istringstream in(text);
  return parse_fjs(in, std::move(name));
}

Instance load_fjs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InstanceNotFound, path);
  auto stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_fjs(in, stem);
}

std::string serialize_fjs(const Instance& inst) {
  std::size_t alternatives = 0;
  for (int k = 0; k < inst.total_ops(); ++k) alternatives += inst.eligible(k).size();
  const double avg = inst.total_ops() > 0 ? static_cast<double>(alternatives) / inst.total_ops() : 0.0;

  std::string out = fmt::format("{}\t{}\t{:g}\n", inst.job_count(), inst.machine_count(), avg);
  for (const auto& job : inst.jobs()) {
    out += std::to_string(job.size());
    for (const auto& op : job) {
      out += fmt::format("  {}", op.size());
      for (const auto& alt : op) out += fmt::format(" {} {}", alt.machine + 1, alt.time);
    }
    out += '\n';
  }
  return out;
}

LbRegistry parse_lb_registry(std::istream& in) {
  LbRegistry registry;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(ErrorCode::MalformedHeader, line_no, "expected 'name<TAB>lb'");
    }
    const auto name = line.substr(0, tab);
    const auto rest = split_tokens(std::string_view(line).substr(tab + 1));
    const auto value = rest.size() == 1 ? parse_number<Time>(rest.front()) : std::nullopt;
    if (!value) throw ParseError(ErrorCode::MalformedHeader, line_no, "lower bound is not an integer");
    if (*value <= 0) throw ParseError(ErrorCode::NonPositiveLB, line_no, "lower bound must be positive");
    registry[name] = *value;
  }
  return registry;
}

LbRegistry load_lb_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open LB registry " + path);
  return parse_lb_registry(in);
}

}  // namespace coevo
