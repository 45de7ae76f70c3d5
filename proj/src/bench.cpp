#include "coevo/bench.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "coevo/error.hpp"

namespace coevo {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_spec(int line, const std::string& msg) {
  throw Error(ErrorCode::ConfigInvalid, fmt::format("spec line {}: {}", line, msg));
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (auto t = trim(item); !t.empty()) out.push_back(std::move(t));
  }
  return out;
}

template <typename T>
T parse_value(const std::string& value, int line) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) bad_spec(line, fmt::format("cannot parse '{}'", value));
  return out;
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_spec(line, fmt::format("expected a boolean, got '{}'", value));
}

fs::path relative_to(const fs::path& p, const fs::path& base) { return p.is_absolute() || base.empty() ? p : base / p; }

}  // namespace

void ExperimentSpec::validate() const {
  if (instances.empty()) throw Error(ErrorCode::ConfigInvalid, "no instances listed");
  if (runs < 1) throw Error(ErrorCode::ConfigInvalid, "runs must be at least 1");
  if (factories < 1) throw Error(ErrorCode::ConfigInvalid, "factories must be at least 1");
  if (jobs < 1) throw Error(ErrorCode::ConfigInvalid, "jobs must be at least 1");
  engine.validate();
}

ExperimentSpec parse_experiment_spec(const std::string& text, const fs::path& base_dir) {
  ExperimentSpec spec;
  spec.data_dir = relative_to(spec.data_dir, base_dir);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto content = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) bad_spec(line, "expected key = value");
    const auto key = trim(std::string_view(content).substr(0, eq));
    auto value = trim(std::string_view(content).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

    auto& e = spec.engine;
    if (key == "instances") {
      spec.instances = split_list(value);
    } else if (key == "runs") {
      spec.runs = parse_value<int>(value, line);
    } else if (key == "seed") {
      e.seed = parse_value<std::uint64_t>(value, line);
    } else if (key == "generator") {
      spec.generator = value;
    } else if (key == "pop") {
      e.pop_size = parse_value<int>(value, line);
    } else if (key == "iters") {
      e.max_iters = parse_value<int>(value, line);
    } else if (key == "epsilon") {
      e.epsilon = parse_value<double>(value, line);
    } else if (key == "operator_pop") {
      e.operator_pop_size = parse_value<int>(value, line);
    } else if (key == "p_crossover") {
      e.p_crossover = parse_value<double>(value, line);
    } else if (key == "p_mutation") {
      e.p_mutation = parse_value<double>(value, line);
    } else if (key == "tournament_k") {
      e.tournament_k = parse_value<int>(value, line);
    } else if (key == "max_retries") {
      e.max_retries = parse_value<int>(value, line);
    } else if (key == "mode") {
      const auto mode = mode_from_name(value);
      if (!mode) bad_spec(line, fmt::format("unknown mode '{}'", value));
      e.mode = *mode;
    } else if (key == "factories") {
      spec.factories = parse_value<int>(value, line);
    } else if (key == "data_dir") {
      spec.data_dir = relative_to(value, base_dir);
    } else if (key == "lb_registry") {
      spec.lb_registry = relative_to(value, base_dir);
    } else if (key == "emit") {
      spec.emit = {false, false, false, false};
      for (const auto& flag : split_list(value)) {
        if (flag == "table") spec.emit.table = true;
        else if (flag == "curves") spec.emit.curves = true;
        else if (flag == "operators") spec.emit.operators = true;
        else if (flag == "schedules") spec.emit.schedules = true;
        else bad_spec(line, fmt::format("unknown emit flag '{}'", flag));
      }
    } else if (key == "record_wall_time") {
      spec.record_wall_time = parse_bool(value, line);
    } else if (key == "jobs") {
      spec.jobs = parse_value<int>(value, line);
    } else {
      bad_spec(line, fmt::format("unknown key '{}'", key));
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot read spec '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_spec(buf.str(), path.parent_path());
}

Instance resolve_instance(const std::string& name_or_path, const fs::path& data_dir) {
  if (fs::is_regular_file(name_or_path)) return load_fjs(name_or_path);
  for (const auto& candidate : {data_dir / name_or_path, data_dir / (name_or_path + ".fjs")}) {
    if (fs::is_regular_file(candidate)) return load_fjs(candidate.string());
  }
  throw Error(ErrorCode::InstanceNotFound,
              fmt::format("instance '{}' not found (searched {})", name_or_path, data_dir.string()));
}

InstanceSummary summarize_runs(std::string name, std::span<const Time> makespans, std::optional<Time> lb) {
  if (makespans.empty()) throw Error(ErrorCode::ConfigInvalid, "no runs to summarize");
  InstanceSummary s;
  s.name = std::move(name);
  s.lb = lb;
  s.bm = *std::min_element(makespans.begin(), makespans.end());
  s.am = static_cast<double>(std::accumulate(makespans.begin(), makespans.end(), Time{0})) /
         static_cast<double>(makespans.size());
  if (lb) {
    s.rpd_bm = rpd(static_cast<double>(s.bm), static_cast<double>(*lb));
    s.rpd_am = rpd(s.am, static_cast<double>(*lb));
  }
  return s;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  LbRegistry registry;
  if (spec.lb_registry) registry = load_lb_registry(spec.lb_registry->string());

  ExperimentReport report;
  report.record_wall_time = spec.record_wall_time;
  report.emit = spec.emit;
  for (const auto& name : spec.instances) {
    auto inst = resolve_instance(name, spec.data_dir);
    if (spec.factories > 1) inst = inst.with_factories(spec.factories);
    report.instances.push_back({std::move(inst), {}, std::vector<RunResult>(static_cast<std::size_t>(spec.runs))});
  }
  // Fail on a bad generator name before any thread starts.
  make_generator(spec.generator);

  struct Task {
    std::size_t instance;
    int run;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < report.instances.size(); ++i) {
    for (int r = 0; r < spec.runs; ++r) tasks.push_back({i, r});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto [i, r] = tasks[k];
      try {
        auto cfg = spec.engine;
        cfg.seed = spec.engine.seed + static_cast<std::uint64_t>(r);
        auto endpoint = make_generator(spec.generator);
        report.instances[i].runs[static_cast<std::size_t>(r)] = run(report.instances[i].instance, cfg, *endpoint);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), tasks.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> rpd_bm;
  std::vector<double> rpd_am;
  for (auto& ir : report.instances) {
    const auto& name = ir.instance.name();
    std::optional<Time> lb = ir.instance.known_lb();
    if (auto it = registry.find(name); it != registry.end()) lb = it->second;
    std::vector<Time> makespans;
    for (const auto& r : ir.runs) makespans.push_back(r.best_makespan);
    ir.summary = summarize_runs(name, makespans, lb);
    if (ir.summary.rpd_bm) {
      rpd_bm.push_back(*ir.summary.rpd_bm);
      rpd_am.push_back(*ir.summary.rpd_am);
    }
  }
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  if (!rpd_bm.empty()) {
    report.rpd_aver_bm = mean(rpd_bm);
    report.rpd_aver_am = mean(rpd_am);
  }
  return report;
}

namespace {

class OutFile {
public:
  explicit OutFile(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path.string()));
  }
  ~OutFile() noexcept(false) {
    out_.close();
    if (out_.fail() && std::uncaught_exceptions() == 0) {
      throw Error(ErrorCode::IoError, fmt::format("write to '{}' failed", path_.string()));
    }
  }
  std::ofstream& operator*() { return out_; }

private:
  fs::path path_;
  std::ofstream out_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_fixed(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : ""; }

std::string file_stem(const std::string& instance, int run) { return fmt::format("{}_{}", instance, run); }

}  // namespace

void emit_outputs(const ExperimentReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  auto subdir = [&](const char* name) {
    const auto p = dir / name;
    fs::create_directories(p, ec);
    if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot create '{}': {}", p.string(), ec.message()));
    return p;
  };

  if (report.emit.table) {
    {
      OutFile f(dir / "results.csv");
      *f << "instance,run,seed,makespan,wall_time\n";
      for (const auto& ir : report.instances) {
        for (std::size_t r = 0; r < ir.runs.size(); ++r) {
          const auto& run = ir.runs[r];
          *f << fmt::format("{},{},{},{},{}\n", csv_field(ir.instance.name()), r, run.rng_seed, run.best_makespan,
                            report.record_wall_time ? fmt::format("{:.3f}", run.wall_time) : "");
        }
      }
    }
    OutFile f(dir / "summary.csv");
    *f << "instance,LB,BM,AM,RPD_BM,RPD_AM\n";
    for (const auto& ir : report.instances) {
      const auto& s = ir.summary;
      *f << fmt::format("{},{},{},{:.2f},{},{}\n", csv_field(s.name), s.lb ? std::to_string(*s.lb) : "", s.bm, s.am,
                        opt_fixed(s.rpd_bm), opt_fixed(s.rpd_am));
    }
    *f << fmt::format("RPD_aver,,,,{},{}\n", opt_fixed(report.rpd_aver_bm), opt_fixed(report.rpd_aver_am));
  }

  if (report.emit.curves) {
    const auto curves = subdir("curves");
    for (const auto& ir : report.instances) {
      for (std::size_t r = 0; r < ir.runs.size(); ++r) {
        OutFile f(curves / (file_stem(ir.instance.name(), static_cast<int>(r)) + ".csv"));
        *f << "iteration,best_makespan\n";
        const auto& conv = ir.runs[r].convergence;
        for (std::size_t t = 0; t < conv.size(); ++t) *f << t << ',' << conv[t] << '\n';
      }
    }
  }

  if (report.emit.operators) {
    const auto ops = subdir("operators");
    for (const auto& ir : report.instances) {
      for (std::size_t r = 0; r < ir.runs.size(); ++r) {
        OutFile f(ops / (file_stem(ir.instance.name(), static_cast<int>(r)) + ".json"));
        *f << operators_to_json(ir.runs[r]) << '\n';
      }
    }
  }

  if (report.emit.schedules) {
    const auto schedules = subdir("schedules");
    for (const auto& ir : report.instances) {
      for (std::size_t r = 0; r < ir.runs.size(); ++r) {
        OutFile f(schedules / (file_stem(ir.instance.name(), static_cast<int>(r)) + ".json"));
        *f << schedule_to_json(decode(ir.runs[r].best_chromosome, ir.instance), ir.instance) << '\n';
      }
    }
  }
}

}  // namespace coevo
