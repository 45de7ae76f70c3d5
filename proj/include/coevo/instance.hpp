#pragma once

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coevo {

using Time = long long;

struct Alternative {
  int machine = 0;
  Time time = 0;
  bool operator==(const Alternative&) const = default;
};

/// The eligible machines of one operation with their processing times.
using OperationData = std::vector<Alternative>;
using JobData = std::vector<OperationData>;

/// Operation coordinate (job i, operation j), both 0-based.
struct OpRef {
  int job = 0;
  int op = 0;
  bool operator==(const OpRef&) const = default;
  auto operator<=>(const OpRef&) const = default;
};

/// Static FJSP / DFJSP problem. Immutable after construction.
///
/// Operations are also addressed by a flat index in canonical (job, op) order;
/// that index is the position of the operation in the machine-assignment vector.
/// Construction does not validate: use validate() or parse_fjs() for that.
class Instance {
public:
  Instance() = default;
  Instance(int machine_count, std::vector<JobData> jobs, int factory_count = 1,
           std::optional<Time> known_lb = std::nullopt, std::string name = {});

  const std::string& name() const noexcept { return name_; }
  int job_count() const noexcept { return static_cast<int>(jobs_.size()); }
  int machine_count() const noexcept { return machine_count_; }
  int factory_count() const noexcept { return factory_count_; }
  bool distributed() const noexcept { return factory_count_ > 1; }
  std::optional<Time> known_lb() const noexcept { return known_lb_; }

  int op_count(int job) const { return static_cast<int>(jobs_[job].size()); }
  int total_ops() const noexcept { return static_cast<int>(op_job_.size()); }
  const std::vector<JobData>& jobs() const noexcept { return jobs_; }

  int flat_index(int job, int op) const { return job_offset_[job] + op; }
  int flat_index(OpRef ref) const { return flat_index(ref.job, ref.op); }
  OpRef op_ref(int flat) const { return {op_job_[flat], flat - job_offset_[op_job_[flat]]}; }
  int job_of(int flat) const { return op_job_[flat]; }
  int job_offset(int job) const { return job_offset_[job]; }

  std::span<const Alternative> eligible(int flat) const { return flat_ops_[flat]; }
  std::span<const Alternative> eligible(int job, int op) const { return jobs_[job][op]; }

  /// Processing time of `flat` on `machine`, or 0 when the machine is not eligible.
  Time proc_time(int flat, int machine) const {
    if (machine < 0 || machine >= machine_count_) return 0;
    return time_table_[static_cast<std::size_t>(flat) * machine_count_ + machine];
  }
  Time min_proc_time(int flat) const { return min_time_[flat]; }

  Instance with_factories(int factory_count) const;
  Instance with_known_lb(std::optional<Time> lb) const;
  Instance with_name(std::string name) const;

  bool operator==(const Instance& other) const {
    return machine_count_ == other.machine_count_ && factory_count_ == other.factory_count_ &&
           known_lb_ == other.known_lb_ && jobs_ == other.jobs_;
  }

private:
  std::string name_;
  int machine_count_ = 0;
  int factory_count_ = 1;
  std::optional<Time> known_lb_;
  std::vector<JobData> jobs_;

  std::vector<int> job_offset_;
  std::vector<int> op_job_;
  std::vector<OperationData> flat_ops_;
  std::vector<Time> time_table_;
  std::vector<Time> min_time_;
};

enum class ViolationKind {
  NoJobs,
  NoMachines,
  EmptyJob,
  EmptyMachineSet,
  NonPositiveTime,
  MachineIdOutOfRange,
  DuplicateMachine,
  BadFactoryCount,
  NonPositiveLowerBound,
};

struct Violation {
  ViolationKind kind;
  int job = -1;
  int op = -1;
  int machine = -1;
  std::string describe() const;
  bool operator==(const Violation&) const = default;
};

/// Lists every violated instance invariant; empty iff the instance is valid.
std::vector<Violation> validate(const Instance& inst);

/// Parses the Brandimarte `.fjs` layout. Machines are 1-based in the file.
/// Throws ParseError naming the offending line.
Instance parse_fjs(std::istream& in, std::string name = {});
Instance parse_fjs_text(const std::string& text, std::string name = {});
Instance load_fjs(const std::string& path);

std::string serialize_fjs(const Instance& inst);

/// Lower-bound registry: UTF-8 lines `name<TAB>lb`; blank lines and `#` comments skipped.
using LbRegistry = std::map<std::string, Time>;
LbRegistry parse_lb_registry(std::istream& in);
LbRegistry load_lb_registry(const std::string& path);

}  // namespace coevo
