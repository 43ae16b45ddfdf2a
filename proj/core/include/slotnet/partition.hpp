#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slotnet/time.hpp"

namespace slotnet {

class Overflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

using AppId = std::uint32_t;

struct FlowSpec {
  AppId app = 0;
  std::uint32_t flow = 0;  // unique within its app
  Nanos period = 0;
  Nanos max_jitter = 0;
  std::uint32_t packet_size = 64;
};

struct ProblemInstance {
  std::vector<FlowSpec> flows;
  std::uint32_t ring_size = 32;
  Nanos slot = 10'000;
  Nanos horizon = 0;

  /// Instance with horizon = LCM(hyperperiod, ring_size * slot).
  static ProblemInstance make(std::vector<FlowSpec> flows, std::uint32_t ring_size, Nanos slot);

  /// Throws InvalidInstance on broken invariants.
  void validate() const;
  std::uint64_t instances_of(const FlowSpec& f) const { return static_cast<std::uint64_t>(horizon / f.period); }
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (app, flow, instance index) of one periodic transmission.
struct InstanceKey {
  AppId app = 0;
  std::uint32_t flow = 0;
  std::uint32_t instance = 0;
  friend auto operator<=>(const InstanceKey&, const InstanceKey&) = default;
};

struct Solution {
  std::map<AppId, std::set<std::uint32_t>> partitions;
  std::map<InstanceKey, Nanos> schedule;
  friend bool operator==(const Solution&, const Solution&) = default;
};

enum class ViolationKind {
  SlotOutsidePartition,  // transmission slot not owned by the app
  JitterBound,           // pairwise jitter constraint between two instances of a flow
  SameAppCollision,      // two instances of one app at the same time
  CrossAppCollision,     // two apps transmitting in the same slot at the same time
  PartitionOverlap,      // a slot owned by two apps
  MissingInstance,
  UnknownInstance,
  MisalignedTime,        // time not a multiple of the slot duration
  OutsideHorizon,
  SlotOutOfRange,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  InstanceKey a;
  std::optional<InstanceKey> b;
  std::string detail;
};

/// LCM of all flow periods. Throws Overflow if it does not fit in Nanos.
Nanos hyperperiod(std::span<const FlowSpec> flows);

/// Sum over flows of slot / period.
double utilization(const ProblemInstance& instance);

/// Every violated constraint. Empty iff the solution is valid.
std::vector<Violation> validate(const ProblemInstance& instance, const Solution& solution);

enum class SolveStatus { Feasible, Infeasible, Timeout };

const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Timeout;
  std::optional<Solution> solution;
  std::chrono::nanoseconds elapsed{0};
  std::uint64_t nodes = 0;
};

/// Complete backtracking search with forward checking. Deterministic for a
/// given instance; Infeasible means the whole space was exhausted.
SolveResult solve(const ProblemInstance& instance, std::chrono::milliseconds timeout);

struct SweepParams {
  std::uint32_t ring_size = 32;
  Nanos slot = 10'000;
  std::vector<double> utilizations{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  std::vector<std::uint32_t> flow_counts{2, 4, 8, 12, 16};
  Nanos min_period = 80'000;
  Nanos max_period = 1'600'000;
  Nanos period_step = 80'000;
  double jitter_min = 0.05;  // fraction of period
  double jitter_max = 0.20;
  std::uint32_t max_classes = 8;
  std::uint32_t instances_per_point = 64;
  std::uint32_t packet_size = 64;
  std::uint64_t seed = 1;
  std::chrono::milliseconds timeout{10'000};

  void validate() const;
};

/// `count` random flow sets near `target` utilization. Periods within one set
/// form a harmonic chain (each divides the next). Deterministic per seed.
std::vector<ProblemInstance> generate_instances(const SweepParams& params, double target, std::uint64_t seed,
                                                std::uint32_t count);

struct SweepPoint {
  double utilization = 0;
  std::uint32_t instances = 0;
  std::uint32_t feasible = 0;
  std::uint32_t infeasible = 0;
  std::uint32_t timeout = 0;
  std::uint32_t invalid = 0;  // feasible verdicts whose schedule failed validate()
  std::chrono::nanoseconds max_elapsed{0};
  std::chrono::nanoseconds total_elapsed{0};
  double feasible_fraction() const { return instances ? static_cast<double>(feasible) / instances : 0.0; }
};

/// Seed used for the instances of utilization point `index`.
std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t index);

/// Generates and solves every utilization point. Verdicts do not depend on
/// `jobs` unless a solve runs into the timeout.
std::vector<SweepPoint> run_sweep(const SweepParams& params, unsigned jobs = 1);

// Line-oriented text format:
//   ring <N>
//   slot_us <delta>
//   horizon_us <H>            (optional; defaults to LCM(hyperperiod, N * delta))
//   flow <app> <period_us> <jitter_us> <size>
//   partition <app> <slot> <slot> ...
//   time <app> <flow> <instance> <t_us>
// Flow ids are assigned in order of appearance within each app. '#' starts a
// comment. Microsecond fields accept up to three decimals.
class TextFormatError : public std::runtime_error {
 public:
  TextFormatError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

ProblemInstance read_instance(std::istream& in);
void write_instance(std::ostream& out, const ProblemInstance& instance);
Solution read_solution(std::istream& in);
void write_solution(std::ostream& out, const Solution& solution);

std::string format_us(Nanos ns);
Nanos parse_us(const std::string& text);

}  // namespace slotnet
