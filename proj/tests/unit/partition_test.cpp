#include <gtest/gtest.h>

#include <sstream>

#include "oracles/exhaustive.hpp"
#include "oracles/small_instances.hpp"
#include "slotnet/partition.hpp"

using namespace slotnet;

namespace {

constexpr Nanos kUs = 1'000;

FlowSpec flow(AppId app, std::uint32_t id, Nanos period, Nanos jitter = 0) { return FlowSpec{app, id, period, jitter, 64}; }

bool has(const std::vector<Violation>& v, ViolationKind k) {
  for (const auto& x : v)
    if (x.kind == k) return true;
  return false;
}

}  // namespace

TEST(Hyperperiod, Examples) {
  const std::vector<FlowSpec> a{flow(1, 0, 80 * kUs), flow(1, 1, 160 * kUs), flow(1, 2, 240 * kUs)};
  EXPECT_EQ(hyperperiod(a), 480 * kUs);
  const std::vector<FlowSpec> b{flow(1, 0, 4'000 * kUs), flow(1, 1, 8'000 * kUs), flow(2, 0, 16'000 * kUs),
                                flow(2, 1, 32'000 * kUs)};
  EXPECT_EQ(hyperperiod(b), 32'000 * kUs);
  const std::vector<FlowSpec> c{flow(1, 0, 80 * kUs)};
  EXPECT_EQ(hyperperiod(c), 80 * kUs);
}

TEST(Hyperperiod, OverflowAndEmpty) {
  const std::vector<FlowSpec> primes{flow(1, 0, 1'000'000'007), flow(1, 1, 998'244'353), flow(1, 2, 1'000'000'009)};
  EXPECT_THROW(hyperperiod(primes), Overflow);
  EXPECT_THROW(hyperperiod(std::vector<FlowSpec>{}), std::invalid_argument);
}

TEST(Utilization, Examples) {
  EXPECT_DOUBLE_EQ(utilization(ProblemInstance::make({flow(1, 0, 20 * kUs)}, 7, 10 * kUs)), 0.5);
  EXPECT_DOUBLE_EQ(utilization(ProblemInstance::make({}, 32, 10 * kUs)), 0.0);
  std::vector<FlowSpec> eight;
  for (std::uint32_t i = 0; i < 8; ++i) eight.push_back(flow(i + 1, 0, 160 * kUs));
  EXPECT_DOUBLE_EQ(utilization(ProblemInstance::make(eight, 32, 10 * kUs)), 0.5);
}

TEST(ProblemInstance, HorizonCoversRingRevolution) {
  const auto p = ProblemInstance::make({flow(1, 0, 30 * kUs)}, 4, 10 * kUs);
  EXPECT_EQ(p.horizon, 120 * kUs);
  EXPECT_EQ(p.instances_of(p.flows[0]), 4u);
  EXPECT_THROW(ProblemInstance::make({flow(1, 0, 15 * kUs)}, 4, 10 * kUs), InvalidInstance);
  EXPECT_THROW(ProblemInstance::make({flow(1, 0, 20 * kUs), flow(1, 0, 40 * kUs)}, 4, 10 * kUs), InvalidInstance);
}

TEST(Validate, TriviallyValid) {
  const auto p = ProblemInstance::make({flow(1, 0, 40 * kUs)}, 4, 10 * kUs);
  Solution s;
  s.partitions[1] = {0};
  s.schedule[{1, 0, 0}] = 0;
  EXPECT_TRUE(validate(p, s).empty());
}

TEST(Validate, SlotOutsidePartition) {
  const auto p = ProblemInstance::make({flow(1, 0, 40 * kUs)}, 4, 10 * kUs);
  Solution s;
  s.partitions[1] = {0};
  s.schedule[{1, 0, 0}] = 10 * kUs;
  const auto v = validate(p, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::SlotOutsidePartition);
}

TEST(Validate, SameAppCollision) {
  const auto p = ProblemInstance::make({flow(1, 0, 40 * kUs), flow(1, 1, 40 * kUs)}, 4, 10 * kUs);
  Solution s;
  s.partitions[1] = {0};
  s.schedule[{1, 0, 0}] = 0;
  s.schedule[{1, 1, 0}] = 0;
  const auto v = validate(p, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::SameAppCollision);
}

TEST(Validate, JitterBoundIsPairwiseOverAllInstances) {
  const auto p = ProblemInstance::make({flow(1, 0, 20 * kUs, 10 * kUs)}, 2, 10 * kUs);
  ASSERT_EQ(p.horizon, 20 * kUs);
  const auto q = ProblemInstance::make({flow(1, 0, 20 * kUs, 10 * kUs)}, 6, 10 * kUs);
  Solution s;
  s.partitions[1] = {0, 1, 2, 3, 4, 5};
  s.schedule[{1, 0, 0}] = 0;
  s.schedule[{1, 0, 1}] = 30 * kUs;   // |30 - 20| = 10 ok
  s.schedule[{1, 0, 2}] = 50 * kUs;   // vs 0: |50 - 40| ok; vs 1: |20 - 20| ok
  EXPECT_TRUE(validate(q, s).empty());
  s.schedule[{1, 0, 2}] = 20 * kUs;   // vs 0: |20 - 40| = 20 > 10
  EXPECT_TRUE(has(validate(q, s), ViolationKind::JitterBound));
}

TEST(Validate, StructuralViolations) {
  const auto p = ProblemInstance::make({flow(1, 0, 20 * kUs), flow(2, 0, 40 * kUs)}, 4, 10 * kUs);
  Solution s;
  s.partitions[1] = {0, 2};
  s.partitions[2] = {2, 9};
  s.schedule[{1, 0, 0}] = 0;
  s.schedule[{1, 0, 1}] = 25 * kUs;
  s.schedule[{2, 0, 0}] = 0;
  s.schedule[{3, 0, 0}] = 0;
  const auto v = validate(p, s);
  EXPECT_TRUE(has(v, ViolationKind::PartitionOverlap));
  EXPECT_TRUE(has(v, ViolationKind::SlotOutOfRange));
  EXPECT_TRUE(has(v, ViolationKind::MisalignedTime));
  EXPECT_TRUE(has(v, ViolationKind::CrossAppCollision));
  EXPECT_TRUE(has(v, ViolationKind::UnknownInstance));
  Solution missing = s;
  missing.schedule.erase({1, 0, 1});
  EXPECT_TRUE(has(validate(p, missing), ViolationKind::MissingInstance));
  Solution late = s;
  late.schedule[{1, 0, 1}] = 40 * kUs;
  EXPECT_TRUE(has(validate(p, late), ViolationKind::OutsideHorizon));
}

TEST(Solve, SingleFlowOnFourSlots) {
  const auto p = ProblemInstance::make({flow(1, 0, 20 * kUs)}, 4, 10 * kUs);
  const auto r = solve(p, std::chrono::seconds(5));
  ASSERT_EQ(r.status, SolveStatus::Feasible);
  EXPECT_TRUE(validate(p, *r.solution).empty());
  EXPECT_EQ(r.solution->partitions.at(1).size(), 2u);
}

TEST(Solve, SameAppOverSubscribedIsInfeasible) {
  const auto p = ProblemInstance::make({flow(1, 0, 10 * kUs), flow(1, 1, 10 * kUs)}, 1, 10 * kUs);
  EXPECT_EQ(solve(p, std::chrono::seconds(5)).status, SolveStatus::Infeasible);
}

TEST(Solve, EmptyInstanceIsFeasible) {
  const auto p = ProblemInstance::make({}, 8, 10 * kUs);
  const auto r = solve(p, std::chrono::seconds(1));
  ASSERT_EQ(r.status, SolveStatus::Feasible);
  EXPECT_TRUE(r.solution->schedule.empty());
}

TEST(Solve, DeterministicForFixedInstance) {
  SweepParams params;
  const auto insts = generate_instances(params, 0.4, 3, 4);
  for (const auto& inst : insts) {
    const auto a = solve(inst, std::chrono::seconds(10));
    const auto b = solve(inst, std::chrono::seconds(10));
    ASSERT_EQ(a.status, b.status);
    if (a.solution) EXPECT_EQ(*a.solution, *b.solution);
  }
}

TEST(Solve, LowUtilizationRegimeIsAlmostAlwaysFeasible) {
  SweepParams params;
  params.flow_counts = {2, 4};
  std::uint32_t feasible = 0;
  for (double u : {0.05, 0.10, 0.15}) {
    for (const auto& inst : generate_instances(params, u, 77, 64)) {
      const auto r = solve(inst, std::chrono::seconds(10));
      if (r.status == SolveStatus::Feasible) {
        ++feasible;
        EXPECT_TRUE(validate(inst, *r.solution).empty());
        std::set<std::uint32_t> seen;
        for (const auto& [app, slots] : r.solution->partitions)
          for (auto s : slots) EXPECT_TRUE(seen.insert(s).second);
      }
    }
  }
  EXPECT_GE(feasible, static_cast<std::uint32_t>(0.99 * 192));
}

TEST(SolveProperty, AgreesWithExhaustiveOracle) {
  Rng rng(2024);
  int feasible = 0;
  for (int i = 0; i < 150; ++i) {
    const auto inst = oracle::small_instance(rng);
    const auto r = solve(inst, std::chrono::seconds(10));
    ASSERT_NE(r.status, SolveStatus::Timeout);
    const bool expect = oracle::feasible(inst);
    ASSERT_EQ(r.status == SolveStatus::Feasible, expect) << "instance " << i;
    if (r.solution) {
      ++feasible;
      EXPECT_TRUE(validate(inst, *r.solution).empty());
    }
  }
  // The generator should exercise both verdicts.
  EXPECT_GT(feasible, 10);
  EXPECT_LT(feasible, 140);
}

TEST(Generator, DeterministicAndNearTarget) {
  SweepParams params;
  const auto a = generate_instances(params, 0.3, 5, 16);
  const auto b = generate_instances(params, 0.3, 5, 16);
  ASSERT_EQ(a.size(), 16u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].flows.size(), b[i].flows.size());
    for (std::size_t j = 0; j < a[i].flows.size(); ++j) {
      EXPECT_EQ(a[i].flows[j].period, b[i].flows[j].period);
      EXPECT_EQ(a[i].flows[j].max_jitter, b[i].flows[j].max_jitter);
    }
    EXPECT_NEAR(utilization(a[i]), 0.3, 0.0125 + 1e-12);
    for (const auto& f : a[i].flows) {
      EXPECT_GE(f.period, params.min_period);
      EXPECT_LE(f.period, params.max_period);
      EXPECT_GE(f.max_jitter, static_cast<Nanos>(params.jitter_min * static_cast<double>(f.period)) - 1);
      EXPECT_LE(f.max_jitter, static_cast<Nanos>(params.jitter_max * static_cast<double>(f.period)) + 1);
      // Harmonic: every period divides the largest one.
      EXPECT_EQ(hyperperiod(a[i].flows) % f.period, 0);
    }
  }
}

TEST(Generator, ZeroUtilizationIsEmpty) {
  for (const auto& inst : generate_instances(SweepParams{}, 0.0, 1, 3)) EXPECT_TRUE(inst.flows.empty());
}

TEST(Generator, TableFiveDefaults) {
  const SweepParams p;
  EXPECT_EQ(p.ring_size, 32u);
  EXPECT_EQ(p.slot, 10 * kUs);
  EXPECT_EQ(p.instances_per_point, 64u);
  EXPECT_EQ(p.min_period, 80 * kUs);
  EXPECT_EQ(p.max_period, 1600 * kUs);
  EXPECT_DOUBLE_EQ(p.jitter_min, 0.05);
  EXPECT_DOUBLE_EQ(p.jitter_max, 0.20);
}

TEST(Sweep, FeasibilityDoesNotDependOnJobs) {
  SweepParams p;
  p.utilizations = {0.1, 0.4};
  p.instances_per_point = 8;
  const auto one = run_sweep(p, 1);
  const auto three = run_sweep(p, 3);
  ASSERT_EQ(one.size(), 2u);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].feasible, three[i].feasible);
    EXPECT_EQ(one[i].instances, 8u);
    EXPECT_EQ(one[i].invalid, 0u);
  }
}

TEST(TextFormat, InstanceAndSolutionRoundTrip) {
  const auto inst = generate_instances(SweepParams{}, 0.25, 9, 1).front();
  const auto r = solve(inst, std::chrono::seconds(10));
  ASSERT_EQ(r.status, SolveStatus::Feasible);
  std::stringstream ss;
  write_instance(ss, inst);
  write_solution(ss, *r.solution);
  const std::string text = ss.str();

  std::istringstream in1(text);
  const auto back = read_instance(in1);
  EXPECT_EQ(back.horizon, inst.horizon);
  ASSERT_EQ(back.flows.size(), inst.flows.size());
  for (std::size_t i = 0; i < back.flows.size(); ++i) {
    EXPECT_EQ(back.flows[i].period, inst.flows[i].period);
    EXPECT_EQ(back.flows[i].max_jitter, inst.flows[i].max_jitter);
  }
  std::istringstream in2(text);
  EXPECT_EQ(read_solution(in2), *r.solution);

  std::stringstream again;
  write_instance(again, back);
  write_solution(again, *r.solution);
  EXPECT_EQ(again.str(), text);
}

TEST(TextFormat, ErrorsCarryLineNumbers) {
  std::istringstream in("ring 4\nslot_us 10\nflow 1 abc 0 64\n");
  try {
    read_instance(in);
    FAIL() << "expected TextFormatError";
  } catch (const TextFormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_EQ(parse_us("12.5"), 12'500);
  EXPECT_EQ(format_us(12'500), "12.5");
  EXPECT_THROW(parse_us("1.0001"), std::invalid_argument);
}
