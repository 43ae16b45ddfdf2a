#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "slotnet/config.hpp"
#include "slotnet/csv.hpp"

namespace fs = std::filesystem;
using namespace slotnet;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<Nanos> duration;
  std::string format = "csv";
};

// Failures that map to exit code 1.
struct RunFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void header(const std::string& command, const std::vector<std::string>& lines) {
  std::cerr << "# slotnet " << command << "\n";
  for (const auto& l : lines) std::cerr << "#   " << l << "\n";
}

std::ofstream open_out(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  const fs::path p = fs::path(c.out_dir) / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw RunFailure("cannot write " + p.string());
  return out;
}

int simulate(const Common& c, const std::string& path) {
  Scenario s = config::load_scenario(path);
  if (c.seed) {
    s.rng_seed = *c.seed;
    if (s.sync) s.sync->ptp.rng_seed = *c.seed;
  }
  if (c.duration) {
    s.duration = *c.duration;
    try {
      s.validate();
    } catch (const ScenarioError& e) {
      throw config::ValidationError(e.what());
    }
  }
  header("simulate " + path, config::describe(s));
  const MetricsReport r = run(s);

  {
    auto out = open_out(c, "metrics.csv");
    csv::write_packets(out, r.packets);
  }
  {
    auto out = open_out(c, "summary.csv");
    csv::write_summary(out, csv::summary_rows(r));
  }
  {
    auto out = open_out(c, "flows.csv");
    csv::write_flows(out, csv::flow_rows(r));
  }
  if (!r.sync.empty()) {
    auto out = open_out(c, "sync.csv");
    csv::write_sync(out, csv::sync_rows(r.sync));
  }

  for (const auto& [id, f] : r.flows) {
    std::cerr << "flow " << id << (f.real_time ? " rt" : " be") << ": sent " << f.sent << ", received " << f.received
              << ", goodput " << csv::format_double(f.goodput_bps) << " bps";
    if (f.real_time && f.received) std::cerr << ", mean delay " << csv::format_double(f.mean_delay) << " ns";
    if (f.pdv) std::cerr << ", pdv " << csv::format_double(f.pdv->stddev) << " ns";
    if (f.jitter) std::cerr << ", jitter " << csv::format_double(f.jitter->stddev) << " ns";
    for (const auto& [cause, n] : f.drops) std::cerr << ", " << cause << " " << n;
    if (f.gate_missed) std::cerr << ", gate missed " << f.gate_missed;
    std::cerr << "\n";
  }
  for (const auto& n : r.nodes)
    if (n.slots_sent || n.idle_slots)
      std::cerr << "node " << n.node << ": slots " << n.slots_sent << ", placeholders " << n.placeholders_sent
                << ", idle " << n.idle_slots << "\n";
  return 0;
}

int ptp_study(const Common& c, const std::string& path) {
  config::PtpStudy st = config::load_ptp_study(path);
  if (c.seed) st.ptp.rng_seed = *c.seed;
  header("ptp-study " + path, config::describe(st));

  std::vector<csv::PtpSummaryRow> rows;
  double unfiltered = 0, filtered = 0;
  for (std::uint32_t k = 0; k < st.seeds; ++k) {
    PtpConfig cfg = st.ptp;
    cfg.rng_seed = st.ptp.rng_seed + k;
    for (bool f : {false, true}) {
      if (f ? !st.run_filtered : !st.run_unfiltered) continue;
      const SyncTrace trace = run_sync_sim(cfg, st.model, f);
      rows.push_back(csv::ptp_summary_row(cfg.rng_seed, trace));
      (f ? filtered : unfiltered) += trace.mean_abs_drift();
      auto out = open_out(c, "sync_" + std::string(f ? "filtered" : "unfiltered") + "_seed" +
                                 std::to_string(cfg.rng_seed) + ".csv");
      csv::write_sync(out, csv::sync_rows(trace.rounds));
    }
  }
  auto out = open_out(c, "ptp_summary.csv");
  csv::write_ptp_summary(out, rows);

  if (st.run_unfiltered) std::cerr << "mean |drift error| unfiltered: " << csv::format_double(unfiltered / st.seeds) << " ns\n";
  if (st.run_filtered) std::cerr << "mean |drift error| filtered: " << csv::format_double(filtered / st.seeds) << " ns\n";
  if (st.run_filtered && st.run_unfiltered && filtered > 0)
    std::cerr << "reduction: " << csv::format_double(unfiltered / filtered) << "x\n";
  return 0;
}

int schedule(const Common& c, const std::string& path, std::int64_t timeout_ms) {
  const ProblemInstance inst = config::load_instance(path);
  header("schedule " + path,
         {"ring: " + std::to_string(inst.ring_size), "slot_us: " + format_us(inst.slot),
          "horizon_us: " + format_us(inst.horizon), "flows: " + std::to_string(inst.flows.size()),
          "utilization: " + csv::format_double(utilization(inst)), "timeout_ms: " + std::to_string(timeout_ms)});
  const SolveResult r = solve(inst, std::chrono::milliseconds(timeout_ms));
  std::cout << "verdict: " << to_string(r.status) << "\n";
  if (r.status != SolveStatus::Feasible) return 1;
  const auto violations = validate(inst, *r.solution);
  if (!violations.empty()) throw RunFailure("solver produced an invalid schedule");
  auto out = open_out(c, "solution.txt");
  write_instance(out, inst);
  write_solution(out, *r.solution);
  return 0;
}

int sweep(const Common& c, const std::string& path, unsigned jobs) {
  SweepParams p = config::load_sweep(path);
  if (c.seed) p.seed = *c.seed;
  auto lines = config::describe(p);
  lines.push_back("jobs: " + std::to_string(jobs));
  header("sweep-schedulability " + path, lines);
  const auto points = run_sweep(p, jobs);
  std::vector<csv::SweepRow> rows;
  bool invalid = false;
  for (const auto& pt : points) {
    rows.push_back(csv::SweepRow{pt.utilization, pt.instances, pt.feasible, pt.infeasible, pt.timeout});
    std::cerr << "utilization " << csv::format_double(pt.utilization) << ": " << pt.feasible << "/" << pt.instances
              << " feasible, " << pt.timeout << " timeouts, max solve "
              << csv::format_double(static_cast<double>(pt.max_elapsed.count()) / 1e6) << " ms\n";
    invalid |= pt.invalid > 0;
  }
  auto out = open_out(c, "sweep.csv");
  csv::write_sweep(out, rows);
  if (invalid) throw RunFailure("solver produced an invalid schedule");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slot-based deterministic networking simulator"};
  app.require_subcommand(1, 1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Override the RNG seed");
    sub->add_option("--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv"}))->capture_default_str();
  };

  std::string file;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and write per-packet metrics");
  sim->add_option("scenario", file, "Scenario YAML file")->required()->check(CLI::ExistingFile);
  add_common(sim);
  sim->add_option("--duration", c.duration, "Override the simulated duration (ns)")->check(CLI::PositiveNumber);

  auto* ptp = app.add_subcommand("ptp-study", "Run filtered and unfiltered PTP servo simulations");
  ptp->add_option("config", file, "PTP study YAML file")->required()->check(CLI::ExistingFile);
  add_common(ptp);

  std::int64_t timeout_ms = 10'000;
  auto* sch = app.add_subcommand("schedule", "Partition the ring and schedule one flow set");
  sch->add_option("instance", file, "Instance text file")->required()->check(CLI::ExistingFile);
  add_common(sch);
  sch->add_option("--timeout-ms", timeout_ms, "Solver timeout")->check(CLI::PositiveNumber)->capture_default_str();

  unsigned jobs = 1;
  auto* swp = app.add_subcommand("sweep-schedulability", "Feasibility ratio across utilization targets");
  swp->add_option("params", file, "Sweep YAML file")->required()->check(CLI::ExistingFile);
  add_common(swp);
  swp->add_option("--jobs", jobs, "Parallel solver threads")->check(CLI::Range(1u, 256u))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (sim->parsed()) return simulate(c, file);
    if (ptp->parsed()) return ptp_study(c, file);
    if (sch->parsed()) return schedule(c, file, timeout_ms);
    return sweep(c, file, jobs);
  } catch (const config::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const config::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
