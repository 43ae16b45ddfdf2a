#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slotnet/engine.hpp"
#include "slotnet/partition.hpp"
#include "slotnet/ptp.hpp"

namespace slotnet::csv {

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& msg)
      : std::runtime_error("csv line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

// packets.csv: flow_id,seq,send_time_ns,recv_time_ns,delay_ns
void write_packets(std::ostream& out, std::span<const PacketRecord> rows);
std::vector<PacketRecord> read_packets(std::istream& in);

// summary.csv: flow_id,count,mean_delay_ns,pdv_ns,jitter_ns,drops_by_cause
// drops_by_cause is "cause=n;cause=n" sorted by cause, empty when nothing dropped.
struct SummaryRow {
  FlowId flow = 0;
  std::uint64_t count = 0;
  double mean_delay_ns = 0;
  std::optional<double> pdv_ns;
  std::optional<double> jitter_ns;
  std::map<std::string, std::uint64_t> drops;
  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};
std::vector<SummaryRow> summary_rows(const MetricsReport& report);
void write_summary(std::ostream& out, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary(std::istream& in);

// flows.csv: flow_id,class,kind,enqueued,sent,received,crc_dropped,gate_missed,in_flight,goodput_bps
struct FlowRow {
  FlowId flow = 0;
  ClassId traffic_class = 0;
  std::string kind;
  std::uint64_t enqueued = 0, sent = 0, received = 0, crc_dropped = 0, gate_missed = 0, in_flight = 0;
  double goodput_bps = 0;
  friend bool operator==(const FlowRow&, const FlowRow&) = default;
};
std::vector<FlowRow> flow_rows(const MetricsReport& report);
void write_flows(std::ostream& out, std::span<const FlowRow> rows);
std::vector<FlowRow> read_flows(std::istream& in);

// sync.csv: round,true_offset_ns,offset_error_ns,drift_error_ns,freq_ratio
struct SyncRow {
  std::uint64_t round = 0;
  double true_offset_ns = 0;
  double offset_error_ns = 0;
  double drift_error_ns = 0;
  double freq_ratio = 1;
  friend bool operator==(const SyncRow&, const SyncRow&) = default;
};
std::vector<SyncRow> sync_rows(std::span<const SyncRound> rounds);
void write_sync(std::ostream& out, std::span<const SyncRow> rows);
std::vector<SyncRow> read_sync(std::istream& in);

// ptp_summary.csv: seed,filtered,rounds,delta_ts_ns,delta_drift_ns,mean_abs_drift_ns,max_abs_offset_error_ns,converged_round
// converged_round is empty when the servo never settled.
struct PtpSummaryRow {
  std::uint64_t seed = 0;
  bool filtered = false;
  std::uint64_t rounds = 0;
  double delta_ts_ns = 0;
  double delta_drift_ns = 0;
  double mean_abs_drift_ns = 0;
  double max_abs_offset_error_ns = 0;
  std::optional<std::uint64_t> converged_round;
  friend bool operator==(const PtpSummaryRow&, const PtpSummaryRow&) = default;
};
PtpSummaryRow ptp_summary_row(std::uint64_t seed, const SyncTrace& trace);
void write_ptp_summary(std::ostream& out, std::span<const PtpSummaryRow> rows);
std::vector<PtpSummaryRow> read_ptp_summary(std::istream& in);

// sweep.csv: utilization,instances,feasible,infeasible,timeout,feasible_fraction
struct SweepRow {
  double utilization = 0;
  std::uint32_t instances = 0;
  std::uint32_t feasible = 0;
  std::uint32_t infeasible = 0;
  std::uint32_t timeout = 0;
  double feasible_fraction() const { return instances ? static_cast<double>(feasible) / instances : 0.0; }
  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};
void write_sweep(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep(std::istream& in);

}  // namespace slotnet::csv
