#include "slotnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace slotnet::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, p);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return v;
}

namespace {

struct Table {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Table read_table(std::istream& in, const std::vector<std::string>& header) {
  Table t;
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  ++n;
  if (split(line) != header) throw CsvError(1, "unexpected header '" + line + "'");
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != header.size())
      throw CsvError(n, "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    t.rows.emplace_back(n, std::move(fields));
  }
  return t;
}

void write_header(std::ostream& out, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
}

template <class T>
T integer(std::size_t line, const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw CsvError(line, "expected an integer, got '" + s + "'");
  return v;
}

double real(std::size_t line, const std::string& s) {
  try {
    return parse_double(s);
  } catch (const std::invalid_argument& e) {
    throw CsvError(line, e.what());
  }
}

std::optional<double> optional_real(std::size_t line, const std::string& s) {
  if (s.empty()) return std::nullopt;
  return real(line, s);
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

const std::vector<std::string> kPacketHeader{"flow_id", "seq", "send_time_ns", "recv_time_ns", "delay_ns"};
const std::vector<std::string> kSummaryHeader{"flow_id", "count", "mean_delay_ns", "pdv_ns", "jitter_ns",
                                              "drops_by_cause"};
const std::vector<std::string> kFlowHeader{"flow_id",  "class",       "kind",        "enqueued",  "sent",
                                           "received", "crc_dropped", "gate_missed", "in_flight", "goodput_bps"};
const std::vector<std::string> kSyncHeader{"round", "true_offset_ns", "offset_error_ns", "drift_error_ns",
                                           "freq_ratio"};
const std::vector<std::string> kPtpSummaryHeader{"seed",           "filtered",          "rounds",
                                                 "delta_ts_ns",    "delta_drift_ns",    "mean_abs_drift_ns",
                                                 "max_abs_offset_error_ns", "converged_round"};
const std::vector<std::string> kSweepHeader{"utilization", "instances", "feasible",
                                            "infeasible",  "timeout",   "feasible_fraction"};

}  // namespace

void write_packets(std::ostream& out, std::span<const PacketRecord> rows) {
  write_header(out, kPacketHeader);
  for (const auto& r : rows)
    out << r.flow << "," << r.seq << "," << r.send_time << "," << r.recv_time << "," << r.delay() << "\n";
}

std::vector<PacketRecord> read_packets(std::istream& in) {
  std::vector<PacketRecord> out;
  for (const auto& [n, f] : read_table(in, kPacketHeader).rows) {
    PacketRecord r{integer<FlowId>(n, f[0]), integer<std::uint64_t>(n, f[1]), integer<Nanos>(n, f[2]),
                   integer<Nanos>(n, f[3])};
    if (integer<Nanos>(n, f[4]) != r.delay()) throw CsvError(n, "delay_ns does not match recv - send");
    out.push_back(r);
  }
  return out;
}

std::vector<SummaryRow> summary_rows(const MetricsReport& report) {
  std::vector<SummaryRow> rows;
  for (const auto& [id, fs] : report.flows) {
    SummaryRow r;
    r.flow = id;
    r.count = fs.received;
    r.mean_delay_ns = fs.mean_delay;
    if (fs.pdv) r.pdv_ns = fs.pdv->stddev;
    if (fs.jitter) r.jitter_ns = fs.jitter->stddev;
    r.drops = fs.drops;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary(std::ostream& out, std::span<const SummaryRow> rows) {
  write_header(out, kSummaryHeader);
  for (const auto& r : rows) {
    out << r.flow << "," << r.count << "," << format_double(r.mean_delay_ns) << "," << optional_text(r.pdv_ns) << ","
        << optional_text(r.jitter_ns) << ",";
    bool first = true;
    for (const auto& [cause, n] : r.drops) {
      out << (first ? "" : ";") << cause << "=" << n;
      first = false;
    }
    out << "\n";
  }
}

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::vector<SummaryRow> out;
  for (const auto& [n, f] : read_table(in, kSummaryHeader).rows) {
    SummaryRow r;
    r.flow = integer<FlowId>(n, f[0]);
    r.count = integer<std::uint64_t>(n, f[1]);
    r.mean_delay_ns = real(n, f[2]);
    r.pdv_ns = optional_real(n, f[3]);
    r.jitter_ns = optional_real(n, f[4]);
    std::stringstream ss(f[5]);
    for (std::string item; std::getline(ss, item, ';');) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw CsvError(n, "drop entry '" + item + "' lacks '='");
      r.drops[item.substr(0, eq)] = integer<std::uint64_t>(n, item.substr(eq + 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<FlowRow> flow_rows(const MetricsReport& report) {
  std::vector<FlowRow> rows;
  for (const auto& [id, fs] : report.flows)
    rows.push_back(FlowRow{id, fs.traffic_class, fs.real_time ? "rt" : "be", fs.enqueued, fs.sent, fs.received,
                           fs.crc_dropped, fs.gate_missed, fs.in_flight, fs.goodput_bps});
  return rows;
}

void write_flows(std::ostream& out, std::span<const FlowRow> rows) {
  write_header(out, kFlowHeader);
  for (const auto& r : rows)
    out << r.flow << "," << r.traffic_class << "," << r.kind << "," << r.enqueued << "," << r.sent << ","
        << r.received << "," << r.crc_dropped << "," << r.gate_missed << "," << r.in_flight << ","
        << format_double(r.goodput_bps) << "\n";
}

std::vector<FlowRow> read_flows(std::istream& in) {
  std::vector<FlowRow> out;
  for (const auto& [n, f] : read_table(in, kFlowHeader).rows) {
    if (f[2] != "rt" && f[2] != "be") throw CsvError(n, "kind must be rt or be");
    out.push_back(FlowRow{integer<FlowId>(n, f[0]), integer<ClassId>(n, f[1]), f[2], integer<std::uint64_t>(n, f[3]),
                          integer<std::uint64_t>(n, f[4]), integer<std::uint64_t>(n, f[5]),
                          integer<std::uint64_t>(n, f[6]), integer<std::uint64_t>(n, f[7]),
                          integer<std::uint64_t>(n, f[8]), real(n, f[9])});
  }
  return out;
}

std::vector<SyncRow> sync_rows(std::span<const SyncRound> rounds) {
  std::vector<SyncRow> rows;
  for (const auto& r : rounds)
    rows.push_back(SyncRow{r.round, r.true_offset, r.offset_error, r.drift_error, r.freq_ratio_estimate});
  return rows;
}

void write_sync(std::ostream& out, std::span<const SyncRow> rows) {
  write_header(out, kSyncHeader);
  for (const auto& r : rows)
    out << r.round << "," << format_double(r.true_offset_ns) << "," << format_double(r.offset_error_ns) << ","
        << format_double(r.drift_error_ns) << "," << format_double(r.freq_ratio) << "\n";
}

std::vector<SyncRow> read_sync(std::istream& in) {
  std::vector<SyncRow> out;
  for (const auto& [n, f] : read_table(in, kSyncHeader).rows)
    out.push_back(SyncRow{integer<std::uint64_t>(n, f[0]), real(n, f[1]), real(n, f[2]), real(n, f[3]), real(n, f[4])});
  return out;
}

PtpSummaryRow ptp_summary_row(std::uint64_t seed, const SyncTrace& trace) {
  PtpSummaryRow r;
  r.seed = seed;
  r.filtered = trace.filtered;
  r.rounds = trace.rounds.size();
  r.delta_ts_ns = trace.delta_ts;
  r.delta_drift_ns = trace.delta_drift;
  r.mean_abs_drift_ns = trace.mean_abs_drift();
  r.max_abs_offset_error_ns = trace.max_abs_offset_error();
  if (trace.converged_round) r.converged_round = *trace.converged_round;
  return r;
}

void write_ptp_summary(std::ostream& out, std::span<const PtpSummaryRow> rows) {
  write_header(out, kPtpSummaryHeader);
  for (const auto& r : rows)
    out << r.seed << "," << (r.filtered ? 1 : 0) << "," << r.rounds << "," << format_double(r.delta_ts_ns) << ","
        << format_double(r.delta_drift_ns) << "," << format_double(r.mean_abs_drift_ns) << ","
        << format_double(r.max_abs_offset_error_ns) << ","
        << (r.converged_round ? std::to_string(*r.converged_round) : std::string()) << "\n";
}

std::vector<PtpSummaryRow> read_ptp_summary(std::istream& in) {
  std::vector<PtpSummaryRow> out;
  for (const auto& [n, f] : read_table(in, kPtpSummaryHeader).rows) {
    if (f[1] != "0" && f[1] != "1") throw CsvError(n, "filtered must be 0 or 1");
    PtpSummaryRow r{integer<std::uint64_t>(n, f[0]), f[1] == "1", integer<std::uint64_t>(n, f[2]), real(n, f[3]),
                    real(n, f[4]), real(n, f[5]), real(n, f[6]), std::nullopt};
    if (!f[7].empty()) r.converged_round = integer<std::uint64_t>(n, f[7]);
    out.push_back(r);
  }
  return out;
}

void write_sweep(std::ostream& out, std::span<const SweepRow> rows) {
  write_header(out, kSweepHeader);
  for (const auto& r : rows)
    out << format_double(r.utilization) << "," << r.instances << "," << r.feasible << "," << r.infeasible << ","
        << r.timeout << "," << format_double(r.feasible_fraction()) << "\n";
}

std::vector<SweepRow> read_sweep(std::istream& in) {
  std::vector<SweepRow> out;
  for (const auto& [n, f] : read_table(in, kSweepHeader).rows) {
    SweepRow r{real(n, f[0]), integer<std::uint32_t>(n, f[1]), integer<std::uint32_t>(n, f[2]),
               integer<std::uint32_t>(n, f[3]), integer<std::uint32_t>(n, f[4])};
    if (format_double(r.feasible_fraction()) != f[5]) throw CsvError(n, "feasible_fraction is inconsistent");
    out.push_back(r);
  }
  return out;
}

}  // namespace slotnet::csv
