#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "slotnet/insertion.hpp"
#include "slotnet/ptp.hpp"
#include "slotnet/ring.hpp"
#include "slotnet/traffic.hpp"

namespace slotnet {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RtFlowConfig {
  FlowId id = 0;
  ClassId traffic_class = 1;
  Nanos period = 0;
  Nanos phase = 0;                  // scheduled time of seq 0, sender clock
  std::uint32_t payload = 64;
  std::string destination;
  Nanos submit_lead = 100'000;      // packets reach the RT queue this long before their slot
  std::uint64_t count = 0;          // 0: unlimited
  std::vector<std::uint64_t> late_seqs;  // submitted after their insertion deadline
};

struct BeFlowConfig {
  FlowId id = 0;
  ClassId traffic_class = kBestEffortClass;
  std::uint32_t payload = 1400;
  std::string destination;
  bool saturate = true;   // keep the queue backlogged
  Nanos interval = 0;     // offered inter-packet gap when not saturating
  Nanos start = 0;
};

struct SenderConfig {
  RingConfig ring;
  std::vector<ClassId> ownership;  // empty: every slot best-effort
  InsertMode mode = InsertMode::Strict;
  ServicePolicy policy;
  std::size_t rt_capacity = kDefaultQueueCapacity;
  std::size_t be_capacity = kDefaultQueueCapacity;
  Nanos clock_offset = 0;
  std::vector<RtFlowConfig> rt_flows;
  std::vector<BeFlowConfig> be_flows;
};

struct ReceiverConfig {
  Nanos clock_offset = 0;
  double clock_drift_ppm = 0;
};

struct GateWindow {
  Nanos offset = 0;
  Nanos length = 0;
};

/// Per-flow gate windows repeating every `cycle`. Flows without windows pass
/// ungated.
struct GateSchedule {
  Nanos cycle = 0;
  std::map<FlowId, std::vector<GateWindow>> windows;

  struct Decision {
    Nanos forward_time;
    bool miss;
  };
  Decision decide(FlowId flow, Nanos arrival) const;
  void validate() const;
};

struct BridgeConfig {
  GateSchedule gates;
};

struct NodeConfig {
  std::string id;
  std::variant<SenderConfig, ReceiverConfig, BridgeConfig> role;
};

struct LinkConfig {
  std::string a;
  std::string b;
  Nanos propagation = 0;
  std::uint64_t line_rate = 1'000'000'000;
};

struct RouteConfig {
  FlowId flow = 0;
  std::vector<std::string> path;  // sender .. destination
};

struct SyncConfig {
  std::string grandmaster;
  std::vector<std::string> slaves;  // receivers that timestamp on a PTP-disciplined clock
  PtpConfig ptp;
  PtpErrorModel model;
  bool filtered = true;
};

struct Scenario {
  std::string name = "scenario";
  std::vector<NodeConfig> nodes;
  std::vector<LinkConfig> links;
  std::vector<RouteConfig> routes;  // flows without a route take a shortest path
  Nanos duration = 100'000'000;
  std::uint64_t rng_seed = 1;
  std::optional<SyncConfig> sync;
  std::vector<FlowId> measure_flows;  // empty: record every flow

  /// Throws ScenarioError on malformed topology or flows.
  void validate() const;
};

struct PacketRecord {
  FlowId flow = 0;
  std::uint64_t seq = 0;
  Nanos send_time = 0;
  Nanos recv_time = 0;
  Nanos delay() const { return recv_time - send_time; }
  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

struct Dispersion {
  double stddev = 0;
  double max_abs_dev = 0;
};

struct FlowSummary {
  FlowId flow = 0;
  ClassId traffic_class = 0;
  bool real_time = false;
  std::uint64_t enqueued = 0;
  std::uint64_t sent = 0;         // valid frames put on the wire
  std::uint64_t received = 0;     // delivered inside their gate windows
  std::uint64_t crc_dropped = 0;
  std::uint64_t gate_missed = 0;
  std::uint64_t in_flight = 0;    // still travelling when the run ended
  std::map<std::string, std::uint64_t> drops;  // pre-wire drops by cause
  double mean_delay = 0;
  std::optional<Dispersion> pdv;
  std::optional<Dispersion> jitter;
  double goodput_bps = 0;
};

struct NodeStats {
  std::string node;
  std::uint64_t slots_sent = 0;
  std::uint64_t placeholders_sent = 0;
  std::uint64_t idle_slots = 0;
  std::uint64_t crc_dropped = 0;
  std::uint64_t gate_misses = 0;
  std::uint64_t polls = 0;
};

struct MetricsReport {
  Nanos duration = 0;
  std::vector<PacketRecord> packets;
  std::map<FlowId, FlowSummary> flows;
  std::map<ClassId, double> class_goodput_bps;
  std::vector<NodeStats> nodes;
  std::vector<SyncRound> sync;
};

/// Population standard deviation and max deviation from the mean.
/// Throws InsufficientSamples below two samples.
Dispersion pdv(std::span<const Nanos> delays);

/// Dispersion of (arrival[k+1] - arrival[k] - nominal_period).
Dispersion inter_arrival_jitter(std::span<const Nanos> arrivals, Nanos nominal_period);

/// As above, scaling the nominal gap by the sequence-number gap so losses do
/// not show up as jitter.
Dispersion inter_arrival_jitter(std::span<const Nanos> arrivals, std::span<const std::uint64_t> seqs,
                                Nanos nominal_period);

/// Release time of a frame reaching a gated bridge at `now`.
GateSchedule::Decision step_gate_bridge(const BridgeConfig& bridge, FlowId flow, Nanos now);

/// Deterministic discrete-event run of the scenario.
MetricsReport run(const Scenario& scenario);

}  // namespace slotnet
