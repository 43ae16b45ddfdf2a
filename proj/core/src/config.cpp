#include "slotnet/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "slotnet/csv.hpp"

namespace slotnet::config {

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Thin wrapper that turns yaml-cpp failures into ParseError with positions.
class Doc {
 public:
  explicit Doc(std::string source) : source_(std::move(source)) {}

  YAML::Node load(const std::string& text) const {
    try {
      YAML::Node root = YAML::Load(text);
      if (!root.IsMap()) throw error(root, "top level must be a mapping");
      return root;
    } catch (const YAML::ParserException& e) {
      throw ParseError(source_, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
  }

  ParseError error(const YAML::Node& at, const std::string& msg) const {
    const YAML::Mark m = at.Mark();
    if (m.is_null()) return ParseError(source_, 0, 0, msg);
    return ParseError(source_, static_cast<std::size_t>(m.line) + 1, static_cast<std::size_t>(m.column) + 1, msg);
  }

  void expect_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) throw error(n, what + " must be a mapping");
  }

  void expect_seq(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) throw error(n, what + " must be a list");
  }

  void allow(const YAML::Node& map, std::initializer_list<const char*> keys, const std::string& what) const {
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) throw error(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  template <class T>
  T as(const YAML::Node& n, const std::string& key) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw error(n, "bad value for '" + key + "'");
    }
  }

  template <class T>
  T required(const YAML::Node& map, const char* key, const std::string& what) const {
    const YAML::Node n = map[key];
    if (!n) throw error(map, "missing required key '" + std::string(key) + "' in " + what);
    return as<T>(n, key);
  }

  template <class T>
  T optional(const YAML::Node& map, const char* key, T fallback) const {
    const YAML::Node n = map[key];
    if (!n) return fallback;
    return as<T>(n, key);
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

template <class F>
auto validated(F&& build) {
  try {
    return build();
  } catch (const ScenarioError& e) {
    throw ValidationError(e.what());
  } catch (const InvalidConfig& e) {
    throw ValidationError(e.what());
  } catch (const InvalidInstance& e) {
    throw ValidationError(e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

RingConfig parse_ring(const Doc& doc, const YAML::Node& n) {
  doc.expect_map(n, "ring");
  doc.allow(n,
            {"num_slots", "slot_size", "batch_size", "polling_period_ns", "polling_overhead_ns", "line_rate_bps",
             "wire_overhead"},
            "ring");
  RingConfig r;
  r.num_slots = doc.required<std::uint32_t>(n, "num_slots", "ring");
  r.slot_size = doc.required<std::uint32_t>(n, "slot_size", "ring");
  r.batch_size = doc.optional<std::uint32_t>(n, "batch_size", r.batch_size);
  r.polling_period = doc.optional<Nanos>(n, "polling_period_ns", r.polling_period);
  r.polling_overhead = doc.optional<Nanos>(n, "polling_overhead_ns", r.polling_overhead);
  r.line_rate = doc.optional<std::uint64_t>(n, "line_rate_bps", r.line_rate);
  r.wire_overhead = doc.optional<std::uint32_t>(n, "wire_overhead", r.wire_overhead);
  return r;
}

std::vector<ClassId> parse_ownership(const Doc& doc, const YAML::Node& n, std::uint32_t num_slots) {
  doc.expect_map(n, "ownership");
  doc.allow(n, {"default_class", "spread", "slots"}, "ownership");
  std::vector<ClassId> owner(num_slots, doc.optional<ClassId>(n, "default_class", kBestEffortClass));
  if (const YAML::Node spread = n["spread"]) {
    doc.expect_seq(spread, "ownership.spread");
    std::vector<bool> taken(num_slots, false);
    for (const auto& item : spread) {
      doc.expect_map(item, "ownership.spread entry");
      doc.allow(item, {"class", "fraction"}, "ownership.spread entry");
      const auto cls = doc.required<ClassId>(item, "class", "ownership.spread entry");
      const auto frac = doc.required<double>(item, "fraction", "ownership.spread entry");
      if (!(frac >= 0 && frac <= 1)) throw doc.error(item, "spread fraction must lie in [0, 1]");
      const auto count = static_cast<std::uint32_t>(std::llround(frac * num_slots));
      // Evenly spaced positions, skipping slots already claimed by an earlier entry.
      for (std::uint32_t pos : spread_positions(num_slots, count)) {
        std::uint32_t p = pos;
        for (std::uint32_t step = 0; step < num_slots && taken[p]; ++step) p = (p + 1) % num_slots;
        if (taken[p]) throw doc.error(item, "spread fractions exceed the ring");
        taken[p] = true;
        owner[p] = cls;
      }
    }
  }
  if (const YAML::Node slots = n["slots"]) {
    doc.expect_map(slots, "ownership.slots");
    for (const auto& kv : slots) {
      const auto cls = doc.as<ClassId>(kv.first, "ownership.slots class");
      doc.expect_seq(kv.second, "ownership.slots entry");
      for (const auto& pos : kv.second) {
        const auto p = doc.as<std::uint32_t>(pos, "slot position");
        if (p >= num_slots) throw doc.error(pos, "slot position outside the ring");
        owner[p] = cls;
      }
    }
  }
  return owner;
}

SenderConfig parse_sender(const Doc& doc, const YAML::Node& n) {
  doc.allow(n,
            {"id", "kind", "ring", "insert_mode", "release_delta_ns", "rt_capacity", "be_capacity", "clock_offset_ns",
             "ownership", "rt_flows", "be_flows"},
            "sender");
  SenderConfig s;
  const YAML::Node ring = n["ring"];
  if (!ring) throw doc.error(n, "missing required key 'ring' in sender");
  s.ring = parse_ring(doc, ring);
  const auto mode = doc.optional<std::string>(n, "insert_mode", "strict");
  if (mode == "strict") {
    s.mode = InsertMode::Strict;
  } else if (mode == "relaxed") {
    s.mode = InsertMode::Relaxed;
  } else {
    throw doc.error(n["insert_mode"], "insert_mode must be 'strict' or 'relaxed'");
  }
  s.policy.release_delta = doc.optional<Nanos>(n, "release_delta_ns", s.policy.release_delta);
  s.rt_capacity = doc.optional<std::size_t>(n, "rt_capacity", s.rt_capacity);
  s.be_capacity = doc.optional<std::size_t>(n, "be_capacity", s.be_capacity);
  s.clock_offset = doc.optional<Nanos>(n, "clock_offset_ns", s.clock_offset);
  if (const YAML::Node own = n["ownership"]) s.ownership = parse_ownership(doc, own, s.ring.num_slots);

  if (const YAML::Node flows = n["rt_flows"]) {
    doc.expect_seq(flows, "rt_flows");
    for (const auto& f : flows) {
      doc.expect_map(f, "rt flow");
      doc.allow(f, {"id", "class", "period_ns", "phase_ns", "payload", "destination", "submit_lead_ns", "count",
                    "late_seqs"},
                "rt flow");
      RtFlowConfig rt;
      rt.id = doc.required<FlowId>(f, "id", "rt flow");
      rt.traffic_class = doc.optional<ClassId>(f, "class", rt.traffic_class);
      rt.period = doc.required<Nanos>(f, "period_ns", "rt flow");
      rt.phase = doc.optional<Nanos>(f, "phase_ns", rt.phase);
      rt.payload = doc.optional<std::uint32_t>(f, "payload", rt.payload);
      rt.destination = doc.required<std::string>(f, "destination", "rt flow");
      rt.submit_lead = doc.optional<Nanos>(f, "submit_lead_ns", rt.submit_lead);
      rt.count = doc.optional<std::uint64_t>(f, "count", rt.count);
      rt.late_seqs = doc.optional<std::vector<std::uint64_t>>(f, "late_seqs", {});
      s.rt_flows.push_back(std::move(rt));
    }
  }
  if (const YAML::Node flows = n["be_flows"]) {
    doc.expect_seq(flows, "be_flows");
    for (const auto& f : flows) {
      doc.expect_map(f, "be flow");
      doc.allow(f, {"id", "class", "payload", "destination", "saturate", "interval_ns", "start_ns"}, "be flow");
      BeFlowConfig be;
      be.id = doc.required<FlowId>(f, "id", "be flow");
      be.traffic_class = doc.optional<ClassId>(f, "class", be.traffic_class);
      be.payload = doc.optional<std::uint32_t>(f, "payload", be.payload);
      be.destination = doc.required<std::string>(f, "destination", "be flow");
      be.saturate = doc.optional<bool>(f, "saturate", be.saturate);
      be.interval = doc.optional<Nanos>(f, "interval_ns", be.interval);
      be.start = doc.optional<Nanos>(f, "start_ns", be.start);
      s.be_flows.push_back(std::move(be));
    }
  }
  return s;
}

BridgeConfig parse_bridge(const Doc& doc, const YAML::Node& n) {
  doc.allow(n, {"id", "kind", "gates"}, "bridge");
  BridgeConfig b;
  if (const YAML::Node g = n["gates"]) {
    doc.expect_map(g, "gates");
    doc.allow(g, {"cycle_ns", "windows"}, "gates");
    b.gates.cycle = doc.required<Nanos>(g, "cycle_ns", "gates");
    if (const YAML::Node ws = g["windows"]) {
      doc.expect_seq(ws, "gates.windows");
      for (const auto& w : ws) {
        doc.expect_map(w, "gate window");
        doc.allow(w, {"flow", "offset_ns", "length_ns"}, "gate window");
        const auto flow = doc.required<FlowId>(w, "flow", "gate window");
        b.gates.windows[flow].push_back(
            GateWindow{doc.required<Nanos>(w, "offset_ns", "gate window"), doc.required<Nanos>(w, "length_ns", "gate window")});
      }
    }
  }
  return b;
}

PtpErrorModel parse_error_model(const Doc& doc, const YAML::Node& n) {
  doc.expect_map(n, "error_model");
  doc.allow(n, {"g_master_ns", "g_slave_ns", "j_master_in_ns", "j_master_out_ns", "j_slave_in_ns", "j_slave_out_ns"},
            "error_model");
  PtpErrorModel m;
  m.g_master = doc.optional<double>(n, "g_master_ns", 0);
  m.g_slave = doc.optional<double>(n, "g_slave_ns", 0);
  m.j_master_in = doc.optional<double>(n, "j_master_in_ns", 0);
  m.j_master_out = doc.optional<double>(n, "j_master_out_ns", 0);
  m.j_slave_in = doc.optional<double>(n, "j_slave_in_ns", 0);
  m.j_slave_out = doc.optional<double>(n, "j_slave_out_ns", 0);
  return m;
}

PtpConfig parse_ptp_fields(const Doc& doc, const YAML::Node& n) {
  PtpConfig p;
  p.sync_interval = doc.optional<Nanos>(n, "sync_interval_ns", p.sync_interval);
  p.network_delay = doc.optional<Nanos>(n, "network_delay_ns", p.network_delay);
  p.initial_freq_offset_ppm = doc.optional<double>(n, "initial_freq_offset_ppm", p.initial_freq_offset_ppm);
  p.initial_offset = doc.optional<Nanos>(n, "initial_offset_ns", p.initial_offset);
  p.filter_window = doc.optional<std::size_t>(n, "filter_window", p.filter_window);
  p.rounds = doc.optional<std::size_t>(n, "rounds", p.rounds);
  p.rng_seed = doc.optional<std::uint64_t>(n, "seed", p.rng_seed);
  return p;
}

std::string yesno(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<std::uint32_t> spread_positions(std::uint32_t num_slots, std::uint32_t count) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < count; ++i)
    out.push_back(static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) * num_slots / count));
  return out;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const Doc doc(source);
  const YAML::Node root = doc.load(text);
  doc.allow(root, {"name", "duration_ns", "seed", "nodes", "links", "routes", "measure_flows", "ptp"}, "scenario");
  Scenario s;
  s.name = doc.optional<std::string>(root, "name", s.name);
  s.duration = doc.required<Nanos>(root, "duration_ns", "scenario");
  s.rng_seed = doc.optional<std::uint64_t>(root, "seed", s.rng_seed);

  const YAML::Node nodes = root["nodes"];
  if (!nodes) throw doc.error(root, "missing required key 'nodes' in scenario");
  doc.expect_seq(nodes, "nodes");
  for (const auto& n : nodes) {
    doc.expect_map(n, "node");
    NodeConfig node;
    node.id = doc.required<std::string>(n, "id", "node");
    const auto kind = doc.required<std::string>(n, "kind", "node");
    if (kind == "sender") {
      node.role = parse_sender(doc, n);
    } else if (kind == "receiver") {
      doc.allow(n, {"id", "kind", "clock_offset_ns", "clock_drift_ppm"}, "receiver");
      ReceiverConfig r;
      r.clock_offset = doc.optional<Nanos>(n, "clock_offset_ns", r.clock_offset);
      r.clock_drift_ppm = doc.optional<double>(n, "clock_drift_ppm", r.clock_drift_ppm);
      node.role = r;
    } else if (kind == "bridge") {
      node.role = parse_bridge(doc, n);
    } else {
      throw doc.error(n["kind"], "node kind must be sender, receiver or bridge");
    }
    s.nodes.push_back(std::move(node));
  }

  const YAML::Node links = root["links"];
  if (!links) throw doc.error(root, "missing required key 'links' in scenario");
  doc.expect_seq(links, "links");
  for (const auto& l : links) {
    doc.expect_map(l, "link");
    doc.allow(l, {"a", "b", "propagation_ns", "line_rate_bps"}, "link");
    LinkConfig link;
    link.a = doc.required<std::string>(l, "a", "link");
    link.b = doc.required<std::string>(l, "b", "link");
    link.propagation = doc.optional<Nanos>(l, "propagation_ns", link.propagation);
    link.line_rate = doc.optional<std::uint64_t>(l, "line_rate_bps", link.line_rate);
    s.links.push_back(link);
  }

  if (const YAML::Node routes = root["routes"]) {
    doc.expect_seq(routes, "routes");
    for (const auto& r : routes) {
      doc.expect_map(r, "route");
      doc.allow(r, {"flow", "path"}, "route");
      s.routes.push_back(RouteConfig{doc.required<FlowId>(r, "flow", "route"),
                                     doc.required<std::vector<std::string>>(r, "path", "route")});
    }
  }
  s.measure_flows = doc.optional<std::vector<FlowId>>(root, "measure_flows", {});

  if (const YAML::Node ptp = root["ptp"]) {
    doc.expect_map(ptp, "ptp");
    doc.allow(ptp,
              {"grandmaster", "slaves", "filtered", "sync_interval_ns", "network_delay_ns", "initial_freq_offset_ppm",
               "initial_offset_ns", "filter_window", "rounds", "seed", "error_model"},
              "ptp");
    SyncConfig sync;
    sync.grandmaster = doc.required<std::string>(ptp, "grandmaster", "ptp");
    sync.slaves = doc.optional<std::vector<std::string>>(ptp, "slaves", {});
    sync.filtered = doc.optional<bool>(ptp, "filtered", true);
    sync.ptp = parse_ptp_fields(doc, ptp);
    if (!ptp["seed"]) sync.ptp.rng_seed = s.rng_seed;
    if (const YAML::Node m = ptp["error_model"]) sync.model = parse_error_model(doc, m);
    s.sync = sync;
  }

  return validated([&] {
    s.validate();
    return s;
  });
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path), path); }

PtpStudy parse_ptp_study(const std::string& text, const std::string& source) {
  const Doc doc(source);
  const YAML::Node root = doc.load(text);
  doc.allow(root,
            {"sync_interval_ns", "network_delay_ns", "initial_freq_offset_ppm", "initial_offset_ns", "filter_window",
             "rounds", "seed", "seeds", "filtering", "error_model"},
            "ptp study");
  PtpStudy study;
  study.ptp = parse_ptp_fields(doc, root);
  study.seeds = doc.optional<std::uint32_t>(root, "seeds", study.seeds);
  const auto filtering = doc.optional<std::string>(root, "filtering", "both");
  if (filtering == "both") {
    study.run_filtered = study.run_unfiltered = true;
  } else if (filtering == "filtered") {
    study.run_unfiltered = false;
  } else if (filtering == "unfiltered") {
    study.run_filtered = false;
  } else {
    throw doc.error(root["filtering"], "filtering must be both, filtered or unfiltered");
  }
  const YAML::Node m = root["error_model"];
  if (!m) throw doc.error(root, "missing required key 'error_model' in ptp study");
  study.model = parse_error_model(doc, m);
  return validated([&] {
    study.ptp.validate();
    study.model.validate();
    if (study.seeds == 0) throw std::invalid_argument("seeds must be at least 1");
    delta_drift(static_cast<double>(study.ptp.sync_interval), 1.0, study.model);
    return study;
  });
}

PtpStudy load_ptp_study(const std::string& path) { return parse_ptp_study(read_file(path), path); }

SweepParams parse_sweep(const std::string& text, const std::string& source) {
  const Doc doc(source);
  const YAML::Node root = doc.load(text);
  doc.allow(root,
            {"ring_size", "slot_us", "utilizations", "flow_counts", "period_min_us", "period_max_us", "period_step_us",
             "jitter_min_fraction", "jitter_max_fraction", "max_classes", "instances_per_point", "packet_size", "seed",
             "timeout_ms"},
            "sweep");
  SweepParams p;
  auto micros = [&](const char* key, Nanos fallback) {
    const YAML::Node n = root[key];
    if (!n) return fallback;
    try {
      return parse_us(doc.as<std::string>(n, key));
    } catch (const std::invalid_argument&) {
      throw doc.error(n, "bad microsecond value for '" + std::string(key) + "'");
    }
  };
  p.ring_size = doc.optional<std::uint32_t>(root, "ring_size", p.ring_size);
  p.slot = micros("slot_us", p.slot);
  p.utilizations = doc.optional<std::vector<double>>(root, "utilizations", p.utilizations);
  p.flow_counts = doc.optional<std::vector<std::uint32_t>>(root, "flow_counts", p.flow_counts);
  p.min_period = micros("period_min_us", p.min_period);
  p.max_period = micros("period_max_us", p.max_period);
  p.period_step = micros("period_step_us", p.period_step);
  p.jitter_min = doc.optional<double>(root, "jitter_min_fraction", p.jitter_min);
  p.jitter_max = doc.optional<double>(root, "jitter_max_fraction", p.jitter_max);
  p.max_classes = doc.optional<std::uint32_t>(root, "max_classes", p.max_classes);
  p.instances_per_point = doc.optional<std::uint32_t>(root, "instances_per_point", p.instances_per_point);
  p.packet_size = doc.optional<std::uint32_t>(root, "packet_size", p.packet_size);
  p.seed = doc.optional<std::uint64_t>(root, "seed", p.seed);
  p.timeout = std::chrono::milliseconds(doc.optional<std::int64_t>(root, "timeout_ms", p.timeout.count()));
  return validated([&] {
    p.validate();
    return p;
  });
}

SweepParams load_sweep(const std::string& path) { return parse_sweep(read_file(path), path); }

ProblemInstance parse_instance(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  try {
    return validated([&] { return read_instance(in); });
  } catch (const TextFormatError& e) {
    throw ParseError(source, e.line(), 1, e.what());
  }
}

ProblemInstance load_instance(const std::string& path) { return parse_instance(read_file(path), path); }

std::vector<std::string> describe(const Scenario& s) {
  std::vector<std::string> out;
  out.push_back("scenario: " + s.name);
  out.push_back("duration_ns: " + std::to_string(s.duration));
  out.push_back("seed: " + std::to_string(s.rng_seed));
  for (const auto& n : s.nodes) {
    if (const auto* snd = std::get_if<SenderConfig>(&n.role)) {
      const auto& r = snd->ring;
      out.push_back("node " + n.id + ": sender num_slots=" + std::to_string(r.num_slots) +
                    " slot_size=" + std::to_string(r.slot_size) + " batch_size=" + std::to_string(r.batch_size) +
                    " polling_period_ns=" + std::to_string(r.polling_period) +
                    " polling_overhead_ns=" + std::to_string(r.polling_overhead) +
                    " line_rate_bps=" + std::to_string(r.line_rate) +
                    " wire_overhead=" + std::to_string(r.wire_overhead) + " tau_ns=" + r.wire_time().to_string() +
                    " insert_mode=" + to_string(snd->mode) +
                    " release_delta_ns=" + std::to_string(snd->policy.release_delta) +
                    " rt_capacity=" + std::to_string(snd->rt_capacity) +
                    " be_capacity=" + std::to_string(snd->be_capacity));
      const Nanos poll = r.poll_interval();
      const Nanos budget = (r.wire_time() * static_cast<std::int64_t>(r.batch_size)).floor();
      if (poll > budget)
        out.push_back("warning: node " + n.id + " polls every " + std::to_string(poll) + " ns but a batch lasts " +
                      std::to_string(budget) + " ns; the wire will idle");
      if (!snd->rt_flows.empty() && snd->policy.release_delta < budget + poll)
        out.push_back("warning: node " + n.id + " release_delta is shorter than one batch plus a poll cycle; "
                      "RT packets may miss their window");
    } else if (const auto* rx = std::get_if<ReceiverConfig>(&n.role)) {
      out.push_back("node " + n.id + ": receiver clock_offset_ns=" + std::to_string(rx->clock_offset) +
                    " clock_drift_ppm=" + csv::format_double(rx->clock_drift_ppm));
    } else if (const auto* br = std::get_if<BridgeConfig>(&n.role)) {
      out.push_back("node " + n.id + ": bridge gate_cycle_ns=" + std::to_string(br->gates.cycle) +
                    " gated_flows=" + std::to_string(br->gates.windows.size()));
    }
  }
  if (s.sync) {
    const auto& p = s.sync->ptp;
    out.push_back("ptp: grandmaster=" + s.sync->grandmaster + " filtered=" + yesno(s.sync->filtered) +
                  " sync_interval_ns=" + std::to_string(p.sync_interval) +
                  " network_delay_ns=" + std::to_string(p.network_delay) +
                  " initial_freq_offset_ppm=" + csv::format_double(p.initial_freq_offset_ppm) +
                  " filter_window=" + std::to_string(p.filter_window) + " seed=" + std::to_string(p.rng_seed));
  }
  return out;
}

std::vector<std::string> describe(const PtpStudy& st) {
  const auto& p = st.ptp;
  const auto& m = st.model;
  return {
      "sync_interval_ns: " + std::to_string(p.sync_interval),
      "network_delay_ns: " + std::to_string(p.network_delay),
      "initial_freq_offset_ppm: " + csv::format_double(p.initial_freq_offset_ppm),
      "initial_offset_ns: " + std::to_string(p.initial_offset),
      "filter_window: " + std::to_string(p.filter_window),
      "rounds: " + std::to_string(p.rounds),
      "seed: " + std::to_string(p.rng_seed),
      "seeds: " + std::to_string(st.seeds),
      "filtering: " + std::string(st.run_filtered && st.run_unfiltered ? "both"
                                  : st.run_filtered                     ? "filtered"
                                                                        : "unfiltered"),
      "error_model: g_master_ns=" + csv::format_double(m.g_master) + " g_slave_ns=" + csv::format_double(m.g_slave) +
          " j_master_in_ns=" + csv::format_double(m.j_master_in) +
          " j_master_out_ns=" + csv::format_double(m.j_master_out) +
          " j_slave_in_ns=" + csv::format_double(m.j_slave_in) +
          " j_slave_out_ns=" + csv::format_double(m.j_slave_out),
      "delta_ts_ns: " + csv::format_double(delta_ts(m)),
      "delta_drift_ns: " + csv::format_double(delta_drift(static_cast<double>(p.sync_interval), 1.0, m)),
  };
}

std::vector<std::string> describe(const SweepParams& p) {
  std::string utils;
  for (double u : p.utilizations) utils += (utils.empty() ? "" : ",") + csv::format_double(u);
  std::string counts;
  for (auto c : p.flow_counts) counts += (counts.empty() ? "" : ",") + std::to_string(c);
  return {
      "ring_size: " + std::to_string(p.ring_size),
      "slot_us: " + format_us(p.slot),
      "utilizations: " + utils,
      "flow_counts: " + counts,
      "periods_us: " + format_us(p.min_period) + ".." + format_us(p.max_period) + " step " + format_us(p.period_step),
      "jitter_fraction: " + csv::format_double(p.jitter_min) + ".." + csv::format_double(p.jitter_max),
      "max_classes: " + std::to_string(p.max_classes),
      "instances_per_point: " + std::to_string(p.instances_per_point),
      "seed: " + std::to_string(p.seed),
      "timeout_ms: " + std::to_string(p.timeout.count()),
  };
}

}  // namespace slotnet::config
