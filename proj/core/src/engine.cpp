#include "slotnet/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <queue>
#include <set>

namespace slotnet {

// ---------------------------------------------------------------- gates

void GateSchedule::validate() const {
  if (windows.empty()) return;
  if (cycle <= 0) throw ScenarioError("gate cycle must be positive");
  for (const auto& [flow, list] : windows) {
    for (const auto& w : list) {
      if (w.length <= 0) throw ScenarioError("gate window for flow " + std::to_string(flow) + " has no length");
      if (w.offset < 0 || w.offset >= cycle)
        throw ScenarioError("gate window for flow " + std::to_string(flow) + " starts outside the cycle");
    }
  }
}

GateSchedule::Decision GateSchedule::decide(FlowId flow, Nanos arrival) const {
  auto it = windows.find(flow);
  if (it == windows.end() || it->second.empty()) return {arrival, false};
  const Nanos base = arrival - arrival % cycle;
  const Nanos phase = arrival - base;
  std::optional<Nanos> next;
  for (const auto& w : it->second) {
    if (phase >= w.offset && phase < w.offset + w.length) return {arrival, false};
    // Windows may spill past the cycle end into the next cycle.
    if (w.offset + w.length > cycle && phase < w.offset + w.length - cycle) return {arrival, false};
    const Nanos start = w.offset > phase ? base + w.offset : base + cycle + w.offset;
    if (!next || start < *next) next = start;
  }
  return {*next, true};
}

GateSchedule::Decision step_gate_bridge(const BridgeConfig& bridge, FlowId flow, Nanos now) {
  return bridge.gates.decide(flow, now);
}

// ---------------------------------------------------------------- statistics

Dispersion pdv(std::span<const Nanos> delays) {
  if (delays.size() < 2) throw InsufficientSamples("PDV needs at least two delay samples");
  long double sum = 0;
  for (Nanos d : delays) sum += static_cast<long double>(d);
  const long double mean = sum / static_cast<long double>(delays.size());
  long double sq = 0;
  long double max_dev = 0;
  for (Nanos d : delays) {
    const long double dev = static_cast<long double>(d) - mean;
    sq += dev * dev;
    max_dev = std::max(max_dev, std::fabs(dev));
  }
  return {static_cast<double>(std::sqrt(sq / static_cast<long double>(delays.size()))), static_cast<double>(max_dev)};
}

namespace {

Dispersion dispersion_of(const std::vector<Nanos>& dev) {
  Dispersion out;
  long double sum = 0;
  for (Nanos d : dev) sum += static_cast<long double>(d);
  const long double mean = sum / static_cast<long double>(dev.size());
  long double sq = 0;
  long double max_abs = 0;
  for (Nanos d : dev) {
    const long double x = static_cast<long double>(d) - mean;
    sq += x * x;
    max_abs = std::max(max_abs, std::fabs(static_cast<long double>(d)));
  }
  out.stddev = static_cast<double>(std::sqrt(sq / static_cast<long double>(dev.size())));
  out.max_abs_dev = static_cast<double>(max_abs);
  return out;
}

}  // namespace

Dispersion inter_arrival_jitter(std::span<const Nanos> arrivals, Nanos nominal_period) {
  if (arrivals.size() < 2) throw InsufficientSamples("jitter needs at least two arrivals");
  std::vector<Nanos> dev;
  dev.reserve(arrivals.size() - 1);
  for (std::size_t k = 1; k < arrivals.size(); ++k) dev.push_back(arrivals[k] - arrivals[k - 1] - nominal_period);
  return dispersion_of(dev);
}

Dispersion inter_arrival_jitter(std::span<const Nanos> arrivals, std::span<const std::uint64_t> seqs,
                                Nanos nominal_period) {
  if (arrivals.size() != seqs.size()) throw std::invalid_argument("arrival and sequence series differ in length");
  if (arrivals.size() < 2) throw InsufficientSamples("jitter needs at least two arrivals");
  std::vector<Nanos> dev;
  dev.reserve(arrivals.size() - 1);
  for (std::size_t k = 1; k < arrivals.size(); ++k) {
    const auto gap = static_cast<Nanos>(seqs[k] - seqs[k - 1]);
    dev.push_back(arrivals[k] - arrivals[k - 1] - gap * nominal_period);
  }
  return dispersion_of(dev);
}

// ---------------------------------------------------------------- validation

namespace {

struct Topology {
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;  // (neighbor, link)

  explicit Topology(const Scenario& s) {
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      if (s.nodes[i].id.empty()) throw ScenarioError("node ids must not be empty");
      if (!index.emplace(s.nodes[i].id, i).second) throw ScenarioError("duplicate node id '" + s.nodes[i].id + "'");
    }
    adj.resize(s.nodes.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t l = 0; l < s.links.size(); ++l) {
      const auto& link = s.links[l];
      const std::size_t a = node(link.a);
      const std::size_t b = node(link.b);
      if (a == b) throw ScenarioError("link from '" + link.a + "' to itself");
      if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
        throw ScenarioError("duplicate link between '" + link.a + "' and '" + link.b + "'");
      if (link.propagation < 0) throw ScenarioError("link propagation delay must be non-negative");
      if (link.line_rate == 0) throw ScenarioError("link line rate must be positive");
      adj[a].emplace_back(b, l);
      adj[b].emplace_back(a, l);
    }
  }

  std::size_t node(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw ScenarioError("unknown node '" + id + "'");
    return it->second;
  }

  std::optional<std::size_t> link_between(std::size_t a, std::size_t b) const {
    for (auto [n, l] : adj[a])
      if (n == b) return l;
    return std::nullopt;
  }
};

template <class T>
const T* role_of(const NodeConfig& n) {
  return std::get_if<T>(&n.role);
}

struct FlowRef {
  std::size_t sender;
  const RtFlowConfig* rt = nullptr;
  const BeFlowConfig* be = nullptr;
  const std::string& destination() const { return rt ? rt->destination : be->destination; }
};

std::map<FlowId, FlowRef> collect_flows(const Scenario& s) {
  std::map<FlowId, FlowRef> flows;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto* snd = role_of<SenderConfig>(s.nodes[i]);
    if (!snd) continue;
    for (const auto& f : snd->rt_flows)
      if (!flows.emplace(f.id, FlowRef{i, &f, nullptr}).second)
        throw ScenarioError("duplicate flow id " + std::to_string(f.id));
    for (const auto& f : snd->be_flows)
      if (!flows.emplace(f.id, FlowRef{i, nullptr, &f}).second)
        throw ScenarioError("duplicate flow id " + std::to_string(f.id));
  }
  return flows;
}

// Shortest path from sender to destination, relaying only through bridges.
std::vector<std::size_t> find_path(const Scenario& s, const Topology& topo, std::size_t from, std::size_t to) {
  std::vector<std::optional<std::size_t>> prev(s.nodes.size());
  std::vector<bool> seen(s.nodes.size(), false);
  std::deque<std::size_t> q{from};
  seen[from] = true;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    if (u == to) break;
    if (u != from && !role_of<BridgeConfig>(s.nodes[u])) continue;
    for (auto [v, l] : topo.adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      prev[v] = u;
      q.push_back(v);
    }
  }
  if (!seen[to]) return {};
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(*prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::map<FlowId, std::vector<std::size_t>> resolve_routes(const Scenario& s, const Topology& topo,
                                                          const std::map<FlowId, FlowRef>& flows) {
  std::map<FlowId, std::vector<std::size_t>> routes;
  for (const auto& r : s.routes) {
    auto it = flows.find(r.flow);
    if (it == flows.end()) throw ScenarioError("route for unknown flow " + std::to_string(r.flow));
    if (r.path.size() < 2) throw ScenarioError("route for flow " + std::to_string(r.flow) + " is too short");
    std::vector<std::size_t> path;
    for (const auto& id : r.path) path.push_back(topo.node(id));
    if (path.front() != it->second.sender)
      throw ScenarioError("route for flow " + std::to_string(r.flow) + " must start at its sender");
    if (path.back() != topo.node(it->second.destination()))
      throw ScenarioError("route for flow " + std::to_string(r.flow) + " must end at its destination");
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
      if (!topo.link_between(path[h], path[h + 1]))
        throw ScenarioError("route for flow " + std::to_string(r.flow) + " uses a missing link");
      if (h > 0 && !role_of<BridgeConfig>(s.nodes[path[h]]))
        throw ScenarioError("route for flow " + std::to_string(r.flow) + " relays through a non-bridge");
    }
    if (!routes.emplace(r.flow, std::move(path)).second)
      throw ScenarioError("duplicate route for flow " + std::to_string(r.flow));
  }
  for (const auto& [id, ref] : flows) {
    if (routes.count(id)) continue;
    auto path = find_path(s, topo, ref.sender, topo.node(ref.destination()));
    if (path.empty()) throw ScenarioError("no path for flow " + std::to_string(id));
    routes.emplace(id, std::move(path));
  }
  return routes;
}

}  // namespace

void Scenario::validate() const {
  if (nodes.empty()) throw ScenarioError("scenario has no nodes");
  if (duration <= 0) throw ScenarioError("duration must be positive");
  const Topology topo(*this);

  // Connectivity.
  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> q{0};
  seen[0] = true;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (auto [v, l] : topo.adj[u])
      if (!seen[v]) {
        seen[v] = true;
        q.push_back(v);
      }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!seen[i]) throw ScenarioError("node '" + nodes[i].id + "' is not connected");

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (const auto* snd = role_of<SenderConfig>(n)) {
      try {
        snd->ring.validate();
      } catch (const InvalidConfig& e) {
        throw ScenarioError("sender '" + n.id + "': " + e.what());
      }
      if (topo.adj[i].size() != 1) throw ScenarioError("sender '" + n.id + "' needs exactly one link");
      if (links[topo.adj[i][0].second].line_rate != snd->ring.line_rate)
        throw ScenarioError("sender '" + n.id + "': link rate differs from the ring line rate");
      if (!snd->ownership.empty() && snd->ownership.size() != snd->ring.num_slots)
        throw ScenarioError("sender '" + n.id + "': ownership must list every ring slot");
      if (snd->policy.release_delta < 0) throw ScenarioError("sender '" + n.id + "': release_delta must be >= 0");
      if (snd->rt_capacity == 0 || snd->be_capacity == 0)
        throw ScenarioError("sender '" + n.id + "': queue capacities must be positive");
      for (const auto& f : snd->rt_flows) {
        if (f.period <= 0) throw ScenarioError("flow " + std::to_string(f.id) + ": period must be positive");
        if (f.phase < 0) throw ScenarioError("flow " + std::to_string(f.id) + ": phase must be >= 0");
        if (f.submit_lead < 0) throw ScenarioError("flow " + std::to_string(f.id) + ": submit_lead must be >= 0");
        if (f.payload == 0 || f.payload > snd->ring.slot_size)
          throw ScenarioError("flow " + std::to_string(f.id) + ": payload must fit the slot");
      }
      for (const auto& f : snd->be_flows) {
        if (f.payload == 0 || f.payload > snd->ring.slot_size)
          throw ScenarioError("flow " + std::to_string(f.id) + ": payload must fit the slot");
        if (!f.saturate && f.interval <= 0)
          throw ScenarioError("flow " + std::to_string(f.id) + ": non-saturating BE flows need an interval");
      }
    } else if (const auto* br = role_of<BridgeConfig>(n)) {
      br->gates.validate();
    }
  }

  const auto flows = collect_flows(*this);
  for (const auto& [id, ref] : flows) {
    const std::size_t dst = topo.node(ref.destination());
    if (!role_of<ReceiverConfig>(nodes[dst]))
      throw ScenarioError("flow " + std::to_string(id) + ": destination '" + ref.destination() + "' is not a receiver");
  }
  resolve_routes(*this, topo, flows);

  if (sync) {
    topo.node(sync->grandmaster);
    for (const auto& s : sync->slaves)
      if (!role_of<ReceiverConfig>(nodes[topo.node(s)]))
        throw ScenarioError("sync slave '" + s + "' must be a receiver");
    try {
      sync->ptp.validate();
      sync->model.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string("sync: ") + e.what());
    }
  }
}

// ---------------------------------------------------------------- engine

namespace {

struct Frame {
  FlowId flow = 0;
  std::uint64_t seq = 0;
  std::uint32_t payload = 0;
  std::uint32_t wire_bytes = 0;
  Nanos send_time = 0;
  bool missed = false;
  std::size_t hop = 0;  // index of the current node in the route
};

enum class EventKind { SlotBoundary, Poll, RtSubmit, BeSubmit, Arrival };

struct Event {
  Nanos time = 0;
  std::uint64_t order = 0;
  EventKind kind = EventKind::SlotBoundary;
  std::size_t node = 0;
  std::size_t flow = 0;     // index into the sender's flow list
  std::uint64_t seq = 0;
  Frame frame;
};

Event make_event(Nanos time, EventKind kind, std::size_t node, std::size_t flow = 0, std::uint64_t seq = 0) {
  Event e;
  e.time = time;
  e.kind = kind;
  e.node = node;
  e.flow = flow;
  e.seq = seq;
  return e;
}

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.order > b.order;
  }
};

struct SenderState {
  const SenderConfig* cfg = nullptr;
  DmaRing ring;
  EphcClock clock;
  RtQueue rt;
  BeQueue be;
  std::size_t link = 0;
  std::uint64_t boundary = 0;
  bool busy = false;
  Nanos busy_start = 0;
  std::vector<std::uint64_t> be_next_seq;

  SenderState(const SenderConfig& c, std::size_t l)
      : cfg(&c),
        ring(c.ring, c.ownership),
        clock(c.ring.wire_time(), PreciseNs::from_ns(c.clock_offset)),
        rt(c.rt_capacity),
        be(c.be_capacity),
        link(l),
        be_next_seq(c.be_flows.size(), 0) {}
};

class Engine {
 public:
  explicit Engine(const Scenario& s) : s_(s), topo_(s) {
    flows_ = collect_flows(s);
    routes_ = resolve_routes(s, topo_, flows_);
    port_free_.assign(s.links.size(), {0, 0});
    report_.duration = s.duration;
    stats_.resize(s.nodes.size());
    senders_.resize(s.nodes.size());
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      stats_[i].node = s.nodes[i].id;
      if (const auto* snd = role_of<SenderConfig>(s.nodes[i]))
        senders_[i].emplace(*snd, topo_.adj[i][0].second);
    }
    for (const auto& [id, ref] : flows_) {
      FlowSummary fs;
      fs.flow = id;
      fs.real_time = ref.rt != nullptr;
      fs.traffic_class = ref.rt ? ref.rt->traffic_class : ref.be->traffic_class;
      report_.flows.emplace(id, fs);
    }
    measure_all_ = s.measure_flows.empty();
    measured_.insert(s.measure_flows.begin(), s.measure_flows.end());

    if (s.sync) {
      PtpConfig ptp = s.sync->ptp;
      const Nanos covered = ptp.sync_interval * static_cast<Nanos>(ptp.rounds);
      if (covered < s.duration)
        ptp.rounds = static_cast<std::size_t>(s.duration / ptp.sync_interval + 1);
      trace_ = run_sync_sim(ptp, s.sync->model, s.sync->filtered);
      for (const auto& id : s.sync->slaves) slaves_.insert(topo_.node(id));
      report_.sync = trace_->rounds;
    }
  }

  MetricsReport run() {
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      if (!senders_[i]) continue;
      SenderState& st = *senders_[i];
      push(make_event(0, EventKind::SlotBoundary, i));
      if (st.cfg->ring.poll_interval() > 0) push(make_event(0, EventKind::Poll, i));
      schedule_submissions(i, st);
    }
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::SlotBoundary: on_boundary(ev.node); break;
        case EventKind::Poll: on_poll(ev.node); break;
        case EventKind::RtSubmit: on_rt_submit(ev); break;
        case EventKind::BeSubmit: on_be_submit(ev); break;
        case EventKind::Arrival: on_arrival(ev); break;
      }
    }
    finish();
    return std::move(report_);
  }

 private:
  void push(Event ev) {
    if (ev.time > s_.duration) return;
    ev.order = order_++;
    queue_.push(std::move(ev));
  }

  FlowSummary& summary(FlowId id) { return report_.flows.at(id); }

  void schedule_submissions(std::size_t node, SenderState& st) {
    const auto& cfg = *st.cfg;
    const Nanos slot = cfg.ring.wire_time().round();
    for (std::size_t f = 0; f < cfg.rt_flows.size(); ++f) {
      const auto& flow = cfg.rt_flows[f];
      const std::set<std::uint64_t> late(flow.late_seqs.begin(), flow.late_seqs.end());
      for (std::uint64_t k = 0; flow.count == 0 || k < flow.count; ++k) {
        const Nanos sched = flow.phase + static_cast<Nanos>(k) * flow.period;
        const Nanos true_sched = sched - cfg.clock_offset;
        // A late packet reaches the queue one slot after its last insertion chance.
        const Nanos at = late.count(k) ? true_sched - static_cast<Nanos>(cfg.ring.batch_size - 1) * slot + 1
                                       : true_sched - flow.submit_lead;
        if (at > s_.duration) break;
        push(make_event(std::max<Nanos>(at, 0), EventKind::RtSubmit, node, f, k));
      }
    }
    for (std::size_t f = 0; f < cfg.be_flows.size(); ++f)
      if (!cfg.be_flows[f].saturate) push(make_event(cfg.be_flows[f].start, EventKind::BeSubmit, node, f, 0));
  }

  void on_rt_submit(const Event& ev) {
    SenderState& st = *senders_[ev.node];
    const auto& flow = st.cfg->rt_flows[ev.flow];
    OutboundPacket pkt;
    pkt.flow_id = flow.id;
    pkt.traffic_class = flow.traffic_class;
    pkt.payload_len = flow.payload;
    pkt.scheduled_time = flow.phase + static_cast<Nanos>(ev.seq) * flow.period;
    pkt.seq = ev.seq;
    FlowSummary& fs = summary(flow.id);
    ++fs.enqueued;
    if (st.rt.push(pkt) == EnqueueResult::QueueFull) ++fs.drops["queue_full"];
  }

  void enqueue_be(SenderState& st, std::size_t f) {
    const auto& flow = st.cfg->be_flows[f];
    OutboundPacket pkt;
    pkt.flow_id = flow.id;
    pkt.traffic_class = flow.traffic_class;
    pkt.payload_len = flow.payload;
    pkt.seq = st.be_next_seq[f]++;
    FlowSummary& fs = summary(flow.id);
    ++fs.enqueued;
    if (st.be.push(pkt) == EnqueueResult::QueueFull) ++fs.drops["queue_full"];
  }

  void on_be_submit(const Event& ev) {
    SenderState& st = *senders_[ev.node];
    enqueue_be(st, ev.flow);
    push(make_event(now_ + st.cfg->be_flows[ev.flow].interval, EventKind::BeSubmit, ev.node, ev.flow, 0));
  }

  void do_poll(std::size_t node) {
    SenderState& st = *senders_[node];
    ++stats_[node].polls;
    st.ring.poll_cycle();

    std::vector<std::size_t> saturating;
    for (std::size_t f = 0; f < st.cfg->be_flows.size(); ++f)
      if (st.cfg->be_flows[f].saturate) saturating.push_back(f);
    const std::size_t target = std::min<std::size_t>(st.cfg->ring.num_slots, st.be.capacity());
    while (!saturating.empty() && st.be.size() < target)
      for (std::size_t f : saturating) enqueue_be(st, f);

    const ServiceReport rep = service(st.rt, st.be, st.ring, st.clock, st.cfg->policy, st.cfg->mode);
    for (const auto& d : rep.rt_drops) ++summary(d.flow_id).drops[to_string(d.cause)];
    for (const auto& d : rep.be_drops) ++summary(d.flow_id).drops[to_string(d.cause)];
  }

  void on_poll(std::size_t node) {
    SenderState& st = *senders_[node];
    do_poll(node);
    push(make_event(now_ + st.cfg->ring.poll_interval(), EventKind::Poll, node));
  }

  void on_boundary(std::size_t node) {
    SenderState& st = *senders_[node];
    if (st.busy) {
      const auto recs = st.ring.nic_consume(1);
      st.clock.tick(1);
      transmit(node, st, recs.front());
      st.busy = false;
    }
    if (st.cfg->ring.poll_interval() == 0) do_poll(node);
    if (st.ring.outstanding() > 0) {
      st.busy = true;
      st.busy_start = now_;
    } else {
      ++stats_[node].idle_slots;
    }
    ++st.boundary;
    push(make_event((st.cfg->ring.wire_time() * st.boundary).round(), EventKind::SlotBoundary, node));
  }

  void transmit(std::size_t node, SenderState& st, const TransmittedRecord& rec) {
    ++stats_[node].slots_sent;
    const LinkConfig& link = s_.links[st.link];
    const std::size_t peer = topo_.adj[node][0].first;
    const Nanos arrival = now_ + link.propagation;
    if (!rec.crc_valid) {
      ++stats_[node].placeholders_sent;
      if (arrival <= s_.duration) ++stats_[peer].crc_dropped;
      return;
    }
    Frame fr;
    fr.flow = *rec.flow_id;
    fr.seq = rec.seq;
    fr.payload = rec.payload_len;
    fr.wire_bytes = st.cfg->ring.slot_size + st.cfg->ring.wire_overhead;
    fr.send_time = rec.scheduled_time ? *rec.scheduled_time : st.busy_start;
    fr.hop = 1;
    ++summary(fr.flow).sent;
    Event ev = make_event(arrival, EventKind::Arrival, peer);
    ev.frame = fr;
    push(std::move(ev));
  }

  void on_arrival(Event& ev) {
    Frame& fr = ev.frame;
    const auto& route = routes_.at(fr.flow);
    const std::size_t node = ev.node;
    if (const auto* br = role_of<BridgeConfig>(s_.nodes[node])) {
      const auto decision = step_gate_bridge(*br, fr.flow, now_);
      if (decision.miss) {
        fr.missed = true;
        ++stats_[node].gate_misses;
      }
      const std::size_t next = route[fr.hop + 1];
      const std::size_t l = *topo_.link_between(node, next);
      const LinkConfig& link = s_.links[l];
      auto& free_at = port_free_[l][node == topo_.node(link.a) ? 0 : 1];
      const Nanos start = std::max(decision.forward_time, free_at);
      const Nanos ser = PreciseNs::from_fraction(static_cast<int128>(fr.wire_bytes) * 8 * 1'000'000'000,
                                                 link.line_rate)
                            .round();
      free_at = start + ser;
      fr.hop += 1;
      Event out = make_event(start + ser + link.propagation, EventKind::Arrival, next);
      out.frame = fr;
      push(std::move(out));
      return;
    }
    FlowSummary& fs = summary(fr.flow);
    if (fr.missed) {
      ++fs.gate_missed;
      return;
    }
    ++fs.received;
    fs.goodput_bps += static_cast<double>(fr.payload) * 8.0;
    if (!measure_all_ && !measured_.count(fr.flow)) return;
    report_.packets.push_back(PacketRecord{fr.flow, fr.seq, fr.send_time, local_time(node, now_)});
  }

  Nanos local_time(std::size_t node, Nanos t) const {
    const auto& rx = std::get<ReceiverConfig>(s_.nodes[node].role);
    long double local = static_cast<long double>(t) + static_cast<long double>(rx.clock_offset) +
                        static_cast<long double>(rx.clock_drift_ppm) * 1e-6L * static_cast<long double>(t);
    if (trace_ && slaves_.count(node)) local += static_cast<long double>(trace_->offset_at(t));
    return static_cast<Nanos>(std::llround(local));
  }

  void finish() {
    const double seconds = static_cast<double>(s_.duration) / 1e9;
    std::map<FlowId, std::vector<const PacketRecord*>> per_flow;
    for (const auto& p : report_.packets) per_flow[p.flow].push_back(&p);
    for (auto& [id, fs] : report_.flows) {
      fs.in_flight = fs.sent - fs.received - fs.gate_missed - fs.crc_dropped;
      fs.goodput_bps /= seconds;
      report_.class_goodput_bps[fs.traffic_class] += fs.goodput_bps;
      auto it = per_flow.find(id);
      if (it == per_flow.end() || it->second.empty()) continue;
      std::vector<Nanos> delays;
      std::vector<Nanos> arrivals;
      std::vector<std::uint64_t> seqs;
      long double sum = 0;
      for (const PacketRecord* p : it->second) {
        delays.push_back(p->delay());
        arrivals.push_back(p->recv_time);
        seqs.push_back(p->seq);
        sum += static_cast<long double>(p->delay());
      }
      fs.mean_delay = static_cast<double>(sum / static_cast<long double>(delays.size()));
      if (delays.size() >= 2) {
        fs.pdv = pdv(delays);
        const auto& ref = flows_.at(id);
        if (ref.rt) fs.jitter = inter_arrival_jitter(arrivals, seqs, ref.rt->period);
      }
    }
    report_.nodes = stats_;
  }

  const Scenario& s_;
  Topology topo_;
  std::map<FlowId, FlowRef> flows_;
  std::map<FlowId, std::vector<std::size_t>> routes_;
  std::vector<std::optional<SenderState>> senders_;
  std::vector<std::array<Nanos, 2>> port_free_;
  std::vector<NodeStats> stats_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t order_ = 0;
  Nanos now_ = 0;
  bool measure_all_ = true;
  std::set<FlowId> measured_;
  std::optional<SyncTrace> trace_;
  std::set<std::size_t> slaves_;
  MetricsReport report_;
};

}  // namespace

MetricsReport run(const Scenario& scenario) {
  scenario.validate();
  Engine engine(scenario);
  return engine.run();
}

}  // namespace slotnet
