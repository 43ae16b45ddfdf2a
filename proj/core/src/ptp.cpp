#include "slotnet/ptp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slotnet/ephc.hpp"

namespace slotnet {

void PtpErrorModel::validate() const {
  for (double v : {g_master, g_slave, j_master_in, j_master_out, j_slave_in, j_slave_out})
    if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("PTP error model terms must be finite and >= 0");
}

void PtpConfig::validate() const {
  if (sync_interval <= 0) throw std::invalid_argument("sync_interval must be positive");
  if (network_delay < 0) throw std::invalid_argument("network_delay must be non-negative");
  if (filter_window < 1) throw std::invalid_argument("filter_window must be at least 1");
  if (!std::isfinite(initial_freq_offset_ppm) || std::fabs(initial_freq_offset_ppm) >= 1e5)
    throw std::invalid_argument("initial_freq_offset_ppm out of range");
  if (3 * network_delay >= sync_interval) throw std::invalid_argument("sync_interval must exceed three network delays");
}

double compute_offset(double t1, double t2, double t3, double t4) { return ((t2 - t1) - (t4 - t3)) / 2.0; }

double estimate_freq_ratio(double t1, double t2, double t1_next, double t2_next) {
  if (t2_next == t2) throw DegenerateInterval("slave timestamps of consecutive syncs are equal");
  return (t1_next - t1) / (t2_next - t2);
}

double delta_ts(const PtpErrorModel& m) {
  return 0.5 * (m.g_master + m.g_slave + std::max(m.j_master_in + m.j_master_out, m.j_slave_in + m.j_slave_out));
}

double delta_drift(double interval, double rho_master, const PtpErrorModel& m) {
  const double slave = m.g_slave + m.j_slave_in;
  const double master = m.g_master + m.j_master_out;
  if (interval <= slave) throw DegenerateInterval("sync interval must exceed g_S + j_S_in");
  return interval * rho_master * std::max(slave / (interval - slave), master / (interval + slave));
}

double ma_filter(std::span<const double> history, std::size_t window) {
  if (history.empty()) throw std::invalid_argument("ma_filter needs at least one sample");
  if (window == 0) throw std::invalid_argument("ma_filter window must be positive");
  const std::size_t n = std::min(window, history.size());
  double sum = 0;
  for (std::size_t i = history.size() - n; i < history.size(); ++i) sum += history[i];
  return sum / static_cast<double>(n);
}

TimestampErrors draw_timestamp_errors(const PtpErrorModel& m, Rng& rng) {
  TimestampErrors e;
  e.e1 = rng.uniform(-0.5 * m.g_master, 0.5 * m.g_master + m.j_master_out);
  e.e2 = rng.uniform(-0.5 * m.g_slave, 0.5 * m.g_slave + m.j_slave_in);
  e.e3 = rng.uniform(-0.5 * m.g_slave, 0.5 * m.g_slave + m.j_slave_out);
  e.e4 = rng.uniform(-0.5 * m.g_master, 0.5 * m.g_master + m.j_master_in);
  return e;
}

double SyncTrace::mean_abs_drift(std::size_t from) const {
  if (from >= rounds.size()) return 0;
  double sum = 0;
  for (std::size_t i = from; i < rounds.size(); ++i) sum += std::fabs(rounds[i].drift_error);
  return sum / static_cast<double>(rounds.size() - from);
}

double SyncTrace::max_abs_drift(std::size_t from) const {
  double m = 0;
  for (std::size_t i = from; i < rounds.size(); ++i) m = std::max(m, std::fabs(rounds[i].drift_error));
  return m;
}

double SyncTrace::max_abs_offset_error() const {
  double m = 0;
  for (const auto& r : rounds) m = std::max(m, std::fabs(r.offset_error));
  return m;
}

double SyncTrace::offset_at(Nanos t) const {
  auto it = std::upper_bound(rounds.begin(), rounds.end(), t,
                             [](Nanos v, const SyncRound& r) { return v < r.apply_time; });
  if (it == rounds.begin()) return initial_offset + initial_rate_error * static_cast<double>(t);
  const SyncRound& r = *std::prev(it);
  return r.residual_offset + r.rate_error * static_cast<double>(t - r.apply_time);
}

namespace {

double offset_now(const EphcClock& slave, Nanos t) { return (slave.now_precise() - PreciseNs::from_ns(t)).to_double(); }

void advance_to(EphcClock& slave, Nanos t) {
  // The slave counter ticks once per true nanosecond.
  slave.tick(static_cast<std::uint64_t>(t) - slave.cycle_count());
}

double rate_error(const EphcClock& slave) {
  return static_cast<double>(slave.cycle_period().raw() - PreciseNs::kUnitsPerNs) /
         static_cast<double>(PreciseNs::kUnitsPerNs);
}

}  // namespace

SyncTrace run_sync_sim(const PtpConfig& config, const PtpErrorModel& model, bool filtered) {
  config.validate();
  model.validate();

  SyncTrace trace;
  trace.filtered = filtered;
  trace.delta_ts = delta_ts(model);
  trace.delta_drift = delta_drift(static_cast<double>(config.sync_interval), 1.0, model);
  trace.rounds.reserve(config.rounds);

  const PreciseNs free_period = PreciseNs::from_double(1.0 + config.initial_freq_offset_ppm * 1e-6);
  EphcClock slave(free_period, PreciseNs::from_ns(config.initial_offset));
  trace.initial_offset = static_cast<double>(config.initial_offset);
  trace.initial_rate_error = rate_error(slave);

  Rng rng(config.rng_seed);
  std::vector<double> ratios;
  double prev_t1 = 0;
  double prev_t2_free = 0;
  double prev_residual = trace.initial_offset;
  std::size_t streak = 0;

  const Nanos d = config.network_delay;
  for (std::size_t k = 0; k < config.rounds; ++k) {
    SyncRound r;
    r.round = k;
    const Nanos T1 = static_cast<Nanos>(k) * config.sync_interval;
    const Nanos T2 = T1 + d;
    const Nanos T3 = T2;
    const Nanos T4 = T3 + d;
    const Nanos Ta = T4 + d;

    const TimestampErrors e = draw_timestamp_errors(model, rng);
    advance_to(slave, T2);
    const double x2 = offset_now(slave, T2);
    const double x3 = x2;
    r.t1 = static_cast<double>(T1) + e.e1;
    r.t2 = static_cast<double>(T2) + x2 + e.e2;
    r.t3 = static_cast<double>(T3) + x3 + e.e3;
    r.t4 = static_cast<double>(T4) + e.e4;
    r.offset_estimate = compute_offset(r.t1, r.t2, r.t3, r.t4);
    r.true_offset = (x2 + x3) / 2.0;
    r.offset_error = r.offset_estimate - r.true_offset;

    // Frequency is estimated against the slave's free-running timebase so each
    // estimate is absolute rather than relative to the previous correction.
    const double t2_free = (free_period * static_cast<std::uint64_t>(T2)).to_double() + e.e2;
    std::optional<double> applied;
    if (k > 0) {
      ratios.push_back(estimate_freq_ratio(prev_t1, prev_t2_free, r.t1, t2_free));
      applied = filtered ? ma_filter(ratios, config.filter_window) : ratios.back();
      r.freq_ratio_estimate = *applied;
    }
    prev_t1 = r.t1;
    prev_t2_free = t2_free;

    advance_to(slave, Ta);
    r.apply_time = Ta;
    const double before = offset_now(slave, Ta);
    r.drift_error = before - prev_residual;
    if (applied) {
      const PreciseNs target = free_period.scaled(Rational::from_double(*applied));
      const int128 cur = slave.cycle_period().raw();
      slave.adjust_rate(Rational(static_cast<std::int64_t>(target.raw()), static_cast<std::int64_t>(cur)));
    }
    slave.adjust_offset(-PreciseNs::from_double(r.offset_estimate));
    r.residual_offset = offset_now(slave, Ta);
    r.rate_error = rate_error(slave);
    prev_residual = r.residual_offset;

    streak = std::fabs(r.residual_offset) <= 2.0 * trace.delta_ts ? streak + 1 : 0;
    if (!trace.converged_round && streak >= 10) trace.converged_round = k;
    trace.rounds.push_back(r);
  }
  return trace;
}

}  // namespace slotnet
