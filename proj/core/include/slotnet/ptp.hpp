#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "slotnet/random.hpp"
#include "slotnet/time.hpp"

namespace slotnet {

class DegenerateInterval : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Clock granularities and worst-case timestamp jitter, all in ns.
struct PtpErrorModel {
  double g_master = 0;
  double g_slave = 0;
  double j_master_in = 0;
  double j_master_out = 0;
  double j_slave_in = 0;
  double j_slave_out = 0;

  void validate() const;
};

struct PtpConfig {
  Nanos sync_interval = 100'000'000;
  Nanos network_delay = 10'000;
  double initial_freq_offset_ppm = 1.0;  // positive: slave runs fast
  Nanos initial_offset = 0;              // slave minus master at t = 0
  std::size_t filter_window = 10;
  std::size_t rounds = 1000;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Timestamp errors of one exchange (sync tx, sync rx, delay_req tx, delay_req rx).
struct TimestampErrors {
  double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
};

double compute_offset(double t1, double t2, double t3, double t4);

/// (t1_next - t1) / (t2_next - t2). Throws DegenerateInterval if t2_next == t2.
double estimate_freq_ratio(double t1, double t2, double t1_next, double t2_next);

/// Worst-case offset error of one two-way exchange.
double delta_ts(const PtpErrorModel& model);

/// Worst-case drift accumulated over one sync interval.
/// Throws DegenerateInterval if interval <= g_slave + j_slave_in.
double delta_drift(double interval, double rho_master, const PtpErrorModel& model);

/// Mean of the last min(window, size) entries. Throws on empty input.
double ma_filter(std::span<const double> history, std::size_t window);

/// One draw from the per-timestamp uniform error ranges.
TimestampErrors draw_timestamp_errors(const PtpErrorModel& model, Rng& rng);

/// Error the four timestamp errors induce in compute_offset.
inline double offset_calc_error(const TimestampErrors& e) { return ((e.e2 - e.e1) - (e.e4 - e.e3)) / 2.0; }

struct SyncRound {
  std::size_t round = 0;
  double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
  double offset_estimate = 0;
  double freq_ratio_estimate = 1.0;  // ratio applied this round (1 before the first estimate)
  double true_offset = 0;            // slave - master at the exchange, before correction
  double offset_error = 0;           // offset_estimate - true_offset
  double drift_error = 0;            // offset gained since the previous correction
  double residual_offset = 0;        // slave - master right after this correction
  double rate_error = 0;             // slave rate - 1 after this correction
  Nanos apply_time = 0;              // master time at which the correction lands
};

struct SyncTrace {
  bool filtered = false;
  double initial_offset = 0;
  double initial_rate_error = 0;
  double delta_ts = 0;
  double delta_drift = 0;
  std::optional<std::size_t> converged_round;
  std::vector<SyncRound> rounds;

  double mean_abs_drift(std::size_t from = 0) const;
  double max_abs_drift(std::size_t from = 0) const;
  double max_abs_offset_error() const;
  /// Slave-minus-master offset at master time t, from the correction history.
  double offset_at(Nanos t) const;
};

/// Master/slave exchange loop with a free-running ideal master and a slave
/// EPHC whose period starts off by initial_freq_offset_ppm.
SyncTrace run_sync_sim(const PtpConfig& config, const PtpErrorModel& model, bool filtered);

}  // namespace slotnet
