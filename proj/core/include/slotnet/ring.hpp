#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "slotnet/time.hpp"

namespace slotnet {

using ClassId = std::uint16_t;
using FlowId = std::uint32_t;

/// Traffic class used for best-effort packets and unreserved slots.
inline constexpr ClassId kBestEffortClass = 0;

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RingUnderrun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RingConfig {
  std::uint32_t num_slots = 32;
  std::uint32_t slot_size = 1500;  // bytes
  std::uint32_t batch_size = 1;
  Nanos polling_period = 0;
  Nanos polling_overhead = 0;
  std::uint64_t line_rate = 1'000'000'000;  // bits per second
  std::uint32_t wire_overhead = 0;          // preamble + IFG bytes per frame

  /// Throws InvalidConfig on any out-of-range field.
  void validate() const;

  /// Serialization time of one slot on the wire.
  PreciseNs wire_time() const;
  double wire_time_ns() const { return wire_time().to_double(); }

  /// Time between two successive reclaim/refill cycles.
  Nanos poll_interval() const { return polling_period + polling_overhead; }
};

enum class DescriptorState : std::uint8_t { Placeholder, Armed, InFlight };

const char* to_string(DescriptorState s);

struct Descriptor {
  DescriptorState state = DescriptorState::Placeholder;
  ClassId owner_class = kBestEffortClass;
  std::uint32_t payload_len = 0;
  bool crc_valid = false;
  std::optional<Nanos> scheduled_time;
  std::optional<FlowId> flow_id;
  std::uint64_t seq = 0;
};

/// What the NIC put on the wire for one consumed descriptor.
struct TransmittedRecord {
  std::uint64_t counter = 0;
  std::uint32_t position = 0;
  ClassId owner_class = kBestEffortClass;
  std::uint32_t payload_len = 0;
  bool crc_valid = false;
  std::optional<FlowId> flow_id;
  std::optional<Nanos> scheduled_time;
  std::uint64_t seq = 0;
};

struct ReclaimReport {
  std::vector<std::uint32_t> reclaimed;  // ring positions reset to placeholders
  std::uint64_t producer_index = 0;
};

/// Half-open range of free-running counters [lo, hi).
struct Window {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  bool contains(std::uint64_t c) const { return c >= lo && c < hi; }
  std::uint64_t size() const { return hi > lo ? hi - lo : 0; }
  bool empty() const { return hi <= lo; }
};

struct ArmRequest {
  std::uint32_t payload_len = 0;
  std::optional<Nanos> scheduled_time;
  std::optional<FlowId> flow_id;
  std::uint64_t seq = 0;
};

/// Ring of N descriptors shared between the poll-mode driver and the NIC.
///
/// Both indices are free-running; ring positions are the indices modulo N.
/// The consumer index counts descriptors the NIC has transmitted, so it
/// doubles as the packet counter behind the EPHC clock.
class DmaRing {
 public:
  /// `ownership` maps position -> class and must be empty (all best-effort)
  /// or hold exactly num_slots entries.
  explicit DmaRing(const RingConfig& config, std::span<const ClassId> ownership = {});

  const RingConfig& config() const { return config_; }
  std::uint32_t size() const { return config_.num_slots; }
  std::uint64_t producer_index() const { return producer_; }
  std::uint64_t consumer_index() const { return consumer_; }
  std::uint64_t outstanding() const { return producer_ - consumer_; }
  std::uint32_t position(std::uint64_t counter) const {
    return static_cast<std::uint32_t>(counter % config_.num_slots);
  }

  const Descriptor& at(std::uint64_t counter) const { return slots_[position(counter)]; }
  const std::vector<Descriptor>& descriptors() const { return slots_; }
  ClassId owner(std::uint64_t counter) const { return at(counter).owner_class; }

  /// The NIC transmits the next k descriptors. Throws RingUnderrun if fewer
  /// than k are eligible.
  std::vector<TransmittedRecord> nic_consume(std::uint64_t k);

  /// Reclaim everything the NIC completed since the last cycle, then hand up
  /// to batch_size placeholders to the NIC.
  ReclaimReport poll_cycle();

  /// Counters the driver may still modify: [consumer + batch, consumer + N).
  Window insertion_window() const;

  /// Overwrite a placeholder with a real packet. Callers are responsible for
  /// window and ownership checks; this only guards descriptor invariants.
  void arm(std::uint64_t counter, const ArmRequest& req);

 private:
  RingConfig config_;
  std::vector<Descriptor> slots_;
  std::uint64_t producer_ = 0;
  std::uint64_t consumer_ = 0;
  std::uint64_t reclaimed_ = 0;  // every counter below this has been reset
};

/// Fraction of line rate achievable with the given batching parameters.
double relative_throughput(const RingConfig& config);

}  // namespace slotnet
