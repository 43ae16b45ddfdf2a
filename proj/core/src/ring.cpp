#include "slotnet/ring.hpp"

#include <algorithm>
#include <string>

namespace slotnet {

namespace {

Descriptor placeholder(ClassId owner, std::uint32_t slot_size) {
  Descriptor d;
  d.state = DescriptorState::Placeholder;
  d.owner_class = owner;
  d.payload_len = slot_size;
  d.crc_valid = false;
  return d;
}

}  // namespace

const char* to_string(DescriptorState s) {
  switch (s) {
    case DescriptorState::Placeholder: return "placeholder";
    case DescriptorState::Armed: return "armed";
    case DescriptorState::InFlight: return "in_flight";
  }
  return "?";
}

void RingConfig::validate() const {
  if (num_slots == 0) throw InvalidConfig("num_slots must be positive");
  if (slot_size < 64 || slot_size > 1518)
    throw InvalidConfig("slot_size must be within [64, 1518] bytes, got " + std::to_string(slot_size));
  if (batch_size < 1 || batch_size > num_slots)
    throw InvalidConfig("batch_size must be within [1, num_slots], got " + std::to_string(batch_size));
  if (polling_period < 0) throw InvalidConfig("polling_period must be non-negative");
  if (polling_overhead < 0) throw InvalidConfig("polling_overhead must be non-negative");
  if (line_rate == 0) throw InvalidConfig("line_rate must be positive");
}

PreciseNs RingConfig::wire_time() const {
  const int128 bits = static_cast<int128>(slot_size + wire_overhead) * 8;
  return PreciseNs::from_fraction(bits * 1'000'000'000, line_rate);
}

DmaRing::DmaRing(const RingConfig& config, std::span<const ClassId> ownership) : config_(config) {
  config_.validate();
  if (!ownership.empty() && ownership.size() != config_.num_slots)
    throw InvalidConfig("ownership map must cover every ring slot");
  slots_.reserve(config_.num_slots);
  for (std::uint32_t i = 0; i < config_.num_slots; ++i)
    slots_.push_back(placeholder(ownership.empty() ? kBestEffortClass : ownership[i], config_.slot_size));
  producer_ = config_.batch_size;
}

std::vector<TransmittedRecord> DmaRing::nic_consume(std::uint64_t k) {
  if (consumer_ + k > producer_)
    throw RingUnderrun("NIC asked for " + std::to_string(k) + " descriptors, " +
                       std::to_string(producer_ - consumer_) + " eligible");
  std::vector<TransmittedRecord> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t c = consumer_ + i;
    Descriptor& d = slots_[position(c)];
    out.push_back(TransmittedRecord{c, position(c), d.owner_class, d.payload_len, d.crc_valid, d.flow_id,
                                    d.scheduled_time, d.seq});
    d.state = DescriptorState::InFlight;
  }
  consumer_ += k;
  return out;
}

ReclaimReport DmaRing::poll_cycle() {
  ReclaimReport report;
  for (; reclaimed_ < consumer_; ++reclaimed_) {
    const std::uint32_t pos = position(reclaimed_);
    slots_[pos] = placeholder(slots_[pos].owner_class, config_.slot_size);
    report.reclaimed.push_back(pos);
  }
  producer_ = std::min(producer_ + config_.batch_size, consumer_ + config_.num_slots);
  report.producer_index = producer_;
  return report;
}

Window DmaRing::insertion_window() const {
  return Window{consumer_ + config_.batch_size, consumer_ + config_.num_slots};
}

void DmaRing::arm(std::uint64_t counter, const ArmRequest& req) {
  Descriptor& d = slots_[position(counter)];
  if (d.state != DescriptorState::Placeholder || d.crc_valid)
    throw std::logic_error("arming a descriptor that is not a placeholder");
  if (req.payload_len == 0 || req.payload_len > config_.slot_size)
    throw std::logic_error("payload does not fit the slot");
  d.state = DescriptorState::Armed;
  d.payload_len = req.payload_len;
  d.crc_valid = true;
  d.scheduled_time = req.scheduled_time;
  d.flow_id = req.flow_id;
  d.seq = req.seq;
}

double relative_throughput(const RingConfig& config) {
  config.validate();
  const double wire = config.wire_time_ns();
  const double b = config.batch_size;
  const double cycle = static_cast<double>(config.polling_period + config.polling_overhead);
  return std::min(1.0, b * wire / std::max(b * wire, cycle));
}

}  // namespace slotnet
