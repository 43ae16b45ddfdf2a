#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "slotnet/partition.hpp"

namespace slotnet {

std::string format_us(Nanos ns) {
  const bool neg = ns < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-ns) : static_cast<std::uint64_t>(ns);
  std::string out = (neg ? "-" : "") + std::to_string(mag / 1000);
  if (const auto frac = mag % 1000; frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

Nanos parse_us(const std::string& text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && s.front() == '-') {
    neg = true;
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() || frac.size() > 3 || (dot != std::string_view::npos && frac.empty()))
    throw std::invalid_argument("bad microsecond value '" + text + "'");
  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc{} || p != whole.data() + whole.size())
    throw std::invalid_argument("bad microsecond value '" + text + "'");
  std::int64_t f = 0;
  if (!frac.empty()) {
    auto [q, ec2] = std::from_chars(frac.data(), frac.data() + frac.size(), f);
    if (ec2 != std::errc{} || q != frac.data() + frac.size())
      throw std::invalid_argument("bad microsecond value '" + text + "'");
    for (std::size_t i = frac.size(); i < 3; ++i) f *= 10;
  }
  const Nanos v = w * 1000 + f;
  return neg ? -v : v;
}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.fields.push_back(tok);
    if (!line.fields.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

template <class T>
T number(const Line& line, std::size_t i) {
  if (i >= line.fields.size()) throw TextFormatError(line.number, "missing field " + std::to_string(i));
  const std::string& s = line.fields[i];
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw TextFormatError(line.number, "expected an integer, got '" + s + "'");
  return v;
}

Nanos micros(const Line& line, std::size_t i) {
  if (i >= line.fields.size()) throw TextFormatError(line.number, "missing field " + std::to_string(i));
  try {
    return parse_us(line.fields[i]);
  } catch (const std::invalid_argument& e) {
    throw TextFormatError(line.number, e.what());
  }
}

void expect_fields(const Line& line, std::size_t n) {
  if (line.fields.size() != n)
    throw TextFormatError(line.number, "'" + line.fields[0] + "' takes " + std::to_string(n - 1) + " values");
}

}  // namespace

ProblemInstance read_instance(std::istream& in) {
  std::optional<std::uint32_t> ring;
  std::optional<Nanos> slot;
  std::optional<Nanos> horizon;
  std::vector<FlowSpec> flows;
  std::map<AppId, std::uint32_t> next_flow;
  std::size_t last_line = 0;
  for (const Line& line : tokenize(in)) {
    last_line = line.number;
    const std::string& kw = line.fields[0];
    if (kw == "ring") {
      expect_fields(line, 2);
      ring = number<std::uint32_t>(line, 1);
    } else if (kw == "slot_us") {
      expect_fields(line, 2);
      slot = micros(line, 1);
    } else if (kw == "horizon_us") {
      expect_fields(line, 2);
      horizon = micros(line, 1);
    } else if (kw == "flow") {
      expect_fields(line, 5);
      FlowSpec f;
      f.app = number<AppId>(line, 1);
      f.flow = next_flow[f.app]++;
      f.period = micros(line, 2);
      f.max_jitter = micros(line, 3);
      f.packet_size = number<std::uint32_t>(line, 4);
      flows.push_back(f);
    } else if (kw == "partition" || kw == "time") {
      continue;  // solution lines may share the file
    } else {
      throw TextFormatError(line.number, "unknown keyword '" + kw + "'");
    }
  }
  if (!ring) throw TextFormatError(last_line, "missing 'ring'");
  if (!slot) throw TextFormatError(last_line, "missing 'slot_us'");
  try {
    ProblemInstance p = ProblemInstance::make(std::move(flows), *ring, *slot);
    if (horizon) {
      p.horizon = *horizon;
      p.validate();
    }
    return p;
  } catch (const std::invalid_argument& e) {
    throw InvalidInstance(e.what());
  }
}

void write_instance(std::ostream& out, const ProblemInstance& p) {
  out << "ring " << p.ring_size << "\n";
  out << "slot_us " << format_us(p.slot) << "\n";
  out << "horizon_us " << format_us(p.horizon) << "\n";
  for (const auto& f : p.flows)
    out << "flow " << f.app << " " << format_us(f.period) << " " << format_us(f.max_jitter) << " " << f.packet_size
        << "\n";
}

Solution read_solution(std::istream& in) {
  Solution sol;
  for (const Line& line : tokenize(in)) {
    const std::string& kw = line.fields[0];
    if (kw == "partition") {
      if (line.fields.size() < 2) throw TextFormatError(line.number, "'partition' needs an app id");
      auto& slots = sol.partitions[number<AppId>(line, 1)];
      for (std::size_t i = 2; i < line.fields.size(); ++i) slots.insert(number<std::uint32_t>(line, i));
    } else if (kw == "time") {
      expect_fields(line, 5);
      const InstanceKey key{number<AppId>(line, 1), number<std::uint32_t>(line, 2), number<std::uint32_t>(line, 3)};
      if (!sol.schedule.emplace(key, micros(line, 4)).second)
        throw TextFormatError(line.number, "duplicate time entry");
    }
  }
  return sol;
}

void write_solution(std::ostream& out, const Solution& sol) {
  for (const auto& [app, slots] : sol.partitions) {
    out << "partition " << app;
    for (auto s : slots) out << " " << s;
    out << "\n";
  }
  for (const auto& [key, t] : sol.schedule)
    out << "time " << key.app << " " << key.flow << " " << key.instance << " " << format_us(t) << "\n";
}

}  // namespace slotnet
