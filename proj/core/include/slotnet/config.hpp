#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "slotnet/engine.hpp"
#include "slotnet/partition.hpp"
#include "slotnet/ptp.hpp"

namespace slotnet::config {

/// Malformed input. Line and column are 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that breaks a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PtpStudy {
  PtpConfig ptp;
  PtpErrorModel model;
  bool run_filtered = true;
  bool run_unfiltered = true;
  std::uint32_t seeds = 1;  // consecutive seeds starting at ptp.rng_seed
};

Scenario parse_scenario(const std::string& text, const std::string& source = "<input>");
Scenario load_scenario(const std::string& path);

PtpStudy parse_ptp_study(const std::string& text, const std::string& source = "<input>");
PtpStudy load_ptp_study(const std::string& path);

SweepParams parse_sweep(const std::string& text, const std::string& source = "<input>");
SweepParams load_sweep(const std::string& path);

ProblemInstance parse_instance(const std::string& text, const std::string& source = "<input>");
ProblemInstance load_instance(const std::string& path);

/// Effective parameters, defaults included, one "key: value" line each.
std::vector<std::string> describe(const Scenario& scenario);
std::vector<std::string> describe(const PtpStudy& study);
std::vector<std::string> describe(const SweepParams& params);

/// Evenly spaced ring positions for `count` slots out of `num_slots`.
std::vector<std::uint32_t> spread_positions(std::uint32_t num_slots, std::uint32_t count);

}  // namespace slotnet::config
