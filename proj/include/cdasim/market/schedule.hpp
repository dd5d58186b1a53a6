#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cdasim/types.hpp"

namespace cdasim {

// offset(t) = round(amplitude * sin(2*pi*t / wavelength) + drift * t)
struct OffsetParams {
  double amplitude{40.0};   // ticks
  double wavelength{300.0};  // seconds
  double drift{0.0};        // ticks per second
};

struct ScheduleConfig {
  Price price_floor{50};
  Price price_ceil{150};
  int n_per_side{20};
  OffsetParams offset{};
  double replenish_interval{30.0};

  // Throws SimError(ConfigInvalid) describing the first violated constraint.
  void validate() const;
};

struct Assignment {
  TraderId trader_id{0};
  Side side{Side::Bid};  // Bid = buy order, Ask = sell order
  Price limit{0};
  Timestamp issue_time{0.0};
  std::uint32_t assignment_id{0};
};

struct Limits {
  std::vector<Price> demand;
  std::vector<Price> supply;
};

Price offset_value(double t, const OffsetParams& p);

// n_per_side evenly spaced limits over [floor, ceil] shifted by offset(t).
// Demand and supply share the same set of values. Throws RangeViolation when
// a shifted limit leaves the system price band.
Limits build_limits(const ScheduleConfig& cfg, double t);

// Theoretical equilibrium: midpoint of the base range plus offset(t).
double equilibrium_price(const ScheduleConfig& cfg, double t);

// Deals a fresh limit to every trader. Buyers receive a random permutation of
// the demand limits, sellers of the supply limits. All assignments share
// issue_time = t and carry `round` as their assignment id.
std::vector<Assignment> issue_assignments(double t, std::span<const TraderId> buyers,
                                          std::span<const TraderId> sellers,
                                          const ScheduleConfig& cfg, std::mt19937_64& rng,
                                          std::uint32_t round);

}  // namespace cdasim
