#include "cdasim/market/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cdasim/error.hpp"

namespace cdasim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SimError(ErrorCode::ConfigInvalid, what);
}

}  // namespace

void ScheduleConfig::validate() const {
  require(price_floor < price_ceil, "price_floor must be below price_ceil");
  require(n_per_side >= 1, "n_per_side must be at least 1");
  require(offset.wavelength > 0.0, "offset_wavelength must be positive");
  require(offset.amplitude >= 0.0, "offset_amplitude must be non-negative");
  require(replenish_interval > 0.0, "replenish_interval must be positive");
  // Drift is unbounded over time, so only the sinusoid is checked here; build_limits
  // reports drift-induced excursions as RangeViolation.
  const Price swing = static_cast<Price>(std::ceil(offset.amplitude));
  require(price_floor - swing >= kSysMinPrice && price_ceil + swing <= kSysMaxPrice,
          "limit range plus offset amplitude leaves the system price band");
}

Price offset_value(double t, const OffsetParams& p) {
  const double phase = 2.0 * std::numbers::pi * t / p.wavelength;
  return round_half_up(p.amplitude * std::sin(phase) + p.drift * t);
}

double equilibrium_price(const ScheduleConfig& cfg, double t) {
  return 0.5 * (cfg.price_floor + cfg.price_ceil) + offset_value(t, cfg.offset);
}

Limits build_limits(const ScheduleConfig& cfg, double t) {
  const Price shift = offset_value(t, cfg.offset);
  const int n = cfg.n_per_side;
  std::vector<Price> values(static_cast<std::size_t>(n));
  if (n == 1) {
    values[0] = round_half_up(0.5 * (cfg.price_floor + cfg.price_ceil)) + shift;
  } else {
    const double step = static_cast<double>(cfg.price_ceil - cfg.price_floor) / (n - 1);
    for (int i = 0; i < n; ++i) {
      values[static_cast<std::size_t>(i)] = round_half_up(cfg.price_floor + i * step) + shift;
    }
  }
  for (Price v : values) {
    if (!in_band(v)) {
      throw SimError(ErrorCode::RangeViolation,
                     "limit " + std::to_string(v) + " outside system band at t=" +
                         std::to_string(t));
    }
  }
  return Limits{values, values};
}

std::vector<Assignment> issue_assignments(double t, std::span<const TraderId> buyers,
                                          std::span<const TraderId> sellers,
                                          const ScheduleConfig& cfg, std::mt19937_64& rng,
                                          std::uint32_t round) {
  if (buyers.size() != static_cast<std::size_t>(cfg.n_per_side) ||
      sellers.size() != static_cast<std::size_t>(cfg.n_per_side)) {
    throw SimError(ErrorCode::ConfigInvalid, "roster size does not match n_per_side");
  }
  Limits limits = build_limits(cfg, t);
  std::shuffle(limits.demand.begin(), limits.demand.end(), rng);
  std::shuffle(limits.supply.begin(), limits.supply.end(), rng);

  std::vector<Assignment> out;
  out.reserve(buyers.size() + sellers.size());
  for (std::size_t i = 0; i < buyers.size(); ++i) {
    out.push_back({buyers[i], Side::Bid, limits.demand[i], t, round});
  }
  for (std::size_t i = 0; i < sellers.size(); ++i) {
    out.push_back({sellers[i], Side::Ask, limits.supply[i], t, round});
  }
  return out;
}

}  // namespace cdasim
