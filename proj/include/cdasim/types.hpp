#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cdasim {

// Prices are integer ticks inside a fixed system-wide band.
using Price = std::int32_t;
using TraderId = std::uint32_t;
using OrderId = std::uint64_t;
// Seconds. Virtual time in the sequential engine, scaled wall time in the threaded one.
using Timestamp = double;

inline constexpr Price kSysMinPrice = 1;
inline constexpr Price kSysMaxPrice = 500;

enum class Side : std::uint8_t { Bid, Ask };

constexpr Side opposite(Side s) noexcept { return s == Side::Bid ? Side::Ask : Side::Bid; }
std::string_view to_string(Side s) noexcept;

enum class Algo : std::uint8_t { ZIC, SHVR, ZIP, GDX, AA };

inline constexpr std::array<Algo, 5> kAllAlgos = {Algo::ZIC, Algo::SHVR, Algo::ZIP, Algo::GDX,
                                                  Algo::AA};

std::string_view to_string(Algo a) noexcept;
// Case-insensitive; accepts "GD" as an alias for GDX.
std::optional<Algo> parse_algo(std::string_view name);

constexpr bool in_band(Price p) noexcept { return p >= kSysMinPrice && p <= kSysMaxPrice; }

// Half-up rounding used everywhere a real value becomes a tick price.
inline Price round_half_up(double x) noexcept { return static_cast<Price>(std::floor(x + 0.5)); }

constexpr Price clamp_to_band(Price p) noexcept {
  return p < kSysMinPrice ? kSysMinPrice : (p > kSysMaxPrice ? kSysMaxPrice : p);
}

}  // namespace cdasim
