#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdasim/engine/latency.hpp"
#include "cdasim/exchange/order_book.hpp"
#include "cdasim/market/schedule.hpp"
#include "cdasim/traders/params.hpp"
#include "cdasim/traders/trader.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

enum class EngineMode { Sequential, Threaded };
enum class Parallelism { Serialized, Full };
enum class DelayKind { Sleep, Spin };

std::string_view to_string(EngineMode m) noexcept;
std::string_view to_string(Parallelism p) noexcept;
std::string_view to_string(DelayKind k) noexcept;
std::optional<EngineMode> parse_engine_mode(std::string_view s);
std::optional<Parallelism> parse_parallelism(std::string_view s);
std::optional<DelayKind> parse_delay_kind(std::string_view s);

struct RosterEntry {
  TraderId id{0};
  Algo algo{Algo::ZIC};
  Side side{Side::Bid};
  // Threaded engine only: overrides the per-algorithm injected delay.
  std::optional<double> delay_ms;
};

struct SessionConfig {
  double duration{300.0};  // virtual seconds
  std::vector<RosterEntry> roster;
  ScheduleConfig schedule{};
  TraderParams traders{};
  std::uint64_t seed{1};

  // Throws SimError(ConfigInvalid).
  void validate() const;
  std::vector<TraderId> buyers() const;
  std::vector<TraderId> sellers() const;
};

struct ThreadedConfig {
  SessionConfig session{};
  double wall_duration{10.0};  // wall seconds
  double time_scale{30.0};     // virtual seconds per wall second
  std::map<Algo, double> delay_ms;
  Parallelism parallelism{Parallelism::Full};
  DelayKind delay_kind{DelayKind::Sleep};
  std::size_t queue_capacity{64};
  // Serialized mode: longest uninterrupted stretch of injected delay one trader may run.
  double slice_ms{0.1};
  // Trader loops pull at most this many public events per respond phase.
  std::size_t max_events_per_respond{64};
  // Wall seconds allowed for trader activities to stop after the deadline.
  double drain_timeout{5.0};

  void validate() const;
  double delay_for(const RosterEntry& e) const;
};

struct TraderOutcome {
  TraderId id{0};
  Algo algo{Algo::ZIC};
  Side side{Side::Bid};
  Price profit{0};
  std::vector<Fill> fills;
  std::uint64_t quote_calls{0};
  std::uint64_t respond_calls{0};
  std::uint64_t orders_emitted{0};
  // Threaded engine: completed four-phase loop cycles.
  std::uint64_t iterations{0};
};

struct SessionResult {
  EngineMode mode{EngineMode::Sequential};
  std::uint64_t seed{0};
  std::vector<Transaction> tape;
  std::vector<TraderOutcome> traders;  // roster order
  std::map<Algo, double> appt_by_algo;
  std::map<Algo, LatencyStats> quote_latency;
  std::map<Algo, LatencyStats> respond_latency;
  std::uint64_t polls{0};           // sequential: trader selections
  std::uint64_t market_changes{0};  // orders that rested, replaced or traded
  std::uint64_t rejected_orders{0};
  std::uint64_t stale_orders{0};
  std::uint64_t fifo_violations{0};
  double realized_duration{0.0};

  // Provenance for threaded runs.
  std::string parallelism;
  std::string host;
  std::map<Algo, double> delay_ms;
  bool valid{true};
  std::string error;

  const TraderOutcome* trader(TraderId id) const;
  Price total_profit() const;
  // Serialized form of everything replay-deterministic (tape, profits, fills,
  // counters). Wall-clock measurements are excluded.
  std::string canonical() const;
};

// Fills appt_by_algo from per-trader profits.
void compute_appt(SessionResult& r);

}  // namespace cdasim
