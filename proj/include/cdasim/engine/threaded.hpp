#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <unordered_map>
#include <vector>

#include "cdasim/engine/channels.hpp"
#include "cdasim/engine/session.hpp"

namespace cdasim {

// Wall clock shared by every activity of one threaded session. Virtual time is
// elapsed wall time scaled by time_scale.
class SessionClock {
 public:
  explicit SessionClock(double time_scale)
      : scale_(time_scale), start_(std::chrono::steady_clock::now()) {}
  double wall() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  Timestamp now() const { return wall() * scale_; }
  std::chrono::steady_clock::time_point at_wall(double s) const {
    return start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(s));
  }
  double scale() const noexcept { return scale_; }

 private:
  double scale_;
  std::chrono::steady_clock::time_point start_;
};

using FeedMap = std::unordered_map<TraderId, TraderFeed*>;

// Owns the book. One instance per session, driven by a single thread.
class ExchangeWorker {
 public:
  ExchangeWorker(std::span<const TraderId> ids, FeedMap feeds, MarketDataBus& bus);

  // Handles one message from the order queue.
  void process(const ExchangeMessage& msg, Timestamp now);
  // Pops and processes until the queue is closed and empty.
  void run(BoundedQueue<ExchangeMessage>& queue, const SessionClock& clock);

  const LimitOrderBook& book() const noexcept { return book_; }
  std::uint64_t market_changes() const noexcept { return market_changes_; }
  std::uint64_t rejected() const noexcept { return rejected_; }
  std::uint64_t stale() const noexcept { return stale_; }
  std::uint64_t fifo_violations() const noexcept { return fifo_violations_; }
  std::uint64_t processed() const noexcept { return processed_; }

 private:
  struct PerTrader {
    std::uint32_t min_assignment{0};
    std::optional<std::uint32_t> filled;
    std::optional<std::uint64_t> last_seq;
  };

  void reject(const Order& o, RejectReason r);

  LimitOrderBook book_;
  FeedMap feeds_;
  MarketDataBus& bus_;
  std::unordered_map<TraderId, PerTrader> state_;
  std::uint64_t market_changes_{0};
  std::uint64_t rejected_{0};
  std::uint64_t stale_{0};
  std::uint64_t fifo_violations_{0};
  std::uint64_t processed_{0};
};

struct DelaySpec {
  double ms{0.0};
  DelayKind kind{DelayKind::Sleep};
  double slice_ms{0.1};
};

// One trader's loop: drain feed, respond, quote, enqueue.
class TraderWorker {
 public:
  TraderWorker(std::unique_ptr<Trader> trader, TraderFeed& feed, const MarketDataBus& bus,
               BoundedQueue<ExchangeMessage>& queue, DelaySpec delay,
               ComputeToken* token,  // non-null in Serialized mode
               std::size_t max_events);

  enum class StepResult { Continue, Idle, Stopped };

  // One full four-phase cycle. Returns Stopped if the token or queue refused
  // service (session shutting down).
  StepResult step(const SessionClock& clock);
  // Loops on step() until `stop` is raised.
  void run(const SessionClock& clock, const std::atomic<bool>& stop);
  // Applies whatever is still in the feed (after the exchange has drained).
  void drain_feed();

  Trader& trader() noexcept { return *trader_; }
  const Trader& trader() const noexcept { return *trader_; }
  TraderOutcome& outcome() noexcept { return outcome_; }
  LatencyRecorder& quote_latency() noexcept { return quote_lat_; }
  LatencyRecorder& respond_latency() noexcept { return respond_lat_; }
  std::uint64_t skipped_events() const noexcept { return skipped_; }
  std::uint64_t rejections() const noexcept { return rejections_; }

 private:
  bool inject_delay();

  std::unique_ptr<Trader> trader_;
  TraderFeed& feed_;
  const MarketDataBus& bus_;
  BoundedQueue<ExchangeMessage>& queue_;
  DelaySpec delay_;
  ComputeToken* token_;
  std::size_t max_events_;

  std::uint64_t cursor_{0};
  std::vector<FeedItem> inbox_;
  std::vector<MarketEvent> events_;
  TraderOutcome outcome_;
  LatencyRecorder quote_lat_;
  LatencyRecorder respond_lat_;
  std::uint64_t skipped_{0};
  std::uint64_t rejections_{0};
};

// Concurrent session: one thread per trader, one exchange thread, and the
// calling thread as coordinator. Not replay-deterministic. A trader fault or a
// stop that overruns drain_timeout yields a result with valid = false.
SessionResult run_session_threaded(const ThreadedConfig& cfg);

// hostname plus hardware thread count.
std::string host_descriptor();

}  // namespace cdasim
