#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cdasim/exchange/order_book.hpp"
#include "cdasim/market/schedule.hpp"
#include "cdasim/traders/params.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

// A public market-data change. For a trade, `side` is the side of the order
// that was resting (the shout that got accepted) and `price` the trade price.
struct MarketEvent {
  enum class Kind : std::uint8_t { Shout, Trade };
  Kind kind{Kind::Shout};
  Side side{Side::Bid};
  Price price{0};
  Timestamp time{0.0};
};

MarketEvent event_from(const Order& order, const SubmitOutcome& outcome);

struct Fill {
  Transaction txn;
  std::uint32_t assignment_id{0};
  Price limit{0};
  Price profit{0};
};

// Common bookkeeping shared by every algorithm. The quote/respond entry points
// are non-virtual; algorithms plug in through the protected hooks.
class Trader {
 public:
  Trader(TraderId id, Algo algo, Side side, std::uint64_t seed);
  virtual ~Trader() = default;
  Trader(const Trader&) = delete;
  Trader& operator=(const Trader&) = delete;

  TraderId id() const noexcept { return id_; }
  Algo algo() const noexcept { return algo_; }
  Side side() const noexcept { return side_; }
  Price balance() const noexcept { return balance_; }
  const std::vector<Fill>& blotter() const noexcept { return blotter_; }
  const std::optional<Assignment>& assignment() const noexcept { return assignment_; }
  bool active() const noexcept { return assignment_.has_value() && !assignment_filled_; }
  std::uint64_t quotes_emitted() const noexcept { return seq_; }

  // Replaces any pending assignment.
  void assign(const Assignment& a);

  // The getorder step. Throws SimError(TraderFault) if the algorithm proposes a
  // price outside the band or on the wrong side of the limit.
  std::optional<Order> quote(Timestamp now, const MarketSnapshot& snap);

  // The respond step: feeds each public event to the algorithm, in order.
  void respond(Timestamp now, const MarketSnapshot& snap, std::span<const MarketEvent> events);

  // Books the profit |limit - price| against the assignment the filled order
  // was quoted for. Throws SimError(FillWithoutAssignment) if that assignment is
  // unknown or was already filled.
  void on_fill(const Transaction& txn);

 protected:
  virtual std::optional<Price> compute_price(const Assignment& a, Timestamp now,
                                             const MarketSnapshot& snap) = 0;
  virtual void observe(Timestamp /*now*/, const MarketSnapshot& /*snap*/,
                       const MarketEvent& /*ev*/) {}
  virtual void on_assignment(const Assignment& /*a*/) {}

  std::mt19937_64& rng() noexcept { return rng_; }
  std::uint32_t assignments_received() const noexcept { return assignments_received_; }

 private:
  struct PastAssignment {
    std::uint32_t id;
    Price limit;
    bool filled;
  };

  TraderId id_;
  Algo algo_;
  Side side_;
  std::mt19937_64 rng_;
  Price balance_{0};
  std::optional<Assignment> assignment_;
  bool assignment_filled_{false};
  std::vector<PastAssignment> superseded_;
  std::vector<Fill> blotter_;
  std::uint64_t seq_{0};
  std::uint32_t assignments_received_{0};
};

// Uniform integer draw over [SYS_MIN, limit] for buyers, [limit, SYS_MAX] for sellers.
Price zic_price(Side side, Price limit, std::mt19937_64& rng);

// Improve the best same-side quote by one tick, never crossing the limit.
Price shvr_price(Side side, Price limit, const MarketSnapshot& snap);

class ZicTrader final : public Trader {
 public:
  ZicTrader(TraderId id, Side side, std::uint64_t seed) : Trader(id, Algo::ZIC, side, seed) {}

 protected:
  std::optional<Price> compute_price(const Assignment& a, Timestamp, const MarketSnapshot&) override {
    return zic_price(a.side, a.limit, rng());
  }
};

class ShvrTrader final : public Trader {
 public:
  ShvrTrader(TraderId id, Side side, std::uint64_t seed) : Trader(id, Algo::SHVR, side, seed) {}

 protected:
  std::optional<Price> compute_price(const Assignment& a, Timestamp,
                                     const MarketSnapshot& snap) override {
    return shvr_price(a.side, a.limit, snap);
  }
};

std::unique_ptr<Trader> make_trader(Algo algo, TraderId id, Side side, std::uint64_t seed,
                                    const TraderParams& params);

}  // namespace cdasim
