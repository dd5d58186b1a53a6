#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "cdasim/types.hpp"

namespace cdasim {

struct Order {
  OrderId order_id{0};  // assigned by the book on arrival
  TraderId trader_id{0};
  Side side{Side::Bid};
  Price price{0};
  std::int32_t quantity{1};
  Timestamp submit_time{0.0};
  // Which of the trader's assignments this unit belongs to.
  std::uint32_t assignment_id{0};
  // Per-trader emission counter; lets the threaded engine audit FIFO order.
  std::uint64_t trader_seq{0};
};

struct Transaction {
  Price price{0};
  TraderId buyer_id{0};
  TraderId seller_id{0};
  Timestamp time{0.0};
  Side resting_side{Side::Bid};
  std::uint32_t buyer_assignment{0};
  std::uint32_t seller_assignment{0};
};

bool operator==(const Transaction& a, const Transaction& b) noexcept;

enum class SubmitStatus { Rested, Replaced, Traded, Rejected };
enum class RejectReason { PriceOutOfBand, UnknownTrader, Stale };

std::string_view to_string(SubmitStatus s) noexcept;
std::string_view to_string(RejectReason r) noexcept;

struct SubmitOutcome {
  SubmitStatus status{SubmitStatus::Rested};
  std::optional<Transaction> trade;
  std::optional<RejectReason> reject;
  OrderId order_id{0};

  // Any outcome other than a rejection changes the public market data.
  bool market_changed() const noexcept { return status != SubmitStatus::Rejected; }
};

// Anonymized public view of the book.
struct MarketSnapshot {
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;
  std::size_t bid_depth{0};
  std::size_t ask_depth{0};
  std::optional<Price> last_trade_price;
  std::vector<Transaction> recent_tape;
  Timestamp time{0.0};
};

// Continuous double auction book with price-time priority.
//
// Single owner: callers serialize access. Each trader has at most one
// resting order; a new order from the same trader replaces the old one.
// A crossing order trades one unit at the resting order's price.
class LimitOrderBook {
 public:
  LimitOrderBook() = default;
  explicit LimitOrderBook(std::span<const TraderId> known_traders);

  void register_trader(TraderId id);
  bool knows(TraderId id) const { return known_.contains(id); }

  SubmitOutcome submit_order(Order order);

  // Removes the trader's resting order, if any. Returns true when something was removed.
  // Used by the engines when an assignment is superseded; not a client message.
  bool withdraw(TraderId id);

  MarketSnapshot snapshot(Timestamp since) const;

  std::optional<Price> best_bid() const;
  std::optional<Price> best_ask() const;
  const std::vector<Order>& bids() const noexcept { return bids_; }
  const std::vector<Order>& asks() const noexcept { return asks_; }
  const std::vector<Transaction>& tape() const noexcept { return tape_; }
  std::optional<Order> resting_order_of(TraderId id) const;
  Timestamp last_time() const noexcept { return last_time_; }

 private:
  void insert_resting(const Order& o);
  bool erase_trader(TraderId id);

  // bids_: price descending, then arrival. asks_: price ascending, then arrival.
  std::vector<Order> bids_;
  std::vector<Order> asks_;
  std::vector<Transaction> tape_;
  std::unordered_set<TraderId> known_;
  OrderId next_order_id_{1};
  Timestamp last_time_{0.0};
};

// time,price,buyer_id,seller_id,resting_side
inline constexpr std::string_view kTapeCsvHeader = "time,price,buyer_id,seller_id,resting_side";

std::string tape_csv_row(const Transaction& t);
void write_tape_csv(std::ostream& out, std::span<const Transaction> tape);
void write_tape_csv(const std::string& path, std::span<const Transaction> tape);

}  // namespace cdasim
