#include "cdasim/exchange/order_book.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <ostream>

#include "cdasim/error.hpp"

namespace cdasim {

bool operator==(const Transaction& a, const Transaction& b) noexcept {
  return a.price == b.price && a.buyer_id == b.buyer_id && a.seller_id == b.seller_id &&
         a.time == b.time && a.resting_side == b.resting_side &&
         a.buyer_assignment == b.buyer_assignment && a.seller_assignment == b.seller_assignment;
}

std::string_view to_string(SubmitStatus s) noexcept {
  switch (s) {
    case SubmitStatus::Rested: return "Rested";
    case SubmitStatus::Replaced: return "Replaced";
    case SubmitStatus::Traded: return "Traded";
    case SubmitStatus::Rejected: return "Rejected";
  }
  return "?";
}

std::string_view to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::PriceOutOfBand: return "PriceOutOfBand";
    case RejectReason::UnknownTrader: return "UnknownTrader";
    case RejectReason::Stale: return "Stale";
  }
  return "?";
}

LimitOrderBook::LimitOrderBook(std::span<const TraderId> known_traders)
    : known_(known_traders.begin(), known_traders.end()) {}

void LimitOrderBook::register_trader(TraderId id) { known_.insert(id); }

std::optional<Price> LimitOrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.front().price;
}

std::optional<Price> LimitOrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.front().price;
}

std::optional<Order> LimitOrderBook::resting_order_of(TraderId id) const {
  for (const auto* side : {&bids_, &asks_}) {
    auto it = std::find_if(side->begin(), side->end(),
                           [id](const Order& o) { return o.trader_id == id; });
    if (it != side->end()) return *it;
  }
  return std::nullopt;
}

bool LimitOrderBook::erase_trader(TraderId id) {
  for (auto* side : {&bids_, &asks_}) {
    auto it = std::find_if(side->begin(), side->end(),
                           [id](const Order& o) { return o.trader_id == id; });
    if (it != side->end()) {
      side->erase(it);
      return true;
    }
  }
  return false;
}

void LimitOrderBook::insert_resting(const Order& o) {
  // Later arrivals queue behind equal prices, so upper_bound keeps time priority.
  if (o.side == Side::Bid) {
    auto pos = std::upper_bound(bids_.begin(), bids_.end(), o,
                                [](const Order& a, const Order& b) { return a.price > b.price; });
    bids_.insert(pos, o);
  } else {
    auto pos = std::upper_bound(asks_.begin(), asks_.end(), o,
                                [](const Order& a, const Order& b) { return a.price < b.price; });
    asks_.insert(pos, o);
  }
}

SubmitOutcome LimitOrderBook::submit_order(Order order) {
  SubmitOutcome out;
  if (!in_band(order.price)) {
    out.status = SubmitStatus::Rejected;
    out.reject = RejectReason::PriceOutOfBand;
    return out;
  }
  if (!knows(order.trader_id)) {
    out.status = SubmitStatus::Rejected;
    out.reject = RejectReason::UnknownTrader;
    return out;
  }

  order.order_id = next_order_id_++;
  order.quantity = 1;
  // Tape timestamps must never run backwards.
  order.submit_time = std::max(order.submit_time, last_time_);
  last_time_ = order.submit_time;
  out.order_id = order.order_id;

  const bool replaced = erase_trader(order.trader_id);

  auto& opposite_side = order.side == Side::Bid ? asks_ : bids_;
  if (!opposite_side.empty()) {
    const Order& best = opposite_side.front();
    const bool crosses =
        order.side == Side::Bid ? order.price >= best.price : order.price <= best.price;
    if (crosses) {
      Transaction t;
      t.price = best.price;
      t.time = order.submit_time;
      t.resting_side = best.side;
      if (order.side == Side::Bid) {
        t.buyer_id = order.trader_id;
        t.buyer_assignment = order.assignment_id;
        t.seller_id = best.trader_id;
        t.seller_assignment = best.assignment_id;
      } else {
        t.seller_id = order.trader_id;
        t.seller_assignment = order.assignment_id;
        t.buyer_id = best.trader_id;
        t.buyer_assignment = best.assignment_id;
      }
      opposite_side.erase(opposite_side.begin());
      tape_.push_back(t);
      out.status = SubmitStatus::Traded;
      out.trade = t;
      return out;
    }
  }

  insert_resting(order);
  out.status = replaced ? SubmitStatus::Replaced : SubmitStatus::Rested;
  return out;
}

bool LimitOrderBook::withdraw(TraderId id) { return erase_trader(id); }

MarketSnapshot LimitOrderBook::snapshot(Timestamp since) const {
  MarketSnapshot s;
  s.best_bid = best_bid();
  s.best_ask = best_ask();
  s.bid_depth = bids_.size();
  s.ask_depth = asks_.size();
  if (!tape_.empty()) s.last_trade_price = tape_.back().price;
  auto first = std::upper_bound(tape_.begin(), tape_.end(), since,
                                [](Timestamp t, const Transaction& x) { return t < x.time; });
  s.recent_tape.assign(first, tape_.end());
  s.time = last_time_;
  return s;
}

std::string tape_csv_row(const Transaction& t) {
  return fmt::format("{:.6f},{},{},{},{}", t.time, t.price, t.buyer_id, t.seller_id,
                     to_string(t.resting_side));
}

void write_tape_csv(std::ostream& out, std::span<const Transaction> tape) {
  out << kTapeCsvHeader << '\n';
  for (const auto& t : tape) out << tape_csv_row(t) << '\n';
}

void write_tape_csv(const std::string& path, std::span<const Transaction> tape) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SimError(ErrorCode::Io, "cannot open " + path);
  write_tape_csv(f, tape);
  if (!f) throw SimError(ErrorCode::Io, "write failed for " + path);
}

}  // namespace cdasim
