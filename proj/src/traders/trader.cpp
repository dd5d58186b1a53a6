#include "cdasim/traders/trader.hpp"

#include <algorithm>
#include <string>

#include "cdasim/error.hpp"
#include "cdasim/traders/aa.hpp"
#include "cdasim/traders/gdx.hpp"
#include "cdasim/traders/zip.hpp"

namespace cdasim {

MarketEvent event_from(const Order& order, const SubmitOutcome& outcome) {
  MarketEvent ev;
  ev.time = order.submit_time;
  if (outcome.trade) {
    ev.kind = MarketEvent::Kind::Trade;
    ev.side = outcome.trade->resting_side;
    ev.price = outcome.trade->price;
    ev.time = outcome.trade->time;
  } else {
    ev.kind = MarketEvent::Kind::Shout;
    ev.side = order.side;
    ev.price = order.price;
  }
  return ev;
}

Trader::Trader(TraderId id, Algo algo, Side side, std::uint64_t seed)
    : id_(id), algo_(algo), side_(side), rng_(seed) {}

void Trader::assign(const Assignment& a) {
  if (a.side != side_) {
    throw SimError(ErrorCode::TraderFault, "assignment side does not match trader " +
                                               std::to_string(id_));
  }
  if (assignment_) {
    superseded_.push_back({assignment_->assignment_id, assignment_->limit, assignment_filled_});
    // Only in-flight orders can still reference an old assignment; a short memory suffices.
    if (superseded_.size() > 8) superseded_.erase(superseded_.begin());
  }
  assignment_ = a;
  assignment_filled_ = false;
  ++assignments_received_;
  on_assignment(a);
}

std::optional<Order> Trader::quote(Timestamp now, const MarketSnapshot& snap) {
  if (!active()) return std::nullopt;
  const std::optional<Price> price = compute_price(*assignment_, now, snap);
  if (!price) return std::nullopt;

  const Price p = *price;
  const Price limit = assignment_->limit;
  const bool within_limit = side_ == Side::Bid ? p <= limit : p >= limit;
  if (!in_band(p) || !within_limit) {
    throw SimError(ErrorCode::TraderFault,
                   std::string(to_string(algo_)) + " trader " + std::to_string(id_) +
                       " quoted " + std::to_string(p) + " against limit " +
                       std::to_string(limit));
  }

  Order o;
  o.trader_id = id_;
  o.side = side_;
  o.price = p;
  o.quantity = 1;
  o.submit_time = now;
  o.assignment_id = assignment_->assignment_id;
  o.trader_seq = ++seq_;
  return o;
}

void Trader::respond(Timestamp now, const MarketSnapshot& snap,
                     std::span<const MarketEvent> events) {
  for (const auto& ev : events) observe(now, snap, ev);
}

void Trader::on_fill(const Transaction& txn) {
  if (txn.buyer_id != id_ && txn.seller_id != id_) {
    throw SimError(ErrorCode::TraderFault, "fill routed to uninvolved trader " +
                                               std::to_string(id_));
  }
  const std::uint32_t aid = txn.buyer_id == id_ ? txn.buyer_assignment : txn.seller_assignment;

  Price limit = 0;
  if (assignment_ && assignment_->assignment_id == aid && !assignment_filled_) {
    limit = assignment_->limit;
    assignment_filled_ = true;
  } else {
    auto it = std::find_if(superseded_.begin(), superseded_.end(),
                           [aid](const PastAssignment& p) { return p.id == aid; });
    if (it == superseded_.end() || it->filled) {
      throw SimError(ErrorCode::FillWithoutAssignment,
                     "trader " + std::to_string(id_) + " has no open assignment " +
                         std::to_string(aid));
    }
    limit = it->limit;
    it->filled = true;
  }

  const Price profit = limit >= txn.price ? limit - txn.price : txn.price - limit;
  balance_ += profit;
  blotter_.push_back({txn, aid, limit, profit});
}

Price zic_price(Side side, Price limit, std::mt19937_64& rng) {
  if (side == Side::Bid) {
    std::uniform_int_distribution<Price> draw(kSysMinPrice, std::max(limit, kSysMinPrice));
    return draw(rng);
  }
  std::uniform_int_distribution<Price> draw(std::min(limit, kSysMaxPrice), kSysMaxPrice);
  return draw(rng);
}

Price shvr_price(Side side, Price limit, const MarketSnapshot& snap) {
  if (side == Side::Bid) {
    if (!snap.best_bid) return kSysMinPrice;
    return std::min(limit, *snap.best_bid + 1);
  }
  if (!snap.best_ask) return kSysMaxPrice;
  return std::max(limit, *snap.best_ask - 1);
}

std::unique_ptr<Trader> make_trader(Algo algo, TraderId id, Side side, std::uint64_t seed,
                                    const TraderParams& params) {
  switch (algo) {
    case Algo::ZIC: return std::make_unique<ZicTrader>(id, side, seed);
    case Algo::SHVR: return std::make_unique<ShvrTrader>(id, side, seed);
    case Algo::ZIP: return std::make_unique<ZipTrader>(id, side, seed, params.zip);
    case Algo::GDX: return std::make_unique<GdxTrader>(id, side, seed, params.gdx);
    case Algo::AA: return std::make_unique<AaTrader>(id, side, seed, params.aa);
  }
  throw SimError(ErrorCode::ConfigInvalid, "unknown algorithm");
}

}  // namespace cdasim
