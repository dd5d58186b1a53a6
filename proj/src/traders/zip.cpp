#include "cdasim/traders/zip.hpp"

#include <algorithm>

namespace cdasim {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

ZipState zip_init(const ZipParams& params, std::mt19937_64& rng) {
  ZipState s;
  s.beta = uniform(rng, params.beta_min, params.beta_max);
  s.momentum = uniform(rng, params.momentum_min, params.momentum_max);
  s.margin_buy = -uniform(rng, params.margin_min, params.margin_max);
  s.margin_sell = uniform(rng, params.margin_min, params.margin_max);
  return s;
}

Price zip_quote(const ZipState& s, Side side, Price limit) {
  return clamp_to_band(round_half_up(zip_shout_price(s, side, limit)));
}

void zip_adjust(ZipState& s, Side side, Price limit, double target) {
  const double price = zip_shout_price(s, side, limit);
  const double delta = s.beta * (target - price);
  s.momentum_accum = s.momentum * s.momentum_accum + (1.0 - s.momentum) * delta;
  const double next = price + s.momentum_accum;
  const double margin = next / limit - 1.0;
  if (side == Side::Bid) {
    s.margin_buy = std::clamp(margin, -1.0, 0.0);
  } else {
    s.margin_sell = std::max(margin, 0.0);
  }
}

PriceMove zip_rule(Side side, double p, bool active, const MarketEvent& ev) {
  const double q = ev.price;
  const bool traded = ev.kind == MarketEvent::Kind::Trade;
  if (side == Side::Ask) {
    if (traded) {
      if (p <= q) return PriceMove::Up;
      if (ev.side == Side::Bid && active && p >= q) return PriceMove::Down;
    } else if (ev.side == Side::Ask && active && p >= q) {
      return PriceMove::Down;
    }
    return PriceMove::None;
  }
  if (traded) {
    if (p >= q) return PriceMove::Down;
    if (ev.side == Side::Ask && active && p <= q) return PriceMove::Up;
  } else if (ev.side == Side::Bid && active && p <= q) {
    return PriceMove::Up;
  }
  return PriceMove::None;
}

double zip_target(PriceMove move, double q, const ZipParams& params, std::mt19937_64& rng) {
  const double rel = uniform(rng, 0.0, params.rel_max);
  const double abs = uniform(rng, 0.0, params.abs_max);
  switch (move) {
    case PriceMove::Up: return q * (1.0 + rel) + abs;
    case PriceMove::Down: return q * (1.0 - rel) - abs;
    case PriceMove::None: break;
  }
  return q;
}

void zip_respond(ZipState& s, Side side, Price limit, bool active, const MarketEvent& ev,
                 const ZipParams& params, std::mt19937_64& rng) {
  s.last_shout_price = ev.price;
  const PriceMove move = zip_rule(side, zip_shout_price(s, side, limit), active, ev);
  if (move == PriceMove::None) return;
  zip_adjust(s, side, limit, zip_target(move, ev.price, params, rng));
}

ZipTrader::ZipTrader(TraderId id, Side side, std::uint64_t seed, const ZipParams& params)
    : Trader(id, Algo::ZIP, side, seed), params_(params), state_(zip_init(params, rng())) {}

std::optional<Price> ZipTrader::compute_price(const Assignment& a, Timestamp,
                                              const MarketSnapshot&) {
  return zip_quote(state_, a.side, a.limit);
}

void ZipTrader::observe(Timestamp, const MarketSnapshot&, const MarketEvent& ev) {
  // Margins keep learning after a fill, against the most recent limit.
  if (!assignment()) return;
  zip_respond(state_, side(), assignment()->limit, active(), ev, params_, rng());
}

}  // namespace cdasim
