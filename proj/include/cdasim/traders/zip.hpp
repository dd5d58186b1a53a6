#pragma once

#include <random>

#include "cdasim/traders/trader.hpp"

namespace cdasim {

// Adaptive profit margin with Widrow-Hoff learning and momentum.
struct ZipState {
  double margin_buy{-0.2};   // in [-1, 0]
  double margin_sell{0.2};   // in [0, inf)
  double beta{0.3};          // learning rate
  double momentum{0.05};     // momentum coefficient in [0, 1)
  double momentum_accum{0.0};
  double last_shout_price{0.0};
};

// Per-trader draws of learning rate, momentum and initial margins.
ZipState zip_init(const ZipParams& params, std::mt19937_64& rng);

inline double zip_margin(const ZipState& s, Side side) {
  return side == Side::Bid ? s.margin_buy : s.margin_sell;
}

// Real-valued shout price limit * (1 + margin).
inline double zip_shout_price(const ZipState& s, Side side, Price limit) {
  return limit * (1.0 + zip_margin(s, side));
}

// round(limit * (1 + margin)), clamped to the price band.
Price zip_quote(const ZipState& s, Side side, Price limit);

// One Widrow-Hoff step of the shout price toward `target`, then re-derive the
// margin and clamp it to the sign allowed for `side`.
void zip_adjust(ZipState& s, Side side, Price limit, double target);

enum class PriceMove { None, Up, Down };

// Which way the rule table moves this trader's shout price after `ev`.
PriceMove zip_rule(Side side, double shout_price, bool active, const MarketEvent& ev);

// Perturbed target around q: Up draws R in [1, 1+rel], A in [0, abs]; Down mirrors.
double zip_target(PriceMove move, double q, const ZipParams& params, std::mt19937_64& rng);

void zip_respond(ZipState& s, Side side, Price limit, bool active, const MarketEvent& ev,
                 const ZipParams& params, std::mt19937_64& rng);

class ZipTrader final : public Trader {
 public:
  ZipTrader(TraderId id, Side side, std::uint64_t seed, const ZipParams& params);

  const ZipState& state() const noexcept { return state_; }

 protected:
  std::optional<Price> compute_price(const Assignment& a, Timestamp now,
                                     const MarketSnapshot& snap) override;
  void observe(Timestamp now, const MarketSnapshot& snap, const MarketEvent& ev) override;

 private:
  ZipParams params_;
  ZipState state_;
};

}  // namespace cdasim
