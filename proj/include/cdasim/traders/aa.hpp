#pragma once

#include <deque>
#include <optional>
#include <span>

#include "cdasim/traders/trader.hpp"

namespace cdasim {

struct AaState {
  double r{0.0};      // aggressiveness in [-1, 1]
  double theta{-4.0};  // target-curve shape in [theta_min, theta_max]
  std::optional<double> p_star;
  double alpha{0.0};  // normalized price volatility around p_star
  std::deque<Price> trades;  // oldest first
};

// Recency-weighted mean: sum(rho^i * p_i) / sum(rho^i), i = 0 for the newest trade.
std::optional<double> aa_estimate_equilibrium(std::span<const Price> newest_first, double rho);

// Real-valued target for aggressiveness r, before clamping to the band.
double aa_target_real(double r, double theta, Price limit, double p_star, Side side);

// Target clamped to the band and rounded. Throws SimError(MissingEquilibrium)
// without an equilibrium estimate.
Price aa_target_price(double r, double theta, Price limit, std::optional<double> p_star, Side side);

// Aggressiveness whose target equals `price`, by bisection over [-1, 1] to
// within `tolerance` ticks. Saturates at +/-1 outside the reachable range.
double aa_invert(double price, double theta, Price limit, double p_star, Side side,
                 double tolerance = 0.5);

// theta* = theta_min + (theta_max - theta_min) * (1 - min(alpha / alpha_max, 1))
double aa_theta_star(double alpha, const AaParams& params);

// Learning step for one public event. `limit` is the trader's current limit,
// if it has one; aggressiveness only adapts when it does.
void aa_update(AaState& s, const AaParams& params, const MarketEvent& ev, Side side,
               std::optional<Price> limit);

// Take the best opposite quote when it is already inside the target; otherwise
// improve the best same-side quote by 1/eta of the distance to the target,
// clamped at the limit. nullopt before any equilibrium estimate exists.
std::optional<Price> aa_quote(const AaState& s, const AaParams& params, Side side, Price limit,
                              const MarketSnapshot& snap);

class AaTrader final : public Trader {
 public:
  AaTrader(TraderId id, Side side, std::uint64_t seed, const AaParams& params);

  const AaState& state() const noexcept { return state_; }

 protected:
  std::optional<Price> compute_price(const Assignment& a, Timestamp now,
                                     const MarketSnapshot& snap) override;
  void observe(Timestamp now, const MarketSnapshot& snap, const MarketEvent& ev) override;

 private:
  AaParams params_;
  AaState state_;
};

}  // namespace cdasim
