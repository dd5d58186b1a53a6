#include "cdasim/traders/aa.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdasim/error.hpp"

namespace cdasim {

namespace {

// (e^{x theta} - 1) / (e^theta - 1) for x in [0, 1]; tends to x as theta -> 0.
double shape(double x, double theta) {
  if (std::abs(theta) < 1e-9) return x;
  return std::expm1(x * theta) / std::expm1(theta);
}

}  // namespace

std::optional<double> aa_estimate_equilibrium(std::span<const Price> newest_first, double rho) {
  if (newest_first.empty()) return std::nullopt;
  double weight = 1.0;
  double num = 0.0;
  double den = 0.0;
  for (Price p : newest_first) {
    num += weight * p;
    den += weight;
    weight *= rho;
  }
  return num / den;
}

double aa_target_real(double r, double theta, Price limit, double p_star, Side side) {
  const double lim = limit;
  if (side == Side::Bid) {
    if (lim > p_star) {
      if (r > 0.0) return p_star + (lim - p_star) * shape(r, theta);
      return p_star * (1.0 - shape(-r, theta));
    }
    if (r > 0.0) return lim;
    return lim * (1.0 - shape(-r, theta));
  }
  const double ceiling = kSysMaxPrice;
  if (lim < p_star) {
    if (r > 0.0) return p_star - (p_star - lim) * shape(r, theta);
    return p_star + (ceiling - p_star) * shape(-r, theta);
  }
  if (r > 0.0) return lim;
  return lim + (ceiling - lim) * shape(-r, theta);
}

Price aa_target_price(double r, double theta, Price limit, std::optional<double> p_star,
                      Side side) {
  if (!p_star) throw SimError(ErrorCode::MissingEquilibrium, "no equilibrium estimate yet");
  return clamp_to_band(round_half_up(aa_target_real(r, theta, limit, *p_star, side)));
}

double aa_invert(double price, double theta, Price limit, double p_star, Side side,
                 double tolerance) {
  // Buyer targets rise with r, seller targets fall; flip sellers so the search is one-sided.
  const double sign = side == Side::Bid ? 1.0 : -1.0;
  auto f = [&](double r) { return sign * aa_target_real(r, theta, limit, p_star, side); };
  const double goal = sign * price;

  double lo = -1.0;
  double hi = 1.0;
  if (goal <= f(lo)) return lo;
  if (goal >= f(hi)) return hi;
  double mid = 0.0;
  for (int i = 0; i < 60; ++i) {
    mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (std::abs(v - goal) <= tolerance) break;
    if (v < goal) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

double aa_theta_star(double alpha, const AaParams& params) {
  const double norm = std::min(alpha / params.alpha_max, 1.0);
  return params.theta_min + (params.theta_max - params.theta_min) * (1.0 - norm);
}

void aa_update(AaState& s, const AaParams& params, const MarketEvent& ev, Side side,
               std::optional<Price> limit) {
  const bool traded = ev.kind == MarketEvent::Kind::Trade;

  // Aggressiveness: move toward the level that would have matched the last shout.
  if (limit && s.p_star) {
    const double target = aa_target_real(s.r, s.theta, *limit, *s.p_star, side);
    const double q = ev.price;
    std::optional<bool> more_aggressive;
    if (traded) {
      const bool would_transact = side == Side::Bid ? target >= q : target <= q;
      more_aggressive = !would_transact;
    } else if (ev.side == side) {
      // Outbid by a same-side shout the trader's target does not beat.
      const bool outbid = side == Side::Bid ? target <= q : target >= q;
      if (outbid) more_aggressive = true;
    }
    if (more_aggressive) {
      const double r_shout = aa_invert(q, s.theta, *limit, *s.p_star, side);
      // relative step taken on |r| so the nudge points the intended way for r < 0 too
      const double step = params.lambda_r * std::abs(r_shout) + params.lambda_a;
      const double desired = *more_aggressive ? r_shout + step : r_shout - step;
      s.r = std::clamp(s.r + params.beta1 * (desired - s.r), -1.0, 1.0);
    }
  }

  if (!traded) return;

  s.trades.push_back(ev.price);
  while (s.trades.size() > static_cast<std::size_t>(std::max(params.window, 1))) {
    s.trades.pop_front();
  }
  std::vector<Price> newest_first(s.trades.rbegin(), s.trades.rend());
  s.p_star = aa_estimate_equilibrium(newest_first, params.rho);

  double sq = 0.0;
  for (Price p : s.trades) sq += (p - *s.p_star) * (p - *s.p_star);
  s.alpha = std::sqrt(sq / static_cast<double>(s.trades.size())) / *s.p_star;
  const double theta_star = aa_theta_star(s.alpha, params);
  s.theta = std::clamp(s.theta + params.beta2 * (theta_star - s.theta), params.theta_min,
                       params.theta_max);
}

std::optional<Price> aa_quote(const AaState& s, const AaParams& params, Side side, Price limit,
                              const MarketSnapshot& snap) {
  if (!s.p_star) return std::nullopt;
  const double target =
      std::clamp(aa_target_real(s.r, s.theta, limit, *s.p_star, side),
                 static_cast<double>(kSysMinPrice), static_cast<double>(kSysMaxPrice));
  if (side == Side::Bid) {
    // an ask already inside the target is taken outright
    if (snap.best_ask && *snap.best_ask <= target && *snap.best_ask <= limit) return *snap.best_ask;
    const double base = snap.best_bid ? *snap.best_bid : kSysMinPrice;
    const Price p = round_half_up(base + (target - base) / params.eta);
    return std::clamp(p, kSysMinPrice, limit);
  }
  if (snap.best_bid && *snap.best_bid >= target && *snap.best_bid >= limit) return *snap.best_bid;
  const double base = snap.best_ask ? *snap.best_ask : kSysMaxPrice;
  const Price p = round_half_up(base + (target - base) / params.eta);
  return std::clamp(p, limit, kSysMaxPrice);
}

AaTrader::AaTrader(TraderId id, Side side, std::uint64_t seed, const AaParams& params)
    : Trader(id, Algo::AA, side, seed), params_(params) {
  state_.r = std::clamp(params.r_init, -1.0, 1.0);
  state_.theta = std::clamp(params.theta_init, params.theta_min, params.theta_max);
}

std::optional<Price> AaTrader::compute_price(const Assignment& a, Timestamp,
                                             const MarketSnapshot& snap) {
  if (!state_.p_star) return zic_price(a.side, a.limit, rng());
  return aa_quote(state_, params_, a.side, a.limit, snap);
}

void AaTrader::observe(Timestamp, const MarketSnapshot&, const MarketEvent& ev) {
  std::optional<Price> limit;
  if (assignment()) limit = assignment()->limit;
  aa_update(state_, params_, ev, side(), limit);
}

}  // namespace cdasim
