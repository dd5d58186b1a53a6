#include "cdasim/traders/gdx.hpp"

#include <algorithm>

namespace cdasim {

namespace {

constexpr std::size_t kBandSize = static_cast<std::size_t>(kSysMaxPrice - kSysMinPrice + 1);

// Belief at an observed price for the given side.
double belief_at_knot(std::span<const ShoutRecord> h, Price x, Side side) {
  int favourable = 0;
  int rejected = 0;
  for (const auto& r : h) {
    if (side == Side::Bid) {
      if (r.side == Side::Bid) {
        if (r.accepted && r.price <= x) ++favourable;
        if (!r.accepted && r.price >= x) ++rejected;
      } else if (r.price <= x) {
        ++favourable;
      }
    } else {
      if (r.side == Side::Ask) {
        if (r.accepted && r.price >= x) ++favourable;
        if (!r.accepted && r.price <= x) ++rejected;
      } else if (r.price >= x) {
        ++favourable;
      }
    }
  }
  const int denom = favourable + rejected;
  return denom == 0 ? 0.0 : static_cast<double>(favourable) / denom;
}

}  // namespace

void gdx_record(GdxState& s, const MarketEvent& ev) {
  if (ev.kind == MarketEvent::Kind::Shout) {
    s.history.push_back({ev.side, ev.price, false});
  } else {
    s.seen_trade = true;
    auto it = std::find_if(s.history.rbegin(), s.history.rend(), [&](const ShoutRecord& r) {
      return r.side == ev.side && r.price == ev.price && !r.accepted;
    });
    if (it != s.history.rend()) {
      it->accepted = true;
    } else {
      s.history.push_back({ev.side, ev.price, true});
    }
    s.history.push_back({opposite(ev.side), ev.price, true});
  }
  while (s.history.size() > s.capacity) s.history.pop_front();
}

std::optional<BeliefCurve> BeliefCurve::build(std::span<const ShoutRecord> history, Side side) {
  if (history.empty()) return std::nullopt;

  std::vector<Price> knots;
  knots.reserve(history.size() + 2);
  for (const auto& r : history) knots.push_back(clamp_to_band(r.price));
  knots.push_back(kSysMinPrice);
  knots.push_back(kSysMaxPrice);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<double> knot_values(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    knot_values[i] = belief_at_knot(history, knots[i], side);
  }
  // Band edges: a bid at the floor / an ask at the ceiling is never accepted,
  // and the opposite edge always is.
  knot_values.front() = side == Side::Bid ? 0.0 : 1.0;
  knot_values.back() = side == Side::Bid ? 1.0 : 0.0;

  BeliefCurve curve;
  curve.values_.resize(kBandSize);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const Price lo = knots[k];
    const Price hi = knots[k + 1];
    const double flo = knot_values[k];
    const double fhi = knot_values[k + 1];
    for (Price p = lo; p <= hi; ++p) {
      const double w = static_cast<double>(p - lo) / (hi - lo);
      curve.values_[static_cast<std::size_t>(p - kSysMinPrice)] = flo + w * (fhi - flo);
    }
  }
  return curve;
}

std::optional<double> gd_belief(std::span<const ShoutRecord> history, Price price, Side side) {
  auto curve = BeliefCurve::build(history, side);
  if (!curve) return std::nullopt;
  return curve->at(price);
}

GdxChoice gdx_optimize(Price limit, Side side, std::span<const double> belief, double gamma,
                       int n) {
  GdxChoice out;
  n = std::max(n, 1);
  out.value_table.assign(static_cast<std::size_t>(n) + 1, 0.0);

  // Candidates ordered from most to least profitable so the first maximum wins ties.
  std::vector<Price> candidates;
  if (side == Side::Bid) {
    for (Price p = kSysMinPrice; p <= std::min(limit, kSysMaxPrice); ++p) candidates.push_back(p);
  } else {
    for (Price p = kSysMaxPrice; p >= std::max(limit, kSysMinPrice); --p) candidates.push_back(p);
  }

  Price best_price = limit;
  for (int k = 1; k <= n; ++k) {
    const double carry = gamma * out.value_table[static_cast<std::size_t>(k - 1)];
    double best = -1.0;
    for (Price p : candidates) {
      const double f = belief[static_cast<std::size_t>(p - kSysMinPrice)];
      const double surplus = side == Side::Bid ? limit - p : p - limit;
      const double v = f * surplus + (1.0 - f) * carry;
      if (v > best) {
        best = v;
        best_price = p;
      }
    }
    out.value_table[static_cast<std::size_t>(k)] = std::max(best, 0.0);
  }
  out.expected_value = out.value_table.back();
  if (out.expected_value > 0.0) out.price = best_price;
  return out;
}

std::optional<GdxChoice> gdx_choose_price(Price limit, Side side, const GdxState& s, int n) {
  auto curve = BeliefCurve::build(s.history, side);
  if (!curve) return std::nullopt;
  return gdx_optimize(limit, side, curve->values(), s.gamma, n);
}

GdxTrader::GdxTrader(TraderId id, Side side, std::uint64_t seed, const GdxParams& params)
    : Trader(id, Algo::GDX, side, seed) {
  state_.capacity = static_cast<std::size_t>(std::max(params.history, 1));
  state_.gamma = params.gamma;
  state_.horizon = params.horizon;
}

int GdxTrader::remaining_opportunities() const noexcept {
  const int elapsed = static_cast<int>(assignments_received()) - 1;
  return std::max(1, state_.horizon - std::max(elapsed, 0));
}

std::optional<Price> GdxTrader::compute_price(const Assignment& a, Timestamp,
                                              const MarketSnapshot&) {
  if (!state_.seen_trade) return zic_price(a.side, a.limit, rng());
  auto choice = gdx_choose_price(a.limit, a.side, state_, remaining_opportunities());
  if (!choice) return zic_price(a.side, a.limit, rng());
  return choice->price;
}

void GdxTrader::observe(Timestamp, const MarketSnapshot&, const MarketEvent& ev) {
  gdx_record(state_, ev);
}

}  // namespace cdasim
