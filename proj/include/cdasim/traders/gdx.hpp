#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "cdasim/traders/trader.hpp"

namespace cdasim {

// A shout seen on the market and whether it was accepted. Shouts that are still
// resting or were replaced count as rejected.
struct ShoutRecord {
  Side side{Side::Bid};
  Price price{0};
  bool accepted{false};
};

struct GdxState {
  std::deque<ShoutRecord> history;
  std::size_t capacity{30};
  double gamma{0.9};
  int horizon{10};
  bool seen_trade{false};
};

// Appends a shout, or for a trade marks the resting shout accepted and records
// the accepting side at the trade price. Keeps the most recent `capacity` records.
void gdx_record(GdxState& s, const MarketEvent& ev);

// Belief that a quote at each band price would be accepted, linearly
// interpolated between observed prices and pinned at the band edges.
// Buyer at b: (TBL + AL) / (TBL + AL + RBG); seller mirrored.
class BeliefCurve {
 public:
  // nullopt when the history is empty (cold start).
  static std::optional<BeliefCurve> build(std::span<const ShoutRecord> history, Side side);
  template <class Range>
  static std::optional<BeliefCurve> build(const Range& history, Side side) {
    std::vector<ShoutRecord> v(history.begin(), history.end());
    return build(std::span<const ShoutRecord>(v), side);
  }

  double at(Price p) const { return values_[static_cast<std::size_t>(clamp_to_band(p) - kSysMinPrice)]; }
  // Indexed by price - SYS_MIN.
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

// Raw belief at an arbitrary price; nullopt signals cold start.
std::optional<double> gd_belief(std::span<const ShoutRecord> history, Price price, Side side);

struct GdxChoice {
  std::optional<Price> price;  // nullopt: abstain (expected value 0)
  double expected_value{0.0};
  std::vector<double> value_table;  // V[0..n]
};

// V(k) = max_p [ f(p) s(p) + (1 - f(p)) gamma V(k-1) ], V(0) = 0, over every
// integer price between the band edge and the limit. `belief` is indexed by price - SYS_MIN.
// Returns the argmax for k = n; ties go to the most profitable price.
GdxChoice gdx_optimize(Price limit, Side side, std::span<const double> belief, double gamma, int n);

// nullopt when the history is empty (cold start).
std::optional<GdxChoice> gdx_choose_price(Price limit, Side side, const GdxState& s, int n);

class GdxTrader final : public Trader {
 public:
  GdxTrader(TraderId id, Side side, std::uint64_t seed, const GdxParams& params);

  const GdxState& state() const noexcept { return state_; }
  int remaining_opportunities() const noexcept;

 protected:
  std::optional<Price> compute_price(const Assignment& a, Timestamp now,
                                     const MarketSnapshot& snap) override;
  void observe(Timestamp now, const MarketSnapshot& snap, const MarketEvent& ev) override;

 private:
  GdxState state_;
};

}  // namespace cdasim
