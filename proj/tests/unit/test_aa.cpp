#include <gtest/gtest.h>

#include <random>

#include "cdasim/error.hpp"
#include "cdasim/traders/aa.hpp"
#include "oracles.hpp"

using namespace cdasim;

TEST(AaEstimate, Examples) {
  const std::vector<Price> one{100};
  EXPECT_DOUBLE_EQ(*aa_estimate_equilibrium(one, 0.9), 100.0);
  const std::vector<Price> two{110, 100};
  EXPECT_NEAR(*aa_estimate_equilibrium(two, 0.9), (110 + 0.9 * 100) / 1.9, 1e-12);
  EXPECT_NEAR(*aa_estimate_equilibrium(two, 0.9), 105.26, 0.005);
  EXPECT_FALSE(aa_estimate_equilibrium({}, 0.9));
}

TEST(AaEstimate, MatchesOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    std::vector<int> v(std::uniform_int_distribution<int>(1, 30)(rng));
    for (auto& x : v) x = std::uniform_int_distribution<int>(1, 500)(rng);
    const double rho = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    std::vector<Price> p(v.begin(), v.end());
    EXPECT_NEAR(*aa_estimate_equilibrium(p, rho), oracle::weighted_mean(v, rho), 1e-9);
  }
}

TEST(AaTarget, IntraMarginalBuyerEnds) {
  EXPECT_NEAR(aa_target_real(0.0, -4.0, 150, 100.0, Side::Bid), 100.0, 1e-12);
  EXPECT_NEAR(aa_target_real(1.0, -4.0, 150, 100.0, Side::Bid), 150.0, 1e-9);
  EXPECT_NEAR(aa_target_real(-1.0, -4.0, 150, 100.0, Side::Bid), 0.0, 1e-9);
  EXPECT_EQ(aa_target_price(-1.0, -4.0, 150, 100.0, Side::Bid), kSysMinPrice);
  EXPECT_EQ(aa_target_price(0.0, 1.5, 150, 100.0, Side::Bid), 100);
}

TEST(AaTarget, SellerEnds) {
  EXPECT_NEAR(aa_target_real(0.0, -4.0, 60, 100.0, Side::Ask), 100.0, 1e-12);
  EXPECT_NEAR(aa_target_real(1.0, -4.0, 60, 100.0, Side::Ask), 60.0, 1e-9);
  EXPECT_NEAR(aa_target_real(-1.0, -4.0, 60, 100.0, Side::Ask), 500.0, 1e-9);
  // extra-marginal seller never goes below its limit
  EXPECT_NEAR(aa_target_real(0.7, -4.0, 130, 100.0, Side::Ask), 130.0, 1e-12);
}

TEST(AaTarget, MissingEquilibrium) {
  try {
    aa_target_price(0.0, -4.0, 150, std::nullopt, Side::Bid);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingEquilibrium);
  }
  AaState s;
  EXPECT_FALSE(aa_quote(s, {}, Side::Bid, 100, {}));
}

TEST(AaTarget, MonotoneInAggressiveness) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Side side = rng() & 1 ? Side::Bid : Side::Ask;
    const Price limit = std::uniform_int_distribution<Price>(20, 480)(rng);
    const double p_star = std::uniform_real_distribution<double>(20, 480)(rng);
    const double theta = std::uniform_real_distribution<double>(-8, 2)(rng);
    double prev = aa_target_real(-1.0, theta, limit, p_star, side);
    for (int i = 1; i <= 200; ++i) {
      const double r = -1.0 + i / 100.0;
      const double t = aa_target_real(r, theta, limit, p_star, side);
      if (side == Side::Bid) ASSERT_GE(t + 1e-9, prev);
      else ASSERT_LE(t, prev + 1e-9);
      // never beyond the limit when acting aggressively
      if (r > 0) {
        if (side == Side::Bid) ASSERT_LE(t, limit + 1e-9);
        else ASSERT_GE(t, limit - 1e-9);
      }
      prev = t;
    }
  }
}

TEST(AaInvert, RoundTripAgainstScan) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Side side = rng() & 1 ? Side::Bid : Side::Ask;
    const Price limit = std::uniform_int_distribution<Price>(20, 480)(rng);
    const double p_star = std::uniform_real_distribution<double>(20, 480)(rng);
    const double theta = std::uniform_real_distribution<double>(-8, 2)(rng);
    auto target = [&](double r) { return aa_target_real(r, theta, limit, p_star, side); };
    const double r0 = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double price = target(r0);
    const double r = aa_invert(price, theta, limit, p_star, side);
    const double scan = oracle::invert_by_scan(target, price, 20000);
    EXPECT_NEAR(target(r), price, 1.0);
    EXPECT_NEAR(target(r), target(scan), 1.0);
  }
}

TEST(AaInvert, SaturatesOutsideRange) {
  // intra buyer: reachable targets are [0, limit]
  EXPECT_EQ(aa_invert(200.0, -4.0, 150, 100.0, Side::Bid), 1.0);
  EXPECT_EQ(aa_invert(-5.0, -4.0, 150, 100.0, Side::Bid), -1.0);
}

TEST(AaTheta, StarMap) {
  AaParams p;
  EXPECT_DOUBLE_EQ(aa_theta_star(0.0, p), p.theta_max);
  EXPECT_DOUBLE_EQ(aa_theta_star(p.alpha_max, p), p.theta_min);
  EXPECT_DOUBLE_EQ(aa_theta_star(10.0, p), p.theta_min);
  EXPECT_DOUBLE_EQ(aa_theta_star(p.alpha_max / 2, p), (p.theta_min + p.theta_max) / 2);
}

TEST(AaUpdate, AggressivenessStepArithmetic) {
  // r = 0 intra buyer sees a bid at p*; the implied r of that shout is 0, so the
  // desired level is 0 + lambda_a and one step with beta1 = 0.5 lands halfway
  AaParams p;
  p.beta1 = 0.5;
  p.lambda_r = 0.0;
  p.lambda_a = 0.4;
  AaState s;
  s.r = 0.0;
  s.theta = -4.0;
  s.p_star = 100.0;
  aa_update(s, p, {MarketEvent::Kind::Shout, Side::Bid, 100, 0.0}, Side::Bid, 150);
  EXPECT_NEAR(s.r, 0.2, 1e-9);
}

TEST(AaUpdate, MissedTradeRaisesAggressiveness) {
  AaParams p;
  AaState s;
  s.r = -0.5;
  s.p_star = 100.0;
  const double before = s.r;
  // buyer target is well below 100, so a trade at 100 was out of reach
  aa_update(s, p, {MarketEvent::Kind::Trade, Side::Ask, 100, 0.0}, Side::Bid, 150);
  EXPECT_GT(s.r, before);
  EXPECT_EQ(s.trades.size(), 1u);
}

TEST(AaUpdate, NoLimitNoAggressivenessChange) {
  AaParams p;
  AaState s;
  s.r = 0.3;
  s.p_star = 100.0;
  aa_update(s, p, {MarketEvent::Kind::Trade, Side::Ask, 120, 0.0}, Side::Bid, std::nullopt);
  EXPECT_DOUBLE_EQ(s.r, 0.3);
  EXPECT_DOUBLE_EQ(*s.p_star, 120.0);
}

TEST(AaUpdate, ConstantPricesDriveThetaToMax) {
  AaParams p;
  AaState s;
  s.theta = p.theta_init;
  for (int i = 0; i < 300; ++i) {
    aa_update(s, p, {MarketEvent::Kind::Trade, Side::Ask, 100, 0.0}, Side::Bid, std::nullopt);
  }
  EXPECT_DOUBLE_EQ(s.alpha, 0.0);
  EXPECT_NEAR(s.theta, p.theta_max, 1e-6);
  EXPECT_LE(s.trades.size(), static_cast<std::size_t>(p.window));
}

TEST(AaQuote, ImproveBestBidByOneThird) {
  AaParams p;
  p.eta = 3.0;
  AaState s;
  s.r = 0.0;
  s.p_star = 95.0;  // intra buyer at r = 0 targets p*
  MarketSnapshot snap;
  snap.best_bid = 80;
  EXPECT_EQ(*aa_quote(s, p, Side::Bid, 120, snap), 85);
}

TEST(AaQuote, ClampedAtLimit) {
  AaParams p;
  AaState s;
  s.r = 0.0;
  s.p_star = 95.0;
  MarketSnapshot snap;
  snap.best_bid = 90;  // already above this buyer's limit
  EXPECT_EQ(*aa_quote(s, p, Side::Bid, 88, snap), 88);
  snap = {};
  snap.best_ask = 80;
  EXPECT_EQ(*aa_quote(s, p, Side::Ask, 110, snap), 110);
}

TEST(AaQuote, TakesAskInsideTarget) {
  AaParams p;
  AaState s;
  s.r = 0.0;
  s.p_star = 100.0;
  MarketSnapshot snap;
  snap.best_bid = 80;
  snap.best_ask = 97;
  EXPECT_EQ(*aa_quote(s, p, Side::Bid, 120, snap), 97);
  snap.best_ask = 103;
  EXPECT_NE(*aa_quote(s, p, Side::Bid, 120, snap), 103);
}

TEST(AaTrader, ColdStartThenLearns) {
  AaTrader t(1, Side::Bid, 2, {});
  t.assign({1, Side::Bid, 130, 0.0, 0});
  const auto first = t.quote(0.0, {});
  ASSERT_TRUE(first);
  EXPECT_LE(first->price, 130);
  const MarketEvent ev{MarketEvent::Kind::Trade, Side::Ask, 100, 0.0};
  t.respond(0.0, {}, std::span<const MarketEvent>(&ev, 1));
  ASSERT_TRUE(t.state().p_star);
  EXPECT_DOUBLE_EQ(*t.state().p_star, 100.0);
}
