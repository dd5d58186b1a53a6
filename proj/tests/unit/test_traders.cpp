#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <random>

#include "cdasim/error.hpp"
#include "cdasim/traders/trader.hpp"
#include "oracles.hpp"

using namespace cdasim;

namespace {

Assignment job(TraderId id, Side side, Price limit, std::uint32_t aid = 0) {
  return Assignment{id, side, limit, 0.0, aid};
}

Transaction txn(TraderId buyer, TraderId seller, Price price, std::uint32_t ba = 0,
                std::uint32_t sa = 0) {
  Transaction t;
  t.price = price;
  t.buyer_id = buyer;
  t.seller_id = seller;
  t.buyer_assignment = ba;
  t.seller_assignment = sa;
  return t;
}

}  // namespace

TEST(Zic, DegenerateIntervals) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(zic_price(Side::Bid, kSysMinPrice, rng), kSysMinPrice);
    EXPECT_EQ(zic_price(Side::Ask, kSysMaxPrice, rng), kSysMaxPrice);
  }
}

TEST(Zic, BuyerDrawsUniformOverOneToLimit) {
  std::mt19937_64 rng(77);
  std::vector<long> counts(100, 0);
  for (int i = 0; i < 10000; ++i) {
    const Price p = zic_price(Side::Bid, 100, rng);
    ASSERT_GE(p, 1);
    ASSERT_LE(p, 100);
    ++counts[static_cast<std::size_t>(p - 1)];
  }
  const double x = oracle::chi_square_uniform(counts);
  const boost::math::chi_squared dist(99);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, x)), 0.01);
}

TEST(Zic, SellerStaysAboveLimit) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Price p = zic_price(Side::Ask, 420, rng);
    EXPECT_GE(p, 420);
    EXPECT_LE(p, kSysMaxPrice);
  }
}

TEST(Shvr, Rules) {
  MarketSnapshot s;
  s.best_bid = 90;
  EXPECT_EQ(shvr_price(Side::Bid, 100, s), 91);
  s.best_bid = 100;
  EXPECT_EQ(shvr_price(Side::Bid, 100, s), 100);
  MarketSnapshot empty;
  EXPECT_EQ(shvr_price(Side::Ask, 50, empty), kSysMaxPrice);
  EXPECT_EQ(shvr_price(Side::Bid, 50, empty), kSysMinPrice);
  s.best_ask = 70;
  EXPECT_EQ(shvr_price(Side::Ask, 50, s), 69);
  s.best_ask = 50;
  EXPECT_EQ(shvr_price(Side::Ask, 50, s), 50);
}

TEST(TraderBase, NoAssignmentNoQuote) {
  ZicTrader t(1, Side::Bid, 5);
  EXPECT_FALSE(t.quote(0.0, {}));
  EXPECT_FALSE(t.active());
}

TEST(TraderBase, QuoteCarriesAssignmentAndSequence) {
  ZicTrader t(1, Side::Bid, 5);
  t.assign(job(1, Side::Bid, 120, 3));
  const auto a = t.quote(1.0, {});
  const auto b = t.quote(2.0, {});
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->assignment_id, 3u);
  EXPECT_EQ(a->trader_id, 1u);
  EXPECT_LT(a->trader_seq, b->trader_seq);
  EXPECT_LE(a->price, 120);
}

TEST(TraderBase, FillProfitsAndDeactivation) {
  ZicTrader buyer(1, Side::Bid, 5);
  buyer.assign(job(1, Side::Bid, 100));
  buyer.on_fill(txn(1, 2, 95));
  EXPECT_EQ(buyer.balance(), 5);
  EXPECT_FALSE(buyer.active());
  EXPECT_FALSE(buyer.quote(0.0, {}));
  ASSERT_EQ(buyer.blotter().size(), 1u);
  EXPECT_EQ(buyer.blotter()[0].profit, 5);

  ZicTrader seller(2, Side::Ask, 6);
  seller.assign(job(2, Side::Ask, 50));
  seller.on_fill(txn(1, 2, 60));
  EXPECT_EQ(seller.balance(), 10);

  ZicTrader at_limit(3, Side::Ask, 6);
  at_limit.assign(job(3, Side::Ask, 60));
  at_limit.on_fill(txn(1, 3, 60));
  EXPECT_EQ(at_limit.balance(), 0);
}

TEST(TraderBase, SurplusConservedAcrossCounterparties) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Price bl = std::uniform_int_distribution<Price>(2, 500)(rng);
    const Price sl = std::uniform_int_distribution<Price>(1, bl)(rng);
    const Price px = std::uniform_int_distribution<Price>(sl, bl)(rng);
    ZicTrader b(1, Side::Bid, 1), s(2, Side::Ask, 2);
    b.assign(job(1, Side::Bid, bl));
    s.assign(job(2, Side::Ask, sl));
    const auto t = txn(1, 2, px);
    b.on_fill(t);
    s.on_fill(t);
    EXPECT_EQ(b.balance() + s.balance(), bl - sl);
  }
}

TEST(TraderBase, FillWithoutAssignmentThrows) {
  ZicTrader t(1, Side::Bid, 5);
  try {
    t.on_fill(txn(1, 2, 50));
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::FillWithoutAssignment);
  }
  t.assign(job(1, Side::Bid, 100));
  t.on_fill(txn(1, 2, 50));
  EXPECT_THROW(t.on_fill(txn(1, 2, 50)), SimError);  // already filled
}

TEST(TraderBase, LateFillBooksAgainstSupersededAssignment) {
  ZicTrader t(1, Side::Bid, 5);
  t.assign(job(1, Side::Bid, 100, 0));
  t.assign(job(1, Side::Bid, 70, 1));
  t.on_fill(txn(1, 2, 90, 0));
  EXPECT_EQ(t.balance(), 10);
  EXPECT_TRUE(t.active());  // the new assignment is untouched
}

TEST(TraderBase, WrongSideAssignmentIsAFault) {
  ZicTrader t(1, Side::Bid, 5);
  EXPECT_THROW(t.assign(job(1, Side::Ask, 100)), SimError);
}

TEST(TraderBase, FillForSomeoneElseIsAFault) {
  ZicTrader t(1, Side::Bid, 5);
  t.assign(job(1, Side::Bid, 100));
  EXPECT_THROW(t.on_fill(txn(3, 4, 50)), SimError);
}

TEST(TraderBase, ReplacementMakesNewAssignmentActive) {
  ZicTrader t(1, Side::Bid, 5);
  t.assign(job(1, Side::Bid, 100, 0));
  t.assign(job(1, Side::Bid, 80, 1));
  ASSERT_TRUE(t.assignment());
  EXPECT_EQ(t.assignment()->limit, 80);
  EXPECT_EQ(t.assignment()->assignment_id, 1u);
}

TEST(Factory, BuildsEachAlgorithm) {
  for (Algo a : kAllAlgos) {
    auto t = make_trader(a, 4, Side::Ask, 9, {});
    ASSERT_TRUE(t);
    EXPECT_EQ(t->algo(), a);
    EXPECT_EQ(t->id(), 4u);
    EXPECT_EQ(t->side(), Side::Ask);
  }
}

TEST(EventFrom, ShoutAndTrade) {
  Order o;
  o.side = Side::Bid;
  o.price = 101;
  o.submit_time = 3.0;
  SubmitOutcome rest;
  rest.status = SubmitStatus::Rested;
  auto ev = event_from(o, rest);
  EXPECT_EQ(ev.kind, MarketEvent::Kind::Shout);
  EXPECT_EQ(ev.side, Side::Bid);
  EXPECT_EQ(ev.price, 101);

  SubmitOutcome traded;
  traded.status = SubmitStatus::Traded;
  Transaction t;
  t.price = 97;
  t.resting_side = Side::Ask;
  t.time = 3.0;
  traded.trade = t;
  ev = event_from(o, traded);
  EXPECT_EQ(ev.kind, MarketEvent::Kind::Trade);
  EXPECT_EQ(ev.side, Side::Ask);
  EXPECT_EQ(ev.price, 97);
}

TEST(Types, ParseAndRound) {
  EXPECT_EQ(parse_algo("aa"), Algo::AA);
  EXPECT_EQ(parse_algo("Gd"), Algo::GDX);
  EXPECT_EQ(parse_algo("GDX"), Algo::GDX);
  EXPECT_EQ(parse_algo("zip"), Algo::ZIP);
  EXPECT_FALSE(parse_algo("XYZ"));
  EXPECT_EQ(round_half_up(2.5), 3);
  EXPECT_EQ(round_half_up(2.4999), 2);
  EXPECT_EQ(round_half_up(-0.5), 0);
  EXPECT_EQ(clamp_to_band(0), kSysMinPrice);
  EXPECT_EQ(clamp_to_band(900), kSysMaxPrice);
}
