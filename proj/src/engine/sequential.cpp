#include "cdasim/engine/sequential.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <unordered_map>

#include "cdasim/error.hpp"
#include "cdasim/seeding.hpp"

namespace cdasim {

SessionResult run_session_sequential(const SessionConfig& cfg) {
  cfg.validate();

  const std::size_t n = cfg.roster.size();
  std::vector<std::unique_ptr<Trader>> traders;
  std::unordered_map<TraderId, std::size_t> index;
  std::vector<TraderId> ids;
  traders.reserve(n);
  for (const auto& e : cfg.roster) {
    index[e.id] = traders.size();
    ids.push_back(e.id);
    traders.push_back(make_trader(e.algo, e.id, e.side,
                                  derive_seed({cfg.seed, seed_tag::kTrader, e.id}), cfg.traders));
  }
  const std::vector<TraderId> buyers = cfg.buyers();
  const std::vector<TraderId> sellers = cfg.sellers();

  LimitOrderBook book(ids);
  std::mt19937_64 select_rng(derive_seed({cfg.seed, seed_tag::kSelect}));
  std::mt19937_64 env_rng(derive_seed({cfg.seed, seed_tag::kEnv}));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  SessionResult result;
  result.mode = EngineMode::Sequential;
  result.seed = cfg.seed;
  std::vector<TraderOutcome> outcomes(n);
  std::map<Algo, LatencyRecorder> quote_lat;
  std::map<Algo, LatencyRecorder> respond_lat;

  const auto total_polls =
      static_cast<std::uint64_t>(std::ceil(cfg.duration * static_cast<double>(n) - 1e-9));
  const double interval = cfg.schedule.replenish_interval;
  std::uint32_t next_round = 0;

  for (std::uint64_t poll = 0; poll < total_polls; ++poll) {
    const Timestamp t = static_cast<double>(poll) / static_cast<double>(n);

    const auto due = static_cast<std::uint32_t>(std::floor(t / interval + 1e-9));
    while (next_round <= due) {
      const Timestamp issue_t = next_round * interval;
      for (const auto& a :
           issue_assignments(issue_t, buyers, sellers, cfg.schedule, env_rng, next_round)) {
        book.withdraw(a.trader_id);
        traders[index.at(a.trader_id)]->assign(a);
      }
      ++next_round;
    }

    const std::size_t k = pick(select_rng);
    Trader& chosen = *traders[k];
    const MarketSnapshot before = book.snapshot(t);
    ++outcomes[k].quote_calls;
    const std::optional<Order> order =
        timed(quote_lat[chosen.algo()], [&] { return chosen.quote(t, before); });
    if (!order) continue;
    ++outcomes[k].orders_emitted;

    const SubmitOutcome outcome = book.submit_order(*order);
    if (outcome.status == SubmitStatus::Rejected) {
      throw SimError(ErrorCode::TraderFault, "exchange rejected order from trader " +
                                                 std::to_string(chosen.id()) + ": " +
                                                 std::string(to_string(*outcome.reject)));
    }
    if (outcome.trade) {
      traders[index.at(outcome.trade->buyer_id)]->on_fill(*outcome.trade);
      traders[index.at(outcome.trade->seller_id)]->on_fill(*outcome.trade);
    }

    ++result.market_changes;
    const MarketEvent ev = event_from(*order, outcome);
    const MarketSnapshot after = book.snapshot(t);
    for (std::size_t i = 0; i < n; ++i) {
      Trader& tr = *traders[i];
      ++outcomes[i].respond_calls;
      timed(respond_lat[tr.algo()], [&] { tr.respond(t, after, {&ev, 1}); });
    }
  }

  result.polls = total_polls;
  result.realized_duration = static_cast<double>(total_polls) / static_cast<double>(n);
  result.tape = book.tape();
  for (std::size_t i = 0; i < n; ++i) {
    const Trader& tr = *traders[i];
    TraderOutcome& o = outcomes[i];
    o.id = tr.id();
    o.algo = tr.algo();
    o.side = tr.side();
    o.profit = tr.balance();
    o.fills = tr.blotter();
  }
  result.traders = std::move(outcomes);
  for (auto& [algo, rec] : quote_lat) result.quote_latency[algo] = rec.stats();
  for (auto& [algo, rec] : respond_lat) result.respond_latency[algo] = rec.stats();
  compute_appt(result);
  return result;
}

}  // namespace cdasim
