#include "cdasim/engine/threaded.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "cdasim/error.hpp"
#include "cdasim/seeding.hpp"

namespace cdasim {

namespace {

using Clock = std::chrono::steady_clock;

void spin_for(double ms) {
  const auto until = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double, std::milli>(ms));
  while (Clock::now() < until) {
  }
}

// Tracks whether this thread currently owns the compute token.
struct TokenHold {
  ComputeToken* token{nullptr};
  bool held{false};
  ~TokenHold() {
    if (token && held) token->release();
  }
};

thread_local TokenHold* t_hold = nullptr;

}  // namespace

// ---- exchange -----------------------------------------------------------

ExchangeWorker::ExchangeWorker(std::span<const TraderId> ids, FeedMap feeds, MarketDataBus& bus)
    : book_(ids), feeds_(std::move(feeds)), bus_(bus) {
  for (TraderId id : ids) state_[id];
}

void ExchangeWorker::reject(const Order& o, RejectReason r) {
  ++rejected_;
  if (r == RejectReason::Stale) ++stale_;
  if (auto it = feeds_.find(o.trader_id); it != feeds_.end() && it->second) {
    it->second->push(Rejection{o, r});
  }
}

void ExchangeWorker::process(const ExchangeMessage& msg, Timestamp now) {
  ++processed_;
  if (const auto* w = std::get_if<WithdrawRequest>(&msg)) {
    auto it = state_.find(w->trader_id);
    if (it == state_.end()) return;
    it->second.min_assignment = std::max(it->second.min_assignment, w->assignment_id);
    if (book_.withdraw(w->trader_id)) bus_.publish(std::nullopt, book_.snapshot(now));
    return;
  }

  Order o = std::get<Order>(msg);
  auto it = state_.find(o.trader_id);
  if (it == state_.end()) {
    reject(o, RejectReason::UnknownTrader);
    return;
  }
  PerTrader& st = it->second;
  if (st.last_seq && o.trader_seq <= *st.last_seq) ++fifo_violations_;
  st.last_seq = o.trader_seq;

  if (o.assignment_id < st.min_assignment || (st.filled && *st.filled == o.assignment_id)) {
    reject(o, RejectReason::Stale);
    return;
  }

  o.submit_time = now;
  const SubmitOutcome out = book_.submit_order(o);
  if (out.status == SubmitStatus::Rejected) {
    reject(o, *out.reject);
    return;
  }
  if (out.trade) {
    const Transaction& t = *out.trade;
    state_[t.buyer_id].filled = t.buyer_assignment;
    state_[t.seller_id].filled = t.seller_assignment;
    if (auto* f = feeds_[t.buyer_id]) f->push(t);
    if (auto* f = feeds_[t.seller_id]) f->push(t);
  }
  ++market_changes_;
  bus_.publish(event_from(o, out), book_.snapshot(now));
}

void ExchangeWorker::run(BoundedQueue<ExchangeMessage>& queue, const SessionClock& clock) {
  while (auto msg = queue.pop()) process(*msg, clock.now());
}

// ---- trader -------------------------------------------------------------

TraderWorker::TraderWorker(std::unique_ptr<Trader> trader, TraderFeed& feed,
                           const MarketDataBus& bus, BoundedQueue<ExchangeMessage>& queue,
                           DelaySpec delay, ComputeToken* token, std::size_t max_events)
    : trader_(std::move(trader)),
      feed_(feed),
      bus_(bus),
      queue_(queue),
      delay_(delay),
      token_(token),
      max_events_(max_events == 0 ? 1 : max_events) {
  outcome_.id = trader_->id();
  outcome_.algo = trader_->algo();
  outcome_.side = trader_->side();
}

bool TraderWorker::inject_delay() {
  if (delay_.ms <= 0.0) return true;
  if (token_) {
    // Holding the token: burn the delay in short slices and let waiters in between.
    double left = delay_.ms;
    const double slice = delay_.slice_ms > 0.0 ? delay_.slice_ms : left;
    while (left > 0.0) {
      const double d = std::min(slice, left);
      spin_for(d);
      left -= d;
      if (left > 0.0 && token_->has_waiters()) {
        t_hold->held = false;
        if (!token_->yield()) return false;
        t_hold->held = true;
      }
    }
    return true;
  }
  if (delay_.kind == DelayKind::Spin) {
    spin_for(delay_.ms);
  } else {
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay_.ms));
  }
  return true;
}

void TraderWorker::drain_feed() {
  inbox_.clear();
  feed_.drain(inbox_);
  for (const auto& item : inbox_) {
    if (const auto* a = std::get_if<Assignment>(&item)) {
      trader_->assign(*a);
    } else if (const auto* t = std::get_if<Transaction>(&item)) {
      trader_->on_fill(*t);
    } else {
      ++rejections_;
    }
  }
}

TraderWorker::StepResult TraderWorker::step(const SessionClock& clock) {
  TokenHold hold{token_, false};
  t_hold = &hold;
  if (token_) {
    if (!token_->acquire()) return StepResult::Stopped;
    hold.held = true;
  }

  // 1. private messages: assignments, fills, rejections
  drain_feed();
  const bool had_mail = !inbox_.empty();

  // 2. respond to public data
  events_.clear();
  const auto read = bus_.read(cursor_, max_events_, events_);
  skipped_ += read.skipped;
  bool ok = true;
  ++outcome_.respond_calls;
  timed(respond_lat_, [&] {
    trader_->respond(clock.now(), *read.snapshot, events_);
    ok = inject_delay();
  });
  if (!ok) return StepResult::Stopped;

  // 3. quote
  std::optional<Order> order;
  ++outcome_.quote_calls;
  timed(quote_lat_, [&] {
    order = trader_->quote(clock.now(), *read.snapshot);
    ok = inject_delay();
  });
  if (!ok) return StepResult::Stopped;

  if (hold.held) {
    token_->release();
    hold.held = false;
  }

  // 4. send
  if (order) {
    if (!queue_.push(*order)) return StepResult::Stopped;
    ++outcome_.orders_emitted;
  }
  ++outcome_.iterations;
  return order || had_mail || !events_.empty() ? StepResult::Continue : StepResult::Idle;
}

void TraderWorker::run(const SessionClock& clock, const std::atomic<bool>& stop) {
  while (!stop.load(std::memory_order_acquire)) {
    const StepResult r = step(clock);
    if (r == StepResult::Stopped) break;
    if (r == StepResult::Idle) std::this_thread::sleep_for(std::chrono::microseconds(100));
  }
}

// ---- session ------------------------------------------------------------

std::string host_descriptor() {
  char name[256] = {};
  if (gethostname(name, sizeof name - 1) != 0) std::snprintf(name, sizeof name, "unknown");
  return fmt::format("{} ({} hw threads)", name, std::thread::hardware_concurrency());
}

SessionResult run_session_threaded(const ThreadedConfig& cfg) {
  cfg.validate();
  const SessionConfig& sc = cfg.session;
  const std::size_t n = sc.roster.size();

  std::vector<TraderId> ids;
  std::vector<std::unique_ptr<TraderFeed>> feeds;
  FeedMap feed_map;
  for (const auto& e : sc.roster) {
    ids.push_back(e.id);
    feeds.push_back(std::make_unique<TraderFeed>());
    feed_map[e.id] = feeds.back().get();
  }

  MarketDataBus bus;
  BoundedQueue<ExchangeMessage> queue(cfg.queue_capacity);
  ComputeToken token;
  ComputeToken* token_ptr = cfg.parallelism == Parallelism::Serialized ? &token : nullptr;

  std::vector<std::unique_ptr<TraderWorker>> workers;
  workers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = sc.roster[i];
    auto tr = make_trader(e.algo, e.id, e.side, derive_seed({sc.seed, seed_tag::kTrader, e.id}),
                          sc.traders);
    DelaySpec d{cfg.delay_for(e), cfg.delay_kind, cfg.slice_ms};
    workers.push_back(std::make_unique<TraderWorker>(std::move(tr), *feeds[i], bus, queue, d,
                                                     token_ptr, cfg.max_events_per_respond));
  }
  ExchangeWorker exchange(ids, feed_map, bus);

  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable cv;
  std::size_t traders_done = 0;
  std::vector<std::string> errors;

  auto fail = [&](std::string what) {
    std::lock_guard lock(mu);
    errors.push_back(std::move(what));
    cv.notify_all();
  };

  const SessionClock clock(cfg.time_scale);

  std::thread exchange_thread([&] {
    try {
      exchange.run(queue, clock);
    } catch (const std::exception& e) {
      fail(fmt::format("exchange: {}", e.what()));
      queue.close();
      while (queue.pop()) {
      }
    }
  });

  std::vector<std::thread> trader_threads;
  trader_threads.reserve(n);
  for (auto& w : workers) {
    trader_threads.emplace_back([&, wp = w.get()] {
      try {
        wp->run(clock, stop);
      } catch (const std::exception& e) {
        fail(fmt::format("trader {}: {}", wp->trader().id(), e.what()));
      }
      std::lock_guard lock(mu);
      ++traders_done;
      cv.notify_all();
    });
  }

  // Coordinator: replenish on the wall-clock schedule until the deadline.
  const std::vector<TraderId> buyers = sc.buyers();
  const std::vector<TraderId> sellers = sc.sellers();
  std::mt19937_64 env_rng(derive_seed({sc.seed, seed_tag::kEnv}));
  const double interval = sc.schedule.replenish_interval;
  const double wall_interval = interval / cfg.time_scale;
  const auto deadline = clock.at_wall(cfg.wall_duration);
  for (std::uint32_t k = 0; k * wall_interval < cfg.wall_duration; ++k) {
    {
      std::unique_lock lock(mu);
      if (cv.wait_until(lock, clock.at_wall(k * wall_interval), [&] { return !errors.empty(); })) {
        break;
      }
    }
    for (const auto& a : issue_assignments(k * interval, buyers, sellers, sc.schedule, env_rng, k)) {
      queue.push(WithdrawRequest{a.trader_id, a.assignment_id});
      feed_map[a.trader_id]->push(a);
    }
  }
  {
    std::unique_lock lock(mu);
    cv.wait_until(lock, deadline, [&] { return !errors.empty(); });
  }
  const Timestamp stop_time = clock.now();
  stop.store(true, std::memory_order_release);
  token.shutdown();

  bool timed_out = false;
  {
    std::unique_lock lock(mu);
    const auto limit = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(cfg.drain_timeout));
    timed_out = !cv.wait_until(lock, limit, [&] { return traders_done == n; });
  }
  queue.close();
  for (auto& t : trader_threads) t.join();
  exchange_thread.join();

  SessionResult result;
  result.mode = EngineMode::Threaded;
  result.seed = sc.seed;
  result.parallelism = std::string(to_string(cfg.parallelism));
  result.host = host_descriptor();
  for (const auto& e : sc.roster) result.delay_ms[e.algo] = cfg.delay_for(e);
  if (timed_out) {
    errors.push_back(fmt::format("{}: trader activities still running {} s after the deadline",
                                 to_string(ErrorCode::JoinTimeout), cfg.drain_timeout));
  }

  // Fills the exchange produced after a trader stopped looping still belong to it.
  for (auto& w : workers) {
    try {
      w->drain_feed();
    } catch (const std::exception& e) {
      errors.push_back(fmt::format("trader {}: {}", w->trader().id(), e.what()));
    }
  }

  result.tape = exchange.book().tape();
  result.market_changes = exchange.market_changes();
  result.rejected_orders = exchange.rejected();
  result.stale_orders = exchange.stale();
  result.fifo_violations = exchange.fifo_violations();
  result.realized_duration = stop_time;

  std::map<Algo, LatencyRecorder> quote_lat;
  std::map<Algo, LatencyRecorder> respond_lat;
  for (auto& w : workers) {
    const Trader& tr = w->trader();
    TraderOutcome o = w->outcome();
    o.profit = tr.balance();
    o.fills = tr.blotter();
    result.traders.push_back(std::move(o));
    quote_lat[tr.algo()].merge(w->quote_latency());
    respond_lat[tr.algo()].merge(w->respond_latency());
  }
  for (auto& [algo, rec] : quote_lat) result.quote_latency[algo] = rec.stats();
  for (auto& [algo, rec] : respond_lat) result.respond_latency[algo] = rec.stats();
  compute_appt(result);

  if (!errors.empty()) {
    result.valid = false;
    result.error = errors.front();
    for (std::size_t i = 1; i < errors.size(); ++i) result.error += "; " + errors[i];
  }
  return result;
}

}  // namespace cdasim
