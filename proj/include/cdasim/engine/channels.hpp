#pragma once

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "cdasim/exchange/order_book.hpp"
#include "cdasim/traders/trader.hpp"

namespace cdasim {

// Bounded many-producer / one-consumer FIFO. push blocks while full; after
// close() pushes fail and pop drains what is left, then returns nullopt.
template <class T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  bool push(T item) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(item));
    high_water_ = std::max(high_water_, items_.size());
    not_empty_.notify_one();
    return true;
  }

  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_full_.notify_all();
    not_empty_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t high_water() const {
    std::lock_guard lock(mu_);
    return high_water_;
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<T> items_;
  std::size_t capacity_;
  std::size_t high_water_{0};
  bool closed_{false};
};

// Exchange -> trader notice that an order was refused.
struct Rejection {
  Order order;
  RejectReason reason{RejectReason::Stale};
};

// Coordinator -> exchange: drop the trader's resting order and refuse any
// order quoted for an assignment older than `assignment_id`.
struct WithdrawRequest {
  TraderId trader_id{0};
  std::uint32_t assignment_id{0};
};

using ExchangeMessage = std::variant<Order, WithdrawRequest>;
using FeedItem = std::variant<Assignment, Transaction, Rejection>;

// Per-trader private inbox: fills and rejections from the exchange,
// assignments from the coordinator. Never blocks the producer.
class TraderFeed {
 public:
  void push(FeedItem item) {
    std::lock_guard lock(mu_);
    items_.push_back(std::move(item));
  }
  // Moves everything queued so far into `out` (appending), in arrival order.
  std::size_t drain(std::vector<FeedItem>& out) {
    std::lock_guard lock(mu_);
    const std::size_t n = items_.size();
    for (auto& it : items_) out.push_back(std::move(it));
    items_.clear();
    return n;
  }
  bool empty() const {
    std::lock_guard lock(mu_);
    return items_.empty();
  }

 private:
  mutable std::mutex mu_;
  std::deque<FeedItem> items_;
};

// Public market data: a ring of recent events plus the latest snapshot.
// Each reader keeps its own cursor (the sequence number of the next event).
class MarketDataBus {
 public:
  explicit MarketDataBus(std::size_t ring = 4096) : ring_(ring == 0 ? 1 : ring) {
    snap_ = std::make_shared<const MarketSnapshot>();
  }

  void publish(std::optional<MarketEvent> ev, MarketSnapshot snap) {
    auto s = std::make_shared<const MarketSnapshot>(std::move(snap));
    std::lock_guard lock(mu_);
    if (ev) {
      ring_[next_ % ring_.size()] = *ev;
      ++next_;
    }
    snap_ = std::move(s);
  }

  struct Read {
    std::shared_ptr<const MarketSnapshot> snapshot;
    std::uint64_t skipped{0};  // events overwritten before this reader got to them
  };

  // Appends up to `max` events after `cursor` to `out` and advances the cursor.
  Read read(std::uint64_t& cursor, std::size_t max, std::vector<MarketEvent>& out) const {
    std::lock_guard lock(mu_);
    Read r;
    const std::uint64_t oldest = next_ > ring_.size() ? next_ - ring_.size() : 0;
    if (cursor < oldest) {
      r.skipped = oldest - cursor;
      cursor = oldest;
    }
    for (std::size_t k = 0; k < max && cursor < next_; ++k, ++cursor) {
      out.push_back(ring_[cursor % ring_.size()]);
    }
    r.snapshot = snap_;
    return r;
  }

  std::uint64_t published() const {
    std::lock_guard lock(mu_);
    return next_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<MarketEvent> ring_;
  std::uint64_t next_{0};
  std::shared_ptr<const MarketSnapshot> snap_;
};

// Fair FIFO handoff used by Serialized parallelism: at most one holder, and
// waiters are served in arrival order. shutdown() wakes everyone and makes
// further acquires fail.
class ComputeToken {
 public:
  bool acquire() {
    std::unique_lock lock(mu_);
    if (shut_) return false;
    if (!held_ && waiters_.empty()) {
      held_ = true;
      return true;
    }
    Waiter w;
    waiters_.push_back(&w);
    w.cv.wait(lock, [&] { return w.granted || shut_; });
    if (!w.granted) {
      std::erase(waiters_, &w);
      return false;
    }
    return true;
  }

  void release() {
    std::lock_guard lock(mu_);
    hand_off();
  }

  // Passes the token on if anyone is waiting, then queues up again.
  bool yield() {
    {
      std::lock_guard lock(mu_);
      if (waiters_.empty()) return true;
      hand_off();
    }
    return acquire();
  }

  bool has_waiters() const {
    std::lock_guard lock(mu_);
    return !waiters_.empty();
  }

  void shutdown() {
    std::lock_guard lock(mu_);
    shut_ = true;
    for (Waiter* w : waiters_) w->cv.notify_one();
  }

 private:
  struct Waiter {
    std::condition_variable cv;
    bool granted{false};
  };

  void hand_off() {
    if (waiters_.empty()) {
      held_ = false;
      return;
    }
    Waiter* w = waiters_.front();
    waiters_.pop_front();
    w->granted = true;  // held_ stays true: ownership moves directly
    w->cv.notify_one();
  }

  mutable std::mutex mu_;
  std::deque<Waiter*> waiters_;
  bool held_{false};
  bool shut_{false};
};

}  // namespace cdasim
