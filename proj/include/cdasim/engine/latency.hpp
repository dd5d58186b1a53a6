#pragma once

#include <array>
#include <chrono>
#include <cstdint>

namespace cdasim {

struct LatencyStats {
  std::uint64_t calls{0};
  double mean_us{0.0};
  double p99_us{0.0};
};

// Log-bucketed histogram of call durations (16 buckets per power of two, so
// the reported p99 is the upper edge of a bucket about 4% wide).
class LatencyRecorder {
 public:
  void add(std::chrono::nanoseconds d) noexcept;
  void merge(const LatencyRecorder& other) noexcept;
  LatencyStats stats() const noexcept;
  std::uint64_t count() const noexcept { return count_; }

 private:
  static constexpr std::size_t kBuckets = 16 * 48;
  std::uint64_t count_{0};
  long double sum_ns_{0};
  std::array<std::uint64_t, kBuckets> buckets_{};
};

// Times a callable and records its duration.
template <class F>
decltype(auto) timed(LatencyRecorder& rec, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  struct Stop {
    LatencyRecorder& rec;
    std::chrono::steady_clock::time_point start;
    ~Stop() { rec.add(std::chrono::steady_clock::now() - start); }
  } stop{rec, start};
  return f();
}

}  // namespace cdasim
