#include "cdasim/engine/latency.hpp"

#include <algorithm>
#include <cmath>

namespace cdasim {

void LatencyRecorder::add(std::chrono::nanoseconds d) noexcept {
  const double ns = std::max<double>(1.0, static_cast<double>(d.count()));
  auto idx = static_cast<std::size_t>(std::log2(ns) * 16.0);
  if (idx >= kBuckets) idx = kBuckets - 1;
  ++buckets_[idx];
  ++count_;
  sum_ns_ += ns;
}

void LatencyRecorder::merge(const LatencyRecorder& other) noexcept {
  for (std::size_t i = 0; i < kBuckets; ++i) buckets_[i] += other.buckets_[i];
  count_ += other.count_;
  sum_ns_ += other.sum_ns_;
}

LatencyStats LatencyRecorder::stats() const noexcept {
  LatencyStats s;
  s.calls = count_;
  if (count_ == 0) return s;
  s.mean_us = static_cast<double>(sum_ns_ / count_) / 1000.0;
  const auto rank = static_cast<std::uint64_t>(std::ceil(0.99 * static_cast<double>(count_)));
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < kBuckets; ++i) {
    seen += buckets_[i];
    if (seen >= rank) {
      s.p99_us = std::exp2(static_cast<double>(i + 1) / 16.0) / 1000.0;
      break;
    }
  }
  return s;
}

}  // namespace cdasim
