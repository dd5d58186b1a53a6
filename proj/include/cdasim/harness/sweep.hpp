#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cdasim/engine/session.hpp"
#include "cdasim/harness/scoring.hpp"

namespace cdasim {

struct SessionRecord {
  int ratio_a{0};
  int ratio_b{0};
  int trial{0};
  std::uint64_t seed{0};
  double appt_a{0.0};
  double appt_b{0.0};
  Winner winner{Winner::Tie};
};

struct RatioResult {
  int ratio_a{0};
  int ratio_b{0};
  int wins_a{0};
  int wins_b{0};
  int ties{0};

  int delta() const noexcept { return wins_a - wins_b; }
  int sessions() const noexcept { return wins_a + wins_b + ties; }
  bool operator==(const RatioResult&) const = default;
};

struct SweepTotals {
  long wins_a{0};
  long wins_b{0};
  long ties{0};
  long delta() const noexcept { return wins_a - wins_b; }
};

struct SweepConfig {
  Algo algo_a{Algo::AA};
  Algo algo_b{Algo::ZIC};
  int n_per_ratio{500};
  int per_side{20};
  EngineMode mode{EngineMode::Sequential};
  // Template for every session: duration, schedule, trader parameters and the
  // threaded knobs. Roster and seed are filled in per session.
  ThreadedConfig engine{};
  std::uint64_t master_seed{1};
  // Counts of algo_a traders per side; empty means 1 .. per_side - 1.
  std::vector<int> ratios;
  // Worker threads for independent sessions; 0 picks hardware concurrency for
  // sequential sweeps and 1 for threaded ones.
  unsigned jobs{0};

  // Called once per completed session (serialized; any thread).
  std::function<void(const SessionRecord&, const SessionResult&)> on_session;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct SweepResult {
  Algo algo_a{Algo::AA};
  Algo algo_b{Algo::ZIC};
  EngineMode mode{EngineMode::Sequential};
  int n_per_ratio{0};
  std::vector<RatioResult> ratios;
  std::vector<SessionRecord> sessions;  // sorted by (ratio_a, trial)
  std::size_t excluded{0};
  std::vector<std::string> exclusion_errors;
  // Provenance.
  std::uint64_t master_seed{0};
  std::string parallelism;
  std::map<Algo, double> delay_ms;
  std::string timestamp;

  SweepTotals totals() const;
};

// a A-traders and per_side - a B-traders on each side. The algorithm that sorts
// first always takes the lowest trader ids, so (A, B, a) and (B, A, per_side - a)
// produce identical rosters.
std::vector<RosterEntry> build_roster(Algo a, Algo b, int count_a, int per_side);

// Per-session seed; label-symmetric in the same way as build_roster.
std::uint64_t session_seed(std::uint64_t master, Algo a, Algo b, int count_a, int per_side,
                           int trial);

// Runs one session through the configured engine.
SessionResult run_session(EngineMode mode, const ThreadedConfig& cfg);

// Full ratio sweep. Failed sessions are excluded and counted, not fatal.
SweepResult run_sweep(const SweepConfig& cfg);

// Rebuilds the per-ratio table from per-session records.
std::vector<RatioResult> aggregate(const std::vector<SessionRecord>& sessions);

}  // namespace cdasim
