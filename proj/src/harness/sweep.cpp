#include "cdasim/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "cdasim/engine/sequential.hpp"
#include "cdasim/engine/threaded.hpp"
#include "cdasim/error.hpp"
#include "cdasim/seeding.hpp"

namespace cdasim {

SweepTotals SweepResult::totals() const {
  SweepTotals t;
  for (const auto& r : ratios) {
    t.wins_a += r.wins_a;
    t.wins_b += r.wins_b;
    t.ties += r.ties;
  }
  return t;
}

std::vector<RosterEntry> build_roster(Algo a, Algo b, int count_a, int per_side) {
  if (count_a < 0 || count_a > per_side || per_side < 1) {
    throw SimError(ErrorCode::ConfigInvalid, "ratio outside 0.." + std::to_string(per_side));
  }
  const bool a_first = a <= b;
  const Algo first = a_first ? a : b;
  const Algo second = a_first ? b : a;
  const int count_first = a_first ? count_a : per_side - count_a;

  std::vector<RosterEntry> roster;
  roster.reserve(static_cast<std::size_t>(2 * per_side));
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < per_side; ++i) {
      RosterEntry e;
      e.id = static_cast<TraderId>(side * per_side + i);
      e.side = side == 0 ? Side::Bid : Side::Ask;
      e.algo = i < count_first ? first : second;
      roster.push_back(e);
    }
  }
  return roster;
}

std::uint64_t session_seed(std::uint64_t master, Algo a, Algo b, int count_a, int per_side,
                           int trial) {
  const int count_first = a <= b ? count_a : per_side - count_a;
  return derive_seed({master, static_cast<std::uint64_t>(count_first),
                      static_cast<std::uint64_t>(trial)});
}

SessionResult run_session(EngineMode mode, const ThreadedConfig& cfg) {
  if (mode == EngineMode::Sequential) return run_session_sequential(cfg.session);
  return run_session_threaded(cfg);
}

std::vector<RatioResult> aggregate(const std::vector<SessionRecord>& sessions) {
  std::map<std::pair<int, int>, RatioResult> by_ratio;
  for (const auto& s : sessions) {
    auto& r = by_ratio[{s.ratio_a, s.ratio_b}];
    r.ratio_a = s.ratio_a;
    r.ratio_b = s.ratio_b;
    switch (s.winner) {
      case Winner::A: ++r.wins_a; break;
      case Winner::B: ++r.wins_b; break;
      case Winner::Tie: ++r.ties; break;
    }
  }
  std::vector<RatioResult> out;
  out.reserve(by_ratio.size());
  for (auto& [key, r] : by_ratio) out.push_back(r);
  return out;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.n_per_ratio < 0) throw SimError(ErrorCode::ConfigInvalid, "n_per_ratio must be >= 0");
  if (cfg.per_side < 2) throw SimError(ErrorCode::ConfigInvalid, "per_side must be >= 2");

  std::vector<int> ratios = cfg.ratios;
  if (ratios.empty()) {
    for (int a = 1; a < cfg.per_side; ++a) ratios.push_back(a);
  }
  for (int a : ratios) {
    if (a < 1 || a >= cfg.per_side) {
      throw SimError(ErrorCode::ConfigInvalid, "ratio " + std::to_string(a) + " out of range");
    }
  }
  std::sort(ratios.begin(), ratios.end());

  struct Task {
    int ratio_a;
    int trial;
  };
  std::vector<Task> tasks;
  for (int a : ratios)
    for (int t = 0; t < cfg.n_per_ratio; ++t) tasks.push_back({a, t});

  SweepResult out;
  out.algo_a = cfg.algo_a;
  out.algo_b = cfg.algo_b;
  out.mode = cfg.mode;
  out.n_per_ratio = cfg.n_per_ratio;
  out.master_seed = cfg.master_seed;
  out.timestamp = utc_timestamp();
  if (cfg.mode == EngineMode::Threaded) {
    out.parallelism = std::string(to_string(cfg.engine.parallelism));
    out.delay_ms = cfg.engine.delay_ms;
  }

  std::vector<std::optional<SessionRecord>> records(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex callback_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      ThreadedConfig session_cfg = cfg.engine;
      session_cfg.session.schedule.n_per_side = cfg.per_side;
      session_cfg.session.roster = build_roster(cfg.algo_a, cfg.algo_b, task.ratio_a, cfg.per_side);
      session_cfg.session.seed = session_seed(cfg.master_seed, cfg.algo_a, cfg.algo_b,
                                              task.ratio_a, cfg.per_side, task.trial);
      try {
        SessionResult result = run_session(cfg.mode, session_cfg);
        if (!result.valid) throw SimError(ErrorCode::JoinTimeout, result.error);
        SessionRecord rec;
        rec.ratio_a = task.ratio_a;
        rec.ratio_b = cfg.per_side - task.ratio_a;
        rec.trial = task.trial;
        rec.seed = session_cfg.session.seed;
        rec.appt_a = appt(result, cfg.algo_a);
        rec.appt_b = appt(result, cfg.algo_b);
        rec.winner = score_session(result, cfg.algo_a, cfg.algo_b);
        records[i] = rec;
        if (cfg.on_session) {
          std::lock_guard lock(callback_mutex);
          cfg.on_session(rec, result);
        }
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      const std::size_t finished = ++done;
      if (cfg.progress) {
        std::lock_guard lock(callback_mutex);
        cfg.progress(finished, tasks.size());
      }
    }
  };

  unsigned jobs = cfg.jobs;
  if (jobs == 0) {
    jobs = cfg.mode == EngineMode::Threaded ? 1u : std::max(1u, std::thread::hardware_concurrency());
  }
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (records[i]) {
      out.sessions.push_back(*records[i]);
    } else {
      ++out.excluded;
      out.exclusion_errors.push_back(errors[i]);
    }
  }

  // Every requested ratio gets a row, even if all its sessions were excluded.
  std::map<int, RatioResult> rows;
  for (int a : ratios) rows[a] = RatioResult{a, cfg.per_side - a, 0, 0, 0};
  if (cfg.n_per_ratio > 0) {
    for (const auto& r : aggregate(out.sessions)) rows[r.ratio_a] = r;
    for (auto& [a, r] : rows) out.ratios.push_back(r);
  }
  return out;
}

}  // namespace cdasim
