// cdasim: run one session, a ratio sweep, or re-aggregate a detail CSV.
#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "cdasim/engine/threaded.hpp"
#include "cdasim/error.hpp"
#include "cdasim/harness/config.hpp"
#include "cdasim/harness/csv.hpp"
#include "cdasim/harness/sweep.hpp"

namespace {

using namespace cdasim;

struct CommonFlags {
  std::string config;
  std::optional<std::string> mode;
  std::optional<std::string> algos;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> duration;
  // threaded knobs
  std::optional<double> wall_duration;
  std::optional<double> time_scale;
  std::optional<std::string> parallelism;
  std::optional<std::string> delay_kind;
  std::optional<std::size_t> queue_capacity;
  std::vector<std::string> delays;  // ALGO=ms
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "key=value config file")->check(CLI::ExistingFile);
  app->add_option("--mode", f.mode, "seq | threaded");
  app->add_option("--algos", f.algos, "algorithm pair, e.g. AA,ZIC");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--duration", f.duration, "virtual session length in seconds");
  app->add_option("--wall-duration", f.wall_duration, "threaded: wall seconds per session");
  app->add_option("--time-scale", f.time_scale, "threaded: virtual seconds per wall second");
  app->add_option("--parallelism", f.parallelism, "threaded: serialized | full");
  app->add_option("--delay-kind", f.delay_kind, "threaded: sleep | spin");
  app->add_option("--queue-capacity", f.queue_capacity, "threaded: order queue bound");
  app->add_option("--delay", f.delays, "threaded: injected delay ALGO=ms (repeatable)");
}

[[noreturn]] void usage(const std::string& msg) {
  throw CLI::ValidationError(msg);
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.config.empty()) {
    // Same default as the config loader: one offset cycle per session.
    cfg.sweep.engine.session.schedule.offset.wavelength = cfg.sweep.engine.session.duration;
  }
  auto& sw = cfg.sweep;
  if (f.mode) {
    auto m = parse_engine_mode(*f.mode);
    if (!m) usage("--mode must be seq or threaded");
    sw.mode = *m;
  }
  if (f.algos) {
    const auto comma = f.algos->find(',');
    if (comma == std::string::npos) usage("--algos expects two names, e.g. AA,ZIC");
    auto a = parse_algo(f.algos->substr(0, comma));
    auto b = parse_algo(f.algos->substr(comma + 1));
    if (!a || !b) usage("unknown algorithm in --algos " + *f.algos);
    if (*a == *b) usage("--algos needs two different algorithms");
    sw.algo_a = *a;
    sw.algo_b = *b;
  }
  if (f.seed) sw.master_seed = *f.seed;
  if (f.out) cfg.out_dir = *f.out;
  if (f.duration) {
    const bool followed = sw.engine.session.schedule.offset.wavelength ==
                          sw.engine.session.duration;
    sw.engine.session.duration = *f.duration;
    if (followed) sw.engine.session.schedule.offset.wavelength = *f.duration;
  }
  if (f.wall_duration) sw.engine.wall_duration = *f.wall_duration;
  if (f.time_scale) sw.engine.time_scale = *f.time_scale;
  if (f.parallelism) {
    auto p = parse_parallelism(*f.parallelism);
    if (!p) usage("--parallelism must be serialized or full");
    sw.engine.parallelism = *p;
  }
  if (f.delay_kind) {
    auto k = parse_delay_kind(*f.delay_kind);
    if (!k) usage("--delay-kind must be sleep or spin");
    sw.engine.delay_kind = *k;
  }
  if (f.queue_capacity) sw.engine.queue_capacity = *f.queue_capacity;
  for (const auto& d : f.delays) {
    const auto eq = d.find('=');
    if (eq == std::string::npos) usage("--delay expects ALGO=ms, got " + d);
    auto a = parse_algo(d.substr(0, eq));
    if (!a) usage("unknown algorithm in --delay " + d);
    try {
      sw.engine.delay_ms[*a] = std::stod(d.substr(eq + 1));
    } catch (const std::exception&) {
      usage("bad delay value in --delay " + d);
    }
  }
  return cfg;
}

void print_table(const std::vector<RatioResult>& rows, Algo a, Algo b) {
  fmt::print("{:>5} {:>5} {:>7} {:>7} {:>5} {:>6}\n", "a", "b", fmt::format("{}", to_string(a)),
             fmt::format("{}", to_string(b)), "ties", "delta");
  SweepTotals t;
  for (const auto& r : rows) {
    fmt::print("{:>5} {:>5} {:>7} {:>7} {:>5} {:>6}\n", r.ratio_a, r.ratio_b, r.wins_a, r.wins_b,
               r.ties, r.delta());
    t.wins_a += r.wins_a;
    t.wins_b += r.wins_b;
    t.ties += r.ties;
  }
  fmt::print("{:>11} {:>7} {:>7} {:>5} {:>6}\n", "TOTAL", t.wins_a, t.wins_b, t.ties, t.delta());
}

int cmd_run(const CommonFlags& f, std::optional<int> ratio) {
  ExperimentConfig cfg = resolve(f);
  auto& sw = cfg.sweep;
  const int a = ratio.value_or(sw.per_side / 2);
  ThreadedConfig tc = sw.engine;
  tc.session.schedule.n_per_side = sw.per_side;
  tc.session.roster = build_roster(sw.algo_a, sw.algo_b, a, sw.per_side);
  tc.session.seed = session_seed(sw.master_seed, sw.algo_a, sw.algo_b, a, sw.per_side, 0);

  const SessionResult r = run_session(sw.mode, tc);
  if (!r.valid) throw SimError(ErrorCode::JoinTimeout, r.error);

  std::filesystem::create_directories(cfg.out_dir);
  const auto tape_path =
      cfg.out_dir / fmt::format("{}_{}_vs_{}_{}-{}_tape.csv", to_string(sw.mode),
                                to_string(sw.algo_a), to_string(sw.algo_b), a, sw.per_side - a);
  write_tape_csv(tape_path.string(), r.tape);

  fmt::print("mode {}  seed {}  trades {}\n", to_string(sw.mode), r.seed, r.tape.size());
  for (Algo algo : {sw.algo_a, sw.algo_b}) {
    const auto q = r.quote_latency.count(algo) ? r.quote_latency.at(algo) : LatencyStats{};
    fmt::print("{:<5} APPT {:>10.4f}   quote calls {:>8}  mean {:.1f} us  p99 {:.1f} us\n",
               to_string(algo), appt(r, algo), q.calls, q.mean_us, q.p99_us);
  }
  fmt::print("winner {}\n", to_string(score_session(r, sw.algo_a, sw.algo_b)));
  if (sw.mode == EngineMode::Threaded) {
    fmt::print("parallelism {}  host {}  stale {}  fifo violations {}\n", r.parallelism, r.host,
               r.stale_orders, r.fifo_violations);
  }
  fmt::print("tape {}\n", tape_path.string());
  return 0;
}

int cmd_sweep(const CommonFlags& f, std::optional<int> n, std::optional<unsigned> jobs,
              const std::vector<int>& ratios, bool quiet) {
  ExperimentConfig cfg = resolve(f);
  auto& sw = cfg.sweep;
  if (n) sw.n_per_ratio = *n;
  if (jobs) sw.jobs = *jobs;
  if (!ratios.empty()) sw.ratios = ratios;
  if (!quiet) {
    sw.progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 50 == 0) {
        std::fprintf(stderr, "\r%zu/%zu sessions", done, total);
        if (done == total) std::fputc('\n', stderr);
      }
    };
  }
  const SweepResult result = run_sweep(sw);
  const auto paths = write_sweep_csv(result, cfg.out_dir);
  print_table(result.ratios, sw.algo_a, sw.algo_b);
  if (result.excluded > 0) {
    fmt::print(stderr, "{} sessions excluded; first error: {}\n", result.excluded,
               result.exclusion_errors.front());
  }
  fmt::print("detail  {}\nsummary {}\n", paths.detail.string(), paths.summary.string());
  return 0;
}

int cmd_summary(const std::string& in, const std::optional<std::string>& out) {
  const DetailCsv detail = read_detail_csv(std::filesystem::path(in));
  const auto rows = aggregate(detail.sessions);
  print_table(rows, detail.algo_a, detail.algo_b);
  if (out) {
    std::ofstream f(*out, std::ios::binary);
    if (!f) throw SimError(ErrorCode::Io, "cannot open " + *out);
    write_summary_csv(f, rows);
    fmt::print("summary {}\n", *out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous double auction simulator: sequential and threaded engines"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::optional<int> run_ratio;
  auto* run = app.add_subcommand("run", "one session; prints APPTs and the tape path");
  add_common(run, run_flags);
  run->add_option("--ratio", run_ratio, "algo A traders per side (default half)");

  CommonFlags sweep_flags;
  std::optional<int> sweep_n;
  std::optional<unsigned> sweep_jobs;
  std::vector<int> sweep_ratios;
  bool quiet = false;
  auto* sweep = app.add_subcommand("sweep", "ratio sweep; writes detail and summary CSVs");
  add_common(sweep, sweep_flags);
  sweep->add_option("--n", sweep_n, "sessions per ratio");
  sweep->add_option("--jobs", sweep_jobs, "parallel sessions (default: cores for seq, 1 threaded)");
  sweep->add_option("--ratios", sweep_ratios, "subset of ratios (A traders per side)")
      ->delimiter(',');
  sweep->add_flag("--quiet", quiet, "no progress output");

  std::string summary_in;
  std::optional<std::string> summary_out;
  auto* summary = app.add_subcommand("summary", "re-aggregate a detail CSV");
  summary->add_option("detail", summary_in, "detail CSV")->required()->check(CLI::ExistingFile);
  summary->add_option("--out", summary_out, "write the summary CSV here");

  try {
    app.parse(argc, argv);
    if (*run) return cmd_run(run_flags, run_ratio);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_n, sweep_jobs, sweep_ratios, quiet);
    if (*summary) return cmd_summary(summary_in, summary_out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const SimError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 1;
}
