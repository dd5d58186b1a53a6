#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cdasim/engine/sequential.hpp"
#include "cdasim/error.hpp"
#include "cdasim/harness/config.hpp"
#include "cdasim/harness/csv.hpp"
#include "cdasim/harness/sweep.hpp"

using namespace cdasim;
namespace fs = std::filesystem;

namespace {

SessionResult fake(std::vector<std::tuple<Algo, Side, Price>> traders) {
  SessionResult r;
  TraderId id = 0;
  for (auto [a, s, p] : traders) {
    TraderOutcome o;
    o.id = id++;
    o.algo = a;
    o.side = s;
    o.profit = p;
    r.traders.push_back(o);
  }
  compute_appt(r);
  return r;
}

SweepConfig quick_sweep(Algo a, Algo b, int n) {
  SweepConfig c;
  c.algo_a = a;
  c.algo_b = b;
  c.n_per_ratio = n;
  c.master_seed = 7;
  c.engine.session.duration = 20.0;
  c.jobs = 1;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cdasim_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Scoring, ApptExamples) {
  EXPECT_DOUBLE_EQ(appt(fake({{Algo::AA, Side::Bid, 10}, {Algo::AA, Side::Bid, 20}}), Algo::AA), 15.0);
  EXPECT_DOUBLE_EQ(appt(fake({{Algo::AA, Side::Bid, 4}, {Algo::AA, Side::Ask, 6}}), Algo::AA), 5.0);
  try {
    appt(fake({{Algo::AA, Side::Bid, 4}}), Algo::ZIP);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSuchAlgoInSession);
  }
}

TEST(Scoring, WinnerAndTies) {
  const auto r = fake({{Algo::AA, Side::Bid, 15}, {Algo::ZIC, Side::Ask, 12}});
  EXPECT_EQ(score_session(r, Algo::AA, Algo::ZIC), Winner::A);
  EXPECT_EQ(score_session(r, Algo::ZIC, Algo::AA), Winner::B);
  const auto t = fake({{Algo::AA, Side::Bid, 12}, {Algo::ZIC, Side::Ask, 12}});
  EXPECT_EQ(score_session(t, Algo::AA, Algo::ZIC), Winner::Tie);
  EXPECT_EQ(parse_winner("TIE"), Winner::Tie);
  EXPECT_FALSE(parse_winner("x"));
}

TEST(Scoring, AntisymmetricOnRealSessions) {
  for (int count_a = 1; count_a < 20; count_a += 3) {
    SessionConfig c;
    c.duration = 30.0;
    c.roster = build_roster(Algo::ZIP, Algo::SHVR, count_a, 20);
    c.seed = static_cast<std::uint64_t>(count_a);
    const auto r = run_session_sequential(c);
    const Winner ab = score_session(r, Algo::ZIP, Algo::SHVR);
    const Winner ba = score_session(r, Algo::SHVR, Algo::ZIP);
    if (ab == Winner::Tie) EXPECT_EQ(ba, Winner::Tie);
    else EXPECT_NE(ab, ba);
  }
}

TEST(Roster, CountsAndMirror) {
  for (int a = 0; a <= 20; ++a) {
    const auto r = build_roster(Algo::AA, Algo::ZIP, a, 20);
    ASSERT_EQ(r.size(), 40u);
    int aa_bids = 0, aa_asks = 0;
    std::set<TraderId> ids;
    for (const auto& e : r) {
      ids.insert(e.id);
      if (e.algo == Algo::AA) (e.side == Side::Bid ? aa_bids : aa_asks)++;
    }
    EXPECT_EQ(ids.size(), 40u);
    EXPECT_EQ(aa_bids, a);
    EXPECT_EQ(aa_asks, a);

    const auto m = build_roster(Algo::ZIP, Algo::AA, 20 - a, 20);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_EQ(r[i].id, m[i].id);
      EXPECT_EQ(r[i].algo, m[i].algo);
      EXPECT_EQ(r[i].side, m[i].side);
    }
    EXPECT_EQ(session_seed(3, Algo::AA, Algo::ZIP, a, 20, 4),
              session_seed(3, Algo::ZIP, Algo::AA, 20 - a, 20, 4));
  }
  EXPECT_THROW(build_roster(Algo::AA, Algo::ZIP, 21, 20), SimError);
}

TEST(Sweep, LabelSwapMirrorsResults) {
  auto ab = quick_sweep(Algo::ZIC, Algo::SHVR, 2);
  auto ba = quick_sweep(Algo::SHVR, Algo::ZIC, 2);
  const auto x = run_sweep(ab);
  const auto y = run_sweep(ba);
  ASSERT_EQ(x.ratios.size(), 19u);
  ASSERT_EQ(y.ratios.size(), 19u);
  for (std::size_t i = 0; i < 19; ++i) {
    const auto& r = x.ratios[i];
    const auto& s = y.ratios[18 - i];
    EXPECT_EQ(r.ratio_a, s.ratio_b);
    EXPECT_EQ(r.wins_a, s.wins_b);
    EXPECT_EQ(r.wins_b, s.wins_a);
    EXPECT_EQ(r.ties, s.ties);
  }
}

TEST(Sweep, PartitionIndependentOfWorkerCount) {
  auto c = quick_sweep(Algo::ZIP, Algo::ZIC, 3);
  const auto serial = run_sweep(c);
  c.jobs = 3;
  const auto parallel = run_sweep(c);
  ASSERT_EQ(serial.sessions.size(), 57u);
  ASSERT_EQ(parallel.sessions.size(), 57u);
  std::set<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < serial.sessions.size(); ++i) {
    const auto& s = serial.sessions[i];
    const auto& p = parallel.sessions[i];
    EXPECT_TRUE(cells.insert({s.ratio_a, s.trial}).second);
    EXPECT_EQ(s.ratio_a + s.ratio_b, 20);
    EXPECT_EQ(s.seed, p.seed);
    EXPECT_EQ(s.appt_a, p.appt_a);
    EXPECT_EQ(s.appt_b, p.appt_b);
    EXPECT_EQ(s.winner, p.winner);
  }
  EXPECT_EQ(serial.ratios, parallel.ratios);
  EXPECT_EQ(serial.ratios, aggregate(serial.sessions));
}

TEST(Sweep, FullSizeCount) {
  auto c = quick_sweep(Algo::ZIC, Algo::SHVR, 500);
  c.engine.session.duration = 0.5;  // 20 polls; only the bookkeeping matters here
  c.jobs = 0;
  const auto r = run_sweep(c);
  EXPECT_EQ(r.sessions.size() + r.excluded, 9500u);
  const auto t = r.totals();
  EXPECT_EQ(t.wins_a + t.wins_b + t.ties, 9500);
  for (const auto& row : r.ratios) EXPECT_EQ(row.sessions(), 500);
}

TEST(Sweep, ProgressAndCallbacks) {
  auto c = quick_sweep(Algo::ZIC, Algo::SHVR, 1);
  c.ratios = {5, 15};
  std::size_t calls = 0, last = 0;
  c.on_session = [&](const SessionRecord&, const SessionResult&) { ++calls; };
  c.progress = [&](std::size_t done, std::size_t total) {
    last = done;
    EXPECT_EQ(total, 2u);
  };
  const auto r = run_sweep(c);
  EXPECT_EQ(calls, 2u);
  EXPECT_EQ(last, 2u);
  ASSERT_EQ(r.ratios.size(), 2u);
  c.ratios = {20};
  EXPECT_THROW(run_sweep(c), SimError);
}

TEST(Summary, DeltaColumn) {
  const RatioResult row{1, 19, 279, 221, 0};
  EXPECT_EQ(row.delta(), 58);
  std::ostringstream os;
  write_summary_csv(os, {row});
  EXPECT_EQ(os.str(), std::string(kSummaryCsvHeader) + "\n1,19,279,221,0,58\nTOTAL,,279,221,0,58\n");
}

TEST(Csv, HeaderOnlyWhenEmpty) {
  auto c = quick_sweep(Algo::AA, Algo::ZIC, 0);
  const auto r = run_sweep(c);
  EXPECT_TRUE(r.sessions.empty());
  const auto dir = scratch("empty");
  const auto paths = write_sweep_csv(r, dir);
  EXPECT_EQ(slurp(paths.detail), std::string(kDetailCsvHeader) + "\n");
  EXPECT_EQ(slurp(paths.summary), std::string(kSummaryCsvHeader) + "\n");
  EXPECT_EQ(paths.detail.filename(), "seq_AA_vs_ZIC_detail.csv");
  EXPECT_EQ(paths.summary.filename(), "seq_AA_vs_ZIC_summary.csv");
  fs::remove_all(dir);
}

TEST(Csv, RoundTripIsByteStable) {
  auto c = quick_sweep(Algo::GDX, Algo::ZIC, 2);
  c.ratios = {1, 10, 19};
  const auto r = run_sweep(c);
  const auto dir = scratch("roundtrip");
  const auto paths = write_sweep_csv(r, dir);

  const auto detail = read_detail_csv(paths.detail);
  EXPECT_EQ(detail.mode, EngineMode::Sequential);
  EXPECT_EQ(detail.algo_a, Algo::GDX);
  EXPECT_EQ(detail.algo_b, Algo::ZIC);
  ASSERT_EQ(detail.sessions.size(), r.sessions.size());
  for (std::size_t i = 0; i < r.sessions.size(); ++i) {
    EXPECT_EQ(detail.sessions[i].seed, r.sessions[i].seed);
    EXPECT_EQ(detail.sessions[i].winner, r.sessions[i].winner);
    EXPECT_NEAR(detail.sessions[i].appt_a, r.sessions[i].appt_a, 5e-7);
  }
  const auto summary = read_summary_csv(paths.summary);
  EXPECT_EQ(summary.ratios, r.ratios);
  EXPECT_EQ(summary.totals.delta(), r.totals().delta());
  EXPECT_EQ(aggregate(detail.sessions), summary.ratios);

  std::ostringstream d2, s2;
  write_detail_csv(d2, detail.mode, detail.algo_a, detail.algo_b, detail.sessions);
  write_summary_csv(s2, summary.ratios);
  EXPECT_EQ(d2.str(), slurp(paths.detail));
  EXPECT_EQ(s2.str(), slurp(paths.summary));
  fs::remove_all(dir);
}

TEST(Csv, MalformedInputRejected) {
  auto parse_error = [](const std::string& text, bool detail) {
    std::istringstream in(text);
    try {
      if (detail) read_detail_csv(in);
      else read_summary_csv(in);
      ADD_FAILURE() << text;
    } catch (const SimError& e) {
      EXPECT_EQ(e.code(), ErrorCode::Parse);
    }
  };
  const std::string sh(kSummaryCsvHeader);
  parse_error("bogus\n", false);
  parse_error(sh + "\n1,19,2,1,0,5\n", false);  // wrong delta
  parse_error(sh + "\n1,19,2,1,0,1\nTOTAL,,9,1,0,8\n", false);  // total mismatch
  parse_error(sh + "\n1,19,2\n", false);
  const std::string dh(kDetailCsvHeader);
  parse_error(dh + "\nseq,AA,ZIC,1,19,0,5,1.0,2.0,Q\n", true);
  parse_error(dh + "\nseq,AA,ZIC,1,19,0,5,1.0,2.0,B\nseq,AA,ZIP,1,19,1,6,1.0,2.0,B\n", true);
}

TEST(Config, ParsesSectionsAndRejectsUnknownKeys) {
  ExperimentConfig cfg;
  std::istringstream in(
      "[schedule]\noffset_amplitude = 0\n"
      "[traders]\naa.rho = 0.9\ngdx.horizon = 4\n"
      "[engine]\nduration = 120\nparallelism = serialized\ndelay.GDX = 10\n"
      "[sweep]\nalgos = ZIP,GD\nn_per_ratio = 3\nratios = 1,5\nmode = threaded\n");
  apply_config(in, cfg);
  EXPECT_EQ(cfg.sweep.engine.session.schedule.offset.amplitude, 0.0);
  EXPECT_DOUBLE_EQ(cfg.sweep.engine.session.schedule.offset.wavelength, 120.0);
  EXPECT_DOUBLE_EQ(cfg.sweep.engine.session.traders.aa.rho, 0.9);
  EXPECT_EQ(cfg.sweep.engine.session.traders.gdx.horizon, 4);
  EXPECT_EQ(cfg.sweep.engine.parallelism, Parallelism::Serialized);
  EXPECT_DOUBLE_EQ(cfg.sweep.engine.delay_ms.at(Algo::GDX), 10.0);
  EXPECT_EQ(cfg.sweep.algo_a, Algo::ZIP);
  EXPECT_EQ(cfg.sweep.algo_b, Algo::GDX);
  EXPECT_EQ(cfg.sweep.n_per_ratio, 3);
  EXPECT_EQ(cfg.sweep.ratios, (std::vector<int>{1, 5}));
  EXPECT_EQ(cfg.sweep.mode, EngineMode::Threaded);

  for (const char* bad : {"[engine]\nbogus = 1\n", "[nowhere]\nx = 1\n", "[engine]\nduration = abc\n",
                          "[sweep]\nalgos = AA,XYZ\n"}) {
    ExperimentConfig c;
    std::istringstream s(bad);
    EXPECT_THROW(apply_config(s, c), SimError) << bad;
  }
}
