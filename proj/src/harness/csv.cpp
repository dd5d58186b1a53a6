#include "cdasim/harness/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "cdasim/error.hpp"

namespace cdasim {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw SimError(ErrorCode::Parse, fmt::format("line {}: {}", line_no, what));
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    parse_fail(line_no, fmt::format("bad number '{}'", s));
  }
  return value;
}

Algo parse_algo_field(std::string_view s, std::size_t line_no) {
  auto a = parse_algo(s);
  if (!a) parse_fail(line_no, fmt::format("unknown algorithm '{}'", s));
  return *a;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw SimError(ErrorCode::Io, "cannot open " + p.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw SimError(ErrorCode::Io, "cannot open " + p.string());
  return f;
}

}  // namespace

SweepCsvPaths sweep_csv_paths(const std::filesystem::path& dir, EngineMode mode, Algo a, Algo b) {
  const std::string stem = fmt::format("{}_{}_vs_{}", to_string(mode), to_string(a), to_string(b));
  return {dir / (stem + "_detail.csv"), dir / (stem + "_summary.csv")};
}

void write_detail_csv(std::ostream& out, EngineMode mode, Algo a, Algo b,
                      const std::vector<SessionRecord>& sessions) {
  out << kDetailCsvHeader << '\n';
  for (const auto& s : sessions) {
    out << fmt::format("{},{},{},{},{},{},{},{:.6f},{:.6f},{}\n", to_string(mode), to_string(a),
                       to_string(b), s.ratio_a, s.ratio_b, s.trial, s.seed, s.appt_a, s.appt_b,
                       to_string(s.winner));
  }
}

void write_summary_csv(std::ostream& out, const std::vector<RatioResult>& ratios) {
  out << kSummaryCsvHeader << '\n';
  if (ratios.empty()) return;
  SweepTotals t;
  for (const auto& r : ratios) {
    out << fmt::format("{},{},{},{},{},{}\n", r.ratio_a, r.ratio_b, r.wins_a, r.wins_b, r.ties,
                       r.delta());
    t.wins_a += r.wins_a;
    t.wins_b += r.wins_b;
    t.ties += r.ties;
  }
  out << fmt::format("TOTAL,,{},{},{},{}\n", t.wins_a, t.wins_b, t.ties, t.delta());
}

SweepCsvPaths write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimError(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  const SweepCsvPaths paths = sweep_csv_paths(dir, sweep.mode, sweep.algo_a, sweep.algo_b);
  {
    auto f = open_out(paths.detail);
    write_detail_csv(f, sweep.mode, sweep.algo_a, sweep.algo_b, sweep.sessions);
    if (!f) throw SimError(ErrorCode::Io, "write failed for " + paths.detail.string());
  }
  {
    auto f = open_out(paths.summary);
    write_summary_csv(f, sweep.n_per_ratio > 0 ? sweep.ratios : std::vector<RatioResult>{});
    if (!f) throw SimError(ErrorCode::Io, "write failed for " + paths.summary.string());
  }
  return paths;
}

DetailCsv read_detail_csv(std::istream& in) {
  DetailCsv out;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) parse_fail(line_no, "missing header");
  strip_cr(line);
  if (line != kDetailCsvHeader) parse_fail(line_no, "unexpected header");

  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) parse_fail(line_no, "expected 10 fields");
    const auto mode = parse_engine_mode(f[0]);
    if (!mode) parse_fail(line_no, "bad mode");
    const Algo a = parse_algo_field(f[1], line_no);
    const Algo b = parse_algo_field(f[2], line_no);
    if (first) {
      out.mode = *mode;
      out.algo_a = a;
      out.algo_b = b;
      first = false;
    } else if (*mode != out.mode || a != out.algo_a || b != out.algo_b) {
      parse_fail(line_no, "mixed mode or algorithm pair");
    }
    SessionRecord r;
    r.ratio_a = parse_number<int>(f[3], line_no);
    r.ratio_b = parse_number<int>(f[4], line_no);
    r.trial = parse_number<int>(f[5], line_no);
    r.seed = parse_number<std::uint64_t>(f[6], line_no);
    r.appt_a = parse_number<double>(f[7], line_no);
    r.appt_b = parse_number<double>(f[8], line_no);
    const auto w = parse_winner(f[9]);
    if (!w) parse_fail(line_no, "bad winner");
    r.winner = *w;
    out.sessions.push_back(r);
  }
  return out;
}

DetailCsv read_detail_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_detail_csv(f);
}

SummaryCsv read_summary_csv(std::istream& in) {
  SummaryCsv out;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) parse_fail(line_no, "missing header");
  strip_cr(line);
  if (line != kSummaryCsvHeader) parse_fail(line_no, "unexpected header");

  bool saw_total = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (saw_total) parse_fail(line_no, "rows after TOTAL");
    const auto f = split(line);
    if (f.size() != 6) parse_fail(line_no, "expected 6 fields");
    if (f[0] == "TOTAL") {
      if (!f[1].empty()) parse_fail(line_no, "TOTAL row has a ratio_b value");
      out.totals.wins_a = parse_number<long>(f[2], line_no);
      out.totals.wins_b = parse_number<long>(f[3], line_no);
      out.totals.ties = parse_number<long>(f[4], line_no);
      if (parse_number<long>(f[5], line_no) != out.totals.delta()) {
        parse_fail(line_no, "TOTAL delta inconsistent");
      }
      saw_total = true;
      continue;
    }
    RatioResult r;
    r.ratio_a = parse_number<int>(f[0], line_no);
    r.ratio_b = parse_number<int>(f[1], line_no);
    r.wins_a = parse_number<int>(f[2], line_no);
    r.wins_b = parse_number<int>(f[3], line_no);
    r.ties = parse_number<int>(f[4], line_no);
    if (parse_number<int>(f[5], line_no) != r.delta()) parse_fail(line_no, "delta inconsistent");
    out.ratios.push_back(r);
  }
  if (!out.ratios.empty() && !saw_total) parse_fail(line_no, "missing TOTAL row");
  SweepTotals sum;
  for (const auto& r : out.ratios) {
    sum.wins_a += r.wins_a;
    sum.wins_b += r.wins_b;
    sum.ties += r.ties;
  }
  if (saw_total && (sum.wins_a != out.totals.wins_a || sum.wins_b != out.totals.wins_b ||
                    sum.ties != out.totals.ties)) {
    parse_fail(line_no, "TOTAL row does not equal column sums");
  }
  return out;
}

SummaryCsv read_summary_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_summary_csv(f);
}

}  // namespace cdasim
