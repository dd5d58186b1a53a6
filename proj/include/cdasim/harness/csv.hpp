#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cdasim/harness/sweep.hpp"

namespace cdasim {

inline constexpr std::string_view kDetailCsvHeader =
    "mode,algoA,algoB,ratio_a,ratio_b,trial,seed,appt_a,appt_b,winner";
inline constexpr std::string_view kSummaryCsvHeader = "ratio_a,ratio_b,wins_a,wins_b,ties,delta";

struct SweepCsvPaths {
  std::filesystem::path detail;
  std::filesystem::path summary;
};

// <dir>/<mode>_<A>_vs_<B>_detail.csv and ..._summary.csv
SweepCsvPaths sweep_csv_paths(const std::filesystem::path& dir, EngineMode mode, Algo a, Algo b);

void write_detail_csv(std::ostream& out, EngineMode mode, Algo a, Algo b,
                      const std::vector<SessionRecord>& sessions);
// Per-ratio rows plus a final TOTAL row; header only when `ratios` is empty.
void write_summary_csv(std::ostream& out, const std::vector<RatioResult>& ratios);

// Writes both files into `dir` (created if missing). Throws SimError(Io).
SweepCsvPaths write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& dir);

struct DetailCsv {
  EngineMode mode{EngineMode::Sequential};
  Algo algo_a{Algo::AA};
  Algo algo_b{Algo::ZIC};
  std::vector<SessionRecord> sessions;
};

struct SummaryCsv {
  std::vector<RatioResult> ratios;
  SweepTotals totals;
};

// Throw SimError(Parse) on malformed input.
DetailCsv read_detail_csv(std::istream& in);
DetailCsv read_detail_csv(const std::filesystem::path& path);
SummaryCsv read_summary_csv(std::istream& in);
SummaryCsv read_summary_csv(const std::filesystem::path& path);

}  // namespace cdasim
