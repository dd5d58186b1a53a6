#include "cdasim/harness/scoring.hpp"

#include <string>

#include "cdasim/error.hpp"

namespace cdasim {

std::string_view to_string(Winner w) noexcept {
  switch (w) {
    case Winner::A: return "A";
    case Winner::B: return "B";
    case Winner::Tie: return "TIE";
  }
  return "?";
}

std::optional<Winner> parse_winner(std::string_view s) {
  if (s == "A") return Winner::A;
  if (s == "B") return Winner::B;
  if (s == "TIE") return Winner::Tie;
  return std::nullopt;
}

double appt(const SessionResult& result, Algo algo) {
  long long sum = 0;
  int count = 0;
  for (const auto& t : result.traders) {
    if (t.algo != algo) continue;
    sum += t.profit;
    ++count;
  }
  if (count == 0) {
    throw SimError(ErrorCode::NoSuchAlgoInSession,
                   std::string(to_string(algo)) + " has no traders in this session");
  }
  return static_cast<double>(sum) / count;
}

Winner score_session(const SessionResult& result, Algo a, Algo b) {
  const double pa = appt(result, a);
  const double pb = appt(result, b);
  if (pa > pb) return Winner::A;
  if (pb > pa) return Winner::B;
  return Winner::Tie;
}

}  // namespace cdasim
