#pragma once

#include <optional>
#include <string_view>

#include "cdasim/engine/session.hpp"

namespace cdasim {

enum class Winner { A, B, Tie };

std::string_view to_string(Winner w) noexcept;  // "A", "B", "TIE"
std::optional<Winner> parse_winner(std::string_view s);

// Average profit per trader over every trader (both sides) running `algo`.
// Throws SimError(NoSuchAlgoInSession).
double appt(const SessionResult& result, Algo algo);

// Strict APPT comparison; exact equality is a tie.
Winner score_session(const SessionResult& result, Algo a, Algo b);

}  // namespace cdasim
