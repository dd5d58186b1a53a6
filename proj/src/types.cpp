#include "cdasim/error.hpp"
#include "cdasim/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace cdasim {

std::string_view to_string(Side s) noexcept { return s == Side::Bid ? "Bid" : "Ask"; }

std::string_view to_string(Algo a) noexcept {
  switch (a) {
    case Algo::ZIC: return "ZIC";
    case Algo::SHVR: return "SHVR";
    case Algo::ZIP: return "ZIP";
    case Algo::GDX: return "GDX";
    case Algo::AA: return "AA";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "GD") return Algo::GDX;
  for (Algo a : kAllAlgos) {
    if (upper == to_string(a)) return a;
  }
  return std::nullopt;
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::TraderFault: return "TraderFault";
    case ErrorCode::FillWithoutAssignment: return "FillWithoutAssignment";
    case ErrorCode::MissingEquilibrium: return "MissingEquilibrium";
    case ErrorCode::NoSuchAlgoInSession: return "NoSuchAlgoInSession";
    case ErrorCode::QueueOverflowPolicyViolated: return "QueueOverflowPolicyViolated";
    case ErrorCode::JoinTimeout: return "JoinTimeout";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace cdasim
