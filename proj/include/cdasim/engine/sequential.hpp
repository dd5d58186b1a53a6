#pragma once

#include "cdasim/engine/session.hpp"

namespace cdasim {

// Time-sliced single-threaded session. Each poll picks one trader uniformly at
// random, asks it for an order, submits the order, and on any market-data
// change lets every trader respond. The virtual clock advances 1/N per poll
// regardless of how long trader code takes, so the result depends only on
// (cfg, seed).
//
// Throws SimError(ConfigInvalid) for a bad config and SimError(TraderFault)
// (or FillWithoutAssignment) when a trader misbehaves.
SessionResult run_session_sequential(const SessionConfig& cfg);

}  // namespace cdasim
