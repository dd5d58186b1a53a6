#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cdasim/harness/sweep.hpp"

namespace cdasim {

struct ExperimentConfig {
  SweepConfig sweep{};
  std::filesystem::path out_dir{"out"};
};

// Flat key=value text with [schedule], [traders], [engine] and [sweep]
// sections. Keys left out keep their current value in `cfg`, except that
// schedule.offset_wavelength follows engine.duration unless set explicitly.
// Unknown sections or keys and unparsable values throw SimError(ConfigInvalid).
void apply_config(std::istream& in, ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace cdasim
