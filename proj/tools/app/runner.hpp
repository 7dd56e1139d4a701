#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include <qdyn/core.hpp>

#include "config.hpp"

namespace qdyn::app {

/// Dispatches to the configured method. Times in the result are internal units.
Dynamics simulate(const RunConfig& cfg);

struct RunOptions {
  std::optional<std::filesystem::path> output;
  bool plot = false;
  std::optional<std::uint64_t> seed;
};

/// Loads, simulates, and writes the CSV (and plot); returns the CSV path.
std::filesystem::path run(const std::filesystem::path& config, const RunOptions& opts,
                          std::ostream& log);

}  // namespace qdyn::app
