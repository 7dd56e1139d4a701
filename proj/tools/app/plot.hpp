#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <qdyn/core.hpp>

namespace qdyn::app {

/// SVG line chart of Re rho_kk(t) for the listed k (all when empty).
std::string population_plot_svg(const Dynamics& dyn, const std::vector<std::size_t>& states,
                                const std::string& xlabel);

void write_population_plot(const std::filesystem::path& path, const Dynamics& dyn,
                           const std::vector<std::size_t>& states, const std::string& xlabel);

}  // namespace qdyn::app
