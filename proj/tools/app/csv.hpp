#pragma once

// Density-matrix time series as CSV: time, then re/im of every element in
// row-major order, at 17 significant digits so a re-read is bit-exact.

#include <filesystem>
#include <string>

#include <qdyn/core.hpp>

namespace qdyn::app {

std::string csv_header(Eigen::Index dim);
std::string format_double(double v);

void write_csv(const std::filesystem::path& path, const Dynamics& dyn);
Dynamics read_csv(const std::filesystem::path& path);

struct Deviation {
  // Per matrix element, row-major.
  std::vector<double> max_abs;
  std::vector<double> rms;
  double overall_max = 0.0;
};

/// Element-wise comparison of two series on the same grid.
Deviation compare_series(const Dynamics& a, const Dynamics& b);

}  // namespace qdyn::app
