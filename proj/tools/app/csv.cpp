#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <qdyn/error.hpp>

namespace qdyn::app {

std::string csv_header(Eigen::Index dim) {
  std::string h = "time";
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const std::string ij = std::to_string(i) + "_" + std::to_string(j);
      h += ",re_rho_" + ij + ",im_rho_" + ij;
    }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const Dynamics& dyn) {
  if (dyn.states.empty()) throw InvalidArgument("write_csv: empty series");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const Eigen::Index d = dyn.states.front().rows();
  out << csv_header(d) << '\n';
  for (std::size_t k = 0; k < dyn.states.size(); ++k) {
    out << format_double(dyn.times[k]);
    const auto& r = dyn.states[k];
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        out << ',' << format_double(r(i, j).real()) << ',' << format_double(r(i, j).imag());
    out << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

Dynamics read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
  const auto cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt((cols - 1) / 2.0)));
  if (cols != static_cast<std::size_t>(1 + 2 * d * d) || line != csv_header(d))
    throw Error(path.string() + ": unexpected header");
  Dynamics dyn;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      double x = 0.0;
      const auto res = std::from_chars(p, end, x);
      if (res.ec != std::errc())
        throw Error(path.string() + ":" + std::to_string(lineno) + ": bad number");
      v.push_back(x);
      p = res.ptr;
      if (p == end) break;
      if (*p != ',') throw Error(path.string() + ":" + std::to_string(lineno) + ": expected ','");
      ++p;
    }
    if (v.size() != cols)
      throw Error(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    DensityMatrix r(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto c = static_cast<std::size_t>(1 + 2 * (i * d + j));
        r(i, j) = Complex(v[c], v[c + 1]);
      }
    dyn.times.push_back(v[0]);
    dyn.states.push_back(std::move(r));
  }
  return dyn;
}

Deviation compare_series(const Dynamics& a, const Dynamics& b) {
  if (a.size() != b.size()) throw InvalidArgument("compare: series lengths differ");
  if (a.size() == 0) throw InvalidArgument("compare: empty series");
  const Eigen::Index d = a.states.front().rows();
  if (b.states.front().rows() != d) throw InvalidArgument("compare: dimensions differ");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a.times[k] - b.times[k]) > 1e-9 * (1.0 + std::abs(a.times[k])))
      throw InvalidArgument("compare: time grids differ at row " + std::to_string(k + 1));
  Deviation dev;
  dev.max_abs.assign(static_cast<std::size_t>(d * d), 0.0);
  dev.rms.assign(static_cast<std::size_t>(d * d), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const double e = std::abs(a.states[k](i, j) - b.states[k](i, j));
        auto idx = static_cast<std::size_t>(i * d + j);
        dev.max_abs[idx] = std::max(dev.max_abs[idx], e);
        dev.rms[idx] += e * e;
      }
  for (auto& r : dev.rms) r = std::sqrt(r / static_cast<double>(a.size()));
  for (double m : dev.max_abs) dev.overall_max = std::max(dev.overall_max, m);
  return dev;
}

}  // namespace qdyn::app
