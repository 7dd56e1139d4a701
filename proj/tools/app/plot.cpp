#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <qdyn/error.hpp>

namespace qdyn::app {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 150, kTop = 20, kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string population_plot_svg(const Dynamics& dyn, const std::vector<std::size_t>& states,
                                const std::string& xlabel) {
  if (dyn.states.empty()) throw InvalidArgument("plot: empty series");
  const auto d = static_cast<std::size_t>(dyn.states.front().rows());
  std::vector<std::size_t> which = states;
  if (which.empty())
    for (std::size_t k = 0; k < d; ++k) which.push_back(k);

  const double t0 = dyn.times.front();
  const double t1 = std::max(dyn.times.back(), t0 + 1e-300);
  double lo = 0.0, hi = 1.0;
  for (const auto& r : dyn.states)
    for (std::size_t k : which) {
      const double v = r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
  auto Y = [&](double v) { return kTop + (hi - v) / (hi - lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = t0 + (t1 - t0) * i / 5.0;
    const double v = lo + (hi - lo) * i / 5.0;
    os << "<text x=\"" << px(X(t)) << "\" y=\"" << px(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    os << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(Y(v) + 4) << "\" text-anchor=\"end\">"
       << fmt(v) << "</text>\n";
    os << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(Y(v)) << "\" x2=\"" << px(kLeft + pw)
       << "\" y2=\"" << px(Y(v)) << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(kHeight - 10)
     << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text transform=\"translate(16," << px(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">population</text>\n";

  for (std::size_t n = 0; n < which.size(); ++n) {
    const auto k = static_cast<Eigen::Index>(which[n]);
    const char* color = kColors[n % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < dyn.states.size(); ++i)
      os << (i ? " " : "") << px(X(dyn.times[i])) << ',' << px(Y(dyn.states[i](k, k).real()));
    os << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(n);
    os << "<line x1=\"" << px(kLeft + pw + 12) << "\" y1=\"" << px(ly) << "\" x2=\""
       << px(kLeft + pw + 36) << "\" y2=\"" << px(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << px(kLeft + pw + 42) << "\" y=\"" << px(ly + 4) << "\">rho_" << k << '_'
       << k << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_population_plot(const std::filesystem::path& path, const Dynamics& dyn,
                           const std::vector<std::size_t>& states, const std::string& xlabel) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << population_plot_svg(dyn, states, xlabel);
}

}  // namespace qdyn::app
