#include "cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lagstab::cli {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double at(const std::vector<double>& c, std::size_t k) {
  return k < c.size() ? c[k] : std::numeric_limits<double>::quiet_NaN();
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

}  // namespace

const std::vector<double>& channel(const Trajectory& traj, const std::string& name) {
  if (name == "t") return traj.t;
  if (name == "x") return traj.x;
  if (name == "y") return traj.y;
  if (name == "xdot") return traj.xdot;
  if (name == "ydot") return traj.ydot;
  if (name == "E") return traj.energy;
  if (name == "u") return traj.u;
  if (name == "u2") return traj.u2;
  throw std::invalid_argument("unknown channel '" + name + "'");
}

void emit_csv(const Trajectory& traj, std::ostream& out) {
  out << kCsvHeader << '\n';
  const std::vector<double>* cols[] = {&traj.t,     &traj.x,      &traj.y, &traj.xdot,
                                       &traj.ydot,  &traj.energy, &traj.u, &traj.u2};
  std::string row;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    row.clear();
    for (std::size_t j = 0; j < 8; ++j) {
      if (j) row += ',';
      row += fmt("%.17g", at(*cols[j], k));
    }
    row += '\n';
    out << row;
  }
}

void emit_svg(const Trajectory& traj, const std::vector<std::string>& channels, std::ostream& out) {
  constexpr double W = 800, H = 480, L = 70, R = 130, T = 30, B = 50;
  const double pw = W - L - R, ph = H - T - B;

  std::vector<const std::vector<double>*> series;
  for (const auto& c : channels) series.push_back(&channel(traj, c));

  double t0 = traj.empty() ? 0 : traj.t.front();
  double t1 = traj.empty() ? 1 : traj.t.back();
  if (!(t1 > t0)) t1 = t0 + 1;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* s : series)
    for (double v : *s)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!(lo <= hi)) lo = -1, hi = 1;
  if (hi - lo < 1e-12 * (1 + std::abs(lo))) lo -= 1, hi += 1;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  auto sx = [&](double t) { return L + (t - t0) / (t1 - t0) * pw; };
  auto sy = [&](double v) { return T + (hi - v) / (hi - lo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double tv = t0 + (t1 - t0) * i / ticks;
    const double vv = lo + (hi - lo) * i / ticks;
    const std::string x = fmt("%.2f", sx(tv)), y = fmt("%.2f", sy(vv));
    out << "<line x1=\"" << x << "\" y1=\"" << T + ph << "\" x2=\"" << x << "\" y2=\"" << T + ph + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << fmt("%.4g", tv)
        << "</text>\n";
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << y << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
        << fmt("%.4g", vv) << "</text>\n";
  }
  out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">t</text>\n";

  const std::size_t n = traj.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + 1999) / 2000);
  for (std::size_t j = 0; j < series.size(); ++j) {
    const char* colour = kPalette[j % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (std::size_t k = 0; k < n && k < series[j]->size(); k += stride) {
      const double v = (*series[j])[k];
      if (!std::isfinite(v)) continue;
      if (!first) out << ' ';
      out << fmt("%.2f", sx(traj.t[k])) << ',' << fmt("%.2f", sy(v));
      first = false;
    }
    out << "\"/>\n";
    const double ly = T + 10 + 18 * j;
    out << "<line x1=\"" << L + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << L + pw + 46 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">" << channels[j]
        << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace lagstab::cli
