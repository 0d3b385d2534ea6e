#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "horoflow/report.hpp"

namespace horoflow {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 50;
const char* const kColours[] = {"#1f4e79", "#b22222", "#2e7d32", "#6a1b9a"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_plot(const std::string& title, const std::string& xlabel,
                             const std::vector<PlotSeries>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  // A constant series is drawn as a flat line in the middle of the panel.
  const double scale = std::max(std::abs(y0), std::abs(y1));
  if (y1 - y0 <= 1e-9 * std::max(scale, 1.0)) {
    const double pad = 0.01 * std::max(scale, 1e-12);
    y0 -= pad;
    y1 += pad;
  } else {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
       "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  o << "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << fmt("%.2f", px(xv)) << "\" y=\"" << kHeight - kBottom + 18
      << "\" text-anchor=\"middle\">" << fmt("%.4g", xv) << "</text>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt("%.2f", py(yv) + 4)
      << "\" text-anchor=\"end\">" << fmt("%.6g", yv) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
    << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % 4];
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) o << ' ';
      o << fmt("%.2f", px(s.x[i])) << ',' << fmt("%.2f", py(s.y[i]));
      first = false;
    }
    o << "\"/>\n";
    o << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 + 14 * k << "\" fill=\"" << colour
      << "\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::string> emit_plots(const FlowTrace& trace, const ShiTamResult* lapse,
                                    const std::filesystem::path& dir) {
  std::vector<double> t;
  for (const auto& r : trace.records) t.push_back(r.t);
  auto column = [&](auto get) {
    std::vector<double> v;
    for (const auto& r : trace.records) v.push_back(get(r.diag));
    return v;
  };
  auto log10_of = [](std::vector<double> v) {
    for (double& x : v) x = x > 0.0 ? std::log10(x) : std::numeric_limits<double>::quiet_NaN();
    return v;
  };

  struct Plot {
    std::string file, title;
    std::vector<PlotSeries> series;
  };
  std::vector<Plot> plots;
  plots.push_back({"m_hawking.svg", "Hawking mass",
                   {{"m_H", t, column([](const FlowDiagnostics& d) { return d.m_hawking; })}}});
  plots.push_back({"h2m4.svg", "log10 sup |H^2 - 4|",
                   {{"H^2 - 4", t, log10_of(column([](const FlowDiagnostics& d) {
                       return d.sup_h2_minus_4;
                     }))}}});
  plots.push_back({"ring_a.svg", "log10 sup |traceless A|^2",
                   {{"|A - (H/2) g|^2", t, log10_of(column([](const FlowDiagnostics& d) {
                       return d.sup_ring_a_sq;
                     }))}}});
  plots.push_back({"khat.svg", "sup |Khat - 1|",
                   {{"Khat - 1", t, column([](const FlowDiagnostics& d) {
                       return d.sup_khat_minus_one;
                     })}}});
  if (lapse) {
    std::vector<double> lo, hi;
    for (const auto& s : lapse->states) {
      lo.push_back(s.w.minCoeff());
      hi.push_back(s.w.maxCoeff());
    }
    plots.push_back({"lapse_w.svg", "rescaled lapse deviation w", {{"min w", t, lo}, {"max w", t, hi}}});
  }

  std::vector<std::string> files;
  for (const auto& p : plots) {
    const auto path = dir / p.file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << render_line_plot(p.title, "t", p.series);
    if (!out) throw std::runtime_error("failed writing " + path.string());
    files.push_back(p.file);
  }
  return files;
}

}  // namespace horoflow
