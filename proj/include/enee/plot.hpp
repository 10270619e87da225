#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "enee/csv.hpp"
#include "enee/record.hpp"

namespace enee {

/// One scatter panel: estimates vs truth for a (hr, method, stability) cell.
struct PlotPanel {
  double hr = 0.0;
  std::string method;
  std::string stratum;  // "stable" | "unstable" | "all"
  std::vector<double> truth;     // x: d_ext
  std::vector<double> estimate;  // y
};

namespace plot_detail {

inline std::string hr_label(double hr) {
  std::string s = format_double(hr);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

inline void add_point(std::vector<PlotPanel>& panels, double hr,
                      const std::string& method, const std::string& stratum,
                      double x, double y) {
  for (PlotPanel& p : panels) {
    if (p.hr == hr && p.method == method && p.stratum == stratum) {
      p.truth.push_back(x);
      p.estimate.push_back(y);
      return;
    }
  }
  panels.push_back({hr, method, stratum, {x}, {y}});
}

}  // namespace plot_detail

/// Group records into scatter panels mirroring the summary layout: exact
/// estimates unsplit, generalized estimates in the stable stratum, EHSS
/// (events scale) in both strata. With unfiltered = true every method is
/// emitted unsplit instead, including unstable generalized estimates.
inline std::vector<PlotPanel> make_plot_panels(
    const std::vector<SimulationRecord>& records, bool unfiltered = false) {
  using plot_detail::add_point;
  std::vector<PlotPanel> panels;
  for (const SimulationRecord& r : records) {
    const double x = r.d_ext;
    if (unfiltered) {
      if (r.estimate_exact)
        add_point(panels, r.hr, "exact-exponential", "all", x, *r.estimate_exact);
      add_point(panels, r.hr, "ehss-events", "all", x, r.estimate_ehss_events);
      if (r.estimate_generalized)
        add_point(panels, r.hr, "generalized", "all", x, *r.estimate_generalized);
      continue;
    }
    const bool stable = r.stability == Stability::stable;
    const std::string stratum = stable ? "stable" : "unstable";
    if (r.estimate_exact)
      add_point(panels, r.hr, "exact-exponential", "all", x, *r.estimate_exact);
    if (stable && r.estimate_generalized)
      add_point(panels, r.hr, "generalized", "stable", x, *r.estimate_generalized);
    add_point(panels, r.hr, "ehss-events", stratum, x, r.estimate_ehss_events);
  }
  std::sort(panels.begin(), panels.end(), [](const PlotPanel& a, const PlotPanel& b) {
    if (a.hr != b.hr) return a.hr < b.hr;
    if (a.method != b.method) return a.method < b.method;
    return a.stratum < b.stratum;
  });
  return panels;
}

inline void emit_panel_csv(const PlotPanel& panel, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "d_ext,estimate\r\n";
  for (std::size_t i = 0; i < panel.truth.size(); ++i)
    out << format_double(panel.truth[i]) << ',' << format_double(panel.estimate[i])
        << "\r\n";
  if (!out) throw IoError("write failed: " + path);
}

/// Minimal SVG scatter with the dashed identity reference line
/// (intercept 0, slope 1).
inline void emit_panel_svg(const PlotPanel& panel, const std::string& path) {
  const double width = 420.0, height = 420.0, margin = 48.0;
  double lo = 0.0, hi = 1.0;
  for (std::size_t i = 0; i < panel.truth.size(); ++i) {
    lo = std::min({lo, panel.truth[i], panel.estimate[i]});
    hi = std::max({hi, panel.truth[i], panel.estimate[i]});
  }
  const double pad = 0.05 * (hi - lo) + 1e-9;
  lo -= pad;
  hi += pad;
  const double span = hi - lo;
  auto sx = [&](double v) { return margin + (v - lo) / span * (width - 2 * margin); };
  auto sy = [&](double v) { return height - margin - (v - lo) / span * (height - 2 * margin); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << width - 2 * margin << "\" height=\"" << height - 2 * margin
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"13\">HR "
      << format_double(panel.hr) << " / " << panel.method
      << (panel.stratum == "all" ? "" : " / " + panel.stratum) << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">external events (truth)</text>\n";
  out << "<text x=\"14\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
         " transform=\"rotate(-90 14 " << height / 2 << ")\">estimate</text>\n";
  out << "<line x1=\"" << sx(lo + pad) << "\" y1=\"" << sy(lo + pad)
      << "\" x2=\"" << sx(hi - pad) << "\" y2=\"" << sy(hi - pad)
      << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
  for (std::size_t i = 0; i < panel.truth.size(); ++i)
    out << "<circle cx=\"" << sx(panel.truth[i]) << "\" cy=\""
        << sy(panel.estimate[i])
        << "\" r=\"2.2\" fill=\"none\" stroke=\"black\" stroke-opacity=\"0.55\"/>\n";
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

/// Emit one CSV (and optionally one SVG) per panel into out_dir. Panels with
/// no points are never created. Returns the emitted CSV paths.
inline std::vector<std::string> emit_plot_data(
    const std::vector<SimulationRecord>& records, const std::string& out_dir,
    bool unfiltered = false, bool render_svg = true) {
  const std::vector<PlotPanel> panels = make_plot_panels(records, unfiltered);
  std::vector<std::string> paths;
  for (const PlotPanel& p : panels) {
    if (p.truth.empty()) continue;
    const std::string stem = out_dir + "/scatter_hr" + plot_detail::hr_label(p.hr) +
                             "_" + p.method +
                             (p.stratum == "all" ? "" : "_" + p.stratum);
    emit_panel_csv(p, stem + ".csv");
    if (render_svg) emit_panel_svg(p, stem + ".svg");
    paths.push_back(stem + ".csv");
  }
  return paths;
}

}  // namespace enee
