#include "syncstab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "syncstab/error.hpp"

namespace syncstab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok) {
  if (tok == "nan") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw InputError("bad number '" + tok + "' in CSV");
  return v;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  return f;
}

const char* kind_name(const TraceSample& s) {
  return s.failed ? "failed" : to_string(s.kind).data();
}

}  // namespace

void write_samples_csv(std::ostream& out, const std::vector<TraceSample>& samples) {
  out << "E,ln_E,trace,det_residual,class\n";
  for (const auto& s : samples) {
    out << fmt17(s.E) << ',' << fmt17(s.ln_E) << ',' << fmt17(s.trace) << ','
        << fmt17(s.det_residual) << ',' << kind_name(s) << '\n';
  }
}

std::vector<TraceSample> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "E,ln_E,trace,det_residual,class")
    throw InputError("CSV header mismatch");
  std::vector<TraceSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) cols.push_back(tok);
    if (cols.size() != 5) throw InputError("CSV row needs 5 columns: " + line);
    TraceSample s;
    s.E = parse_double(cols[0]);
    s.ln_E = parse_double(cols[1]);
    s.trace = parse_double(cols[2]);
    s.det_residual = parse_double(cols[3]);
    if (cols[4] == "failed") s.failed = true;
    else s.kind = stability_kind_from_string(cols[4]);
    out.push_back(s);
  }
  return out;
}

nlohmann::json run_meta(const RunConfig& cfg) {
  return {{"potential", cfg.potential.spec()},
          {"kappa", cfg.kappa},
          {"emin", cfg.e_min},
          {"emax", cfg.e_max},
          {"grid", cfg.grid == GridKind::log ? "log" : "linear"},
          {"points", cfg.points},
          {"tol", cfg.tol},
          {"tol_class", cfg.tol_class},
          {"collapse_tol", cfg.collapse_tol}};
}

nlohmann::json intervals_json(const std::vector<InstabilityInterval>& intervals,
                              const RunConfig& cfg) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& iv : intervals)
    arr.push_back({{"e_lo", iv.E_lo}, {"e_hi", iv.E_hi}, {"sign", iv.sign},
                   {"collapsed", iv.collapsed}});
  return {{"intervals", arr}, {"meta", run_meta(cfg)}};
}

nlohmann::json samples_json(const std::vector<TraceSample>& samples, const RunConfig& cfg) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : samples) {
    nlohmann::json row{{"E", s.E}, {"ln_E", s.ln_E}, {"class", kind_name(s)}};
    row["trace"] = s.failed ? nlohmann::json(nullptr) : nlohmann::json(s.trace);
    row["det_residual"] = s.failed ? nlohmann::json(nullptr) : nlohmann::json(s.det_residual);
    arr.push_back(row);
  }
  return {{"samples", arr}, {"meta", run_meta(cfg)}};
}

void write_trace_svg(std::ostream& out, const std::vector<TraceSample>& samples) {
  constexpr double W = 800, H = 400, pad = 40;
  double xmin = 0, xmax = 1, ylim = 3;
  bool first = true;
  for (const auto& s : samples) {
    if (s.failed) continue;
    if (first) { xmin = xmax = s.ln_E; first = false; }
    xmin = std::min(xmin, s.ln_E);
    xmax = std::max(xmax, s.ln_E);
    ylim = std::max(ylim, std::min(std::abs(s.trace), 10.0) * 1.05);
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
  auto py = [&](double y) {
    y = std::clamp(y, -ylim, ylim);
    return H / 2 - y / ylim * (H / 2 - pad);
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad
      << "\" height=\"" << H - 2 * pad << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double level : {2.0, -2.0}) {
    out << "<line class=\"guide\" x1=\"" << pad << "\" y1=\"" << py(level) << "\" x2=\""
        << W - pad << "\" y2=\"" << py(level) << "\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#225\" stroke-width=\"1\" points=\"";
  for (const auto& s : samples)
    if (!s.failed) out << px(s.ln_E) << ',' << py(s.trace) << ' ';
  out << "\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">ln E</text>\n";
  out << "<text x=\"12\" y=\"" << H / 2 << "\" transform=\"rotate(-90 12 " << H / 2
      << ")\" text-anchor=\"middle\">tr F_E</text>\n";
  out << "</svg>\n";
}

void emit(const std::vector<TraceSample>& samples, const std::vector<InstabilityInterval>& intervals,
          const RunConfig& cfg, const EmitPaths& paths) {
  if (!paths.csv.empty()) {
    auto f = open_for_write(paths.csv);
    write_samples_csv(f, samples);
  }
  if (!paths.json.empty()) {
    auto f = open_for_write(paths.json);
    f << intervals_json(intervals, cfg).dump(2) << '\n';
  }
  if (!paths.svg.empty()) {
    auto f = open_for_write(paths.svg);
    write_trace_svg(f, samples);
  }
}

}  // namespace syncstab
