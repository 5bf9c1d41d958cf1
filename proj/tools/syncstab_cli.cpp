// syncstab: command-line front end.
//
// Exit codes: 0 success, 1 bad input, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "syncstab/asymptotics.hpp"
#include "syncstab/error.hpp"
#include "syncstab/floquet.hpp"
#include "syncstab/lame.hpp"
#include "syncstab/orbit.hpp"
#include "syncstab/report.hpp"
#include "syncstab/scan.hpp"

using namespace syncstab;
using nlohmann::json;

namespace {

struct Globals {
  std::string potential = "pendulum";
  double kappa = 1.0;
  double tol = kDefaultTol;
  std::string out;
  std::string format = "csv";
  std::string svg;
  int workers = 1;
};

// One flat record printed either as a two-line CSV or as a JSON object.
class Record {
 public:
  Record& add(const std::string& key, json value) {
    keys_.push_back(key);
    obj_[key] = std::move(value);
    return *this;
  }
  json& object() { return obj_; }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) os << (i ? "," : "") << keys_[i];
    os << '\n';
    for (std::size_t i = 0; i < keys_.size(); ++i) os << (i ? "," : "") << cell(obj_.at(keys_[i]));
    os << '\n';
  }

 private:
  static std::string cell(const json& v) {
    if (v.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }
  std::vector<std::string> keys_;
  json obj_ = json::object();
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw InputError("cannot open output file: " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void print(const Globals& g, Record& r) {
  Output out(g.out);
  if (g.format == "json")
    out.stream() << r.object().dump(2) << '\n';
  else
    r.write_csv(out.stream());
}

void print_json(const Globals& g, const json& doc) {
  Output out(g.out);
  out.stream() << doc.dump(2) << '\n';
}

json mat_json(const Mat2& m) { return json::array({{m.a11, m.a12}, {m.a21, m.a22}}); }

// ---------------------------------------------------------------------------

int cmd_validate(const Globals& g, int grid) {
  const auto pot = parse_potential(g.potential);
  const auto report = validate(pot, grid);
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& c : report.checks)
      arr.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness},
                     {"detail", c.detail}});
    print_json(g, {{"potential", pot.spec()}, {"checks", arr}, {"all_passed", report.all_passed()}});
  } else {
    Output out(g.out);
    out.stream() << "check,passed,witness,detail\n";
    for (const auto& c : report.checks)
      out.stream() << c.name << ',' << (c.passed ? "yes" : "no") << ',' << c.witness << ",\""
                   << c.detail << "\"\n";
  }
  return report.all_passed() ? 0 : 1;
}

int cmd_period(const Globals& g, double E) {
  const auto pot = parse_potential(g.potential);
  const auto r = period(pot, E, g.tol);
  Record rec;
  rec.add("potential", pot.spec()).add("E", E).add("T", r.T).add("tau", r.tau);
  rec.add("T_sqrtE", r.T * std::sqrt(E));
  print(g, rec);
  return 0;
}

int cmd_orbit(const Globals& g, double E, double t_max, int steps, bool separatrix) {
  const auto pot = parse_potential(g.potential);
  if (steps < 1) throw InputError("--steps must be >= 1");
  std::vector<double> times;
  for (int i = 0; i <= steps; ++i) times.push_back(t_max * i / steps);
  std::vector<OrbitState> states;
  if (separatrix) {
    for (double t : times) states.push_back(heteroclinic_state(pot, t, g.tol));
  } else {
    if (t_max <= 0.0) t_max = period(pot, E, g.tol).T;
    for (int i = 0; i <= steps; ++i) times[i] = t_max * i / steps;
    states = orbit_states(pot, E, times, g.tol);
  }
  Output out(g.out);
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& s : states) arr.push_back({{"t", s.t}, {"p", s.p}, {"p_dot", s.p_dot}, {"E", s.E}});
    out.stream() << json{{"potential", pot.spec()}, {"states", arr}}.dump(2) << '\n';
  } else {
    out.stream() << "t,p,p_dot,E\n";
    char buf[128];
    for (const auto& s : states) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.p, s.p_dot, s.E);
      out.stream() << buf;
    }
  }
  return 0;
}

int cmd_chain(const Globals& g, double E, int particles, double periods, double w0,
              double perturb) {
  const auto pot = parse_potential(g.potential);
  const double T = period(pot, E, g.tol).T;
  ChainCheckOptions opts;
  opts.start = {w0, 0.0};
  opts.break_period_two = perturb;
  const double dev = chain_check(pot, g.kappa, E, particles, periods * T, opts);
  Record rec;
  rec.add("E", E).add("kappa", g.kappa).add("particles", particles).add("periods", periods);
  rec.add("max_deviation", dev);
  print(g, rec);
  return 0;
}

int cmd_monodromy(const Globals& g, double E, double tol_class) {
  const auto pot = parse_potential(g.potential);
  const auto m = monodromy_w(pot, g.kappa, E, g.tol);
  const auto cls = classify(m, tol_class);
  Record rec;
  rec.add("E", E).add("kappa", g.kappa).add("m11", m.m.a11).add("m12", m.m.a12);
  rec.add("m21", m.m.a21).add("m22", m.m.a22).add("trace", m.trace()).add("det", m.m.det());
  rec.add("det_residual", m.det_residual).add("class", std::string(to_string(cls.kind)));
  rec.add("sign", cls.sign);
  print(g, rec);
  return 0;
}

RunConfig scan_config(const Globals& g, double emin, double emax, int points,
                      const std::string& grid) {
  RunConfig cfg;
  cfg.potential = parse_potential(g.potential);
  system_params(cfg.potential, g.kappa);
  cfg.kappa = g.kappa;
  cfg.e_min = emin;
  cfg.e_max = emax;
  cfg.points = points;
  cfg.grid = grid == "linear" ? GridKind::linear : GridKind::log;
  cfg.tol = g.tol;
  cfg.workers = g.workers;
  check_config(cfg);
  return cfg;
}

int cmd_scan(const Globals& g, const RunConfig& cfg) {
  const auto samples = scan_trace(cfg);
  if (g.format == "json") {
    print_json(g, samples_json(samples, cfg));
  } else {
    Output out(g.out);
    write_samples_csv(out.stream(), samples);
  }
  if (!g.svg.empty()) emit(samples, {}, cfg, {"", "", g.svg});
  int failed = 0;
  for (const auto& s : samples) failed += s.failed;
  if (failed) std::cerr << "warning: " << failed << " sample(s) failed to integrate\n";
  return 0;
}

int cmd_intervals(const Globals& g, const RunConfig& cfg) {
  const auto samples = scan_trace(cfg);
  const auto iv = find_intervals(samples, cfg);
  if (g.format == "json") {
    print_json(g, intervals_json(iv, cfg));
  } else {
    Output out(g.out);
    out.stream() << "e_lo,e_hi,sign,collapsed,peak_E,peak_trace\n";
    char buf[160];
    for (const auto& i : iv) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%s,%.17g,%.17g\n", i.E_lo, i.E_hi, i.sign,
                    i.collapsed ? "true" : "false", i.peak_E, i.peak_trace);
      out.stream() << buf;
    }
  }
  if (!g.svg.empty()) emit(samples, iv, cfg, {"", "", g.svg});
  return 0;
}

int cmd_asymptotics(const Globals& g, double emin, double emax, int points) {
  const auto pot = parse_potential(g.potential);
  const auto params = system_params(pot, g.kappa);
  const auto K = regularized_K(pot, KMethod::limit, g.tol);
  const auto N = transition_N(pot, g.kappa, 0.0, g.tol);

  RunConfig cfg;
  cfg.potential = pot;
  cfg.kappa = g.kappa;
  cfg.e_min = emin;
  cfg.e_max = emax;
  cfg.points = points;
  cfg.tol = g.tol;
  cfg.workers = g.workers;
  check_config(cfg);
  const auto samples = scan_trace(cfg);
  FitOptions fo;
  fo.e_max = emax;
  std::optional<FitResult> fit;
  std::string fit_error;
  try {
    fit = fit_log_model(samples, params, fo);
  } catch (const InputError& e) {
    fit_error = e.what();
  }

  if (g.format == "json") {
    json rows = json::array();
    for (const auto& s : samples)
      rows.push_back({{"E", s.E}, {"ln_E", s.ln_E}, {"trace", s.trace},
                      {"predicted", predicted_trace(N, params, s.E, K)}});
    json doc{{"lambda", params.lambda_saddle}, {"omega", params.omega},
             {"K", {{"limit", K.K_limit}, {"integral", K.K_integral}, {"printed_formula", K.K_literal}}},
             {"N", mat_json(N.n)}, {"N_convergence_rate", N.convergence_rate},
             {"amplitude", trace_amplitude(N, params)}, {"samples", rows}};
    json resid = json::array();
    for (const auto& d : K.diagnostics) resid.push_back({{"E", d.E}, {"residual", d.residual}});
    doc["K"]["residuals"] = resid;
    if (fit)
      doc["fit"] = {{"a", fit->a}, {"phi", fit->phi}, {"rms_residual", fit->rms_residual},
                    {"period_lnE", fit->period_lnE}, {"free_period_lnE", 2 * std::numbers::pi / fit->free_frequency},
                    {"free_a", fit->free_a}, {"free_rms_residual", fit->free_rms_residual}};
    else
      doc["fit"] = {{"error", fit_error}};
    print_json(g, doc);
  } else {
    Output out(g.out);
    auto& os = out.stream();
    char buf[200];
    std::snprintf(buf, sizeof buf, "# lambda=%.17g omega=%.17g K=%.17g K_integral=%.17g\n",
                  params.lambda_saddle, params.omega, K.K_limit, K.K_integral);
    os << buf;
    std::snprintf(buf, sizeof buf, "# N=[%.17g %.17g; %.17g %.17g] rate=%.6g\n", N.n.a11, N.n.a12,
                  N.n.a21, N.n.a22, N.convergence_rate);
    os << buf;
    if (fit) {
      std::snprintf(buf, sizeof buf, "# fit a=%.10g phi=%.10g rms=%.3e free_period_lnE=%.10g\n",
                    fit->a, fit->phi, fit->rms_residual, 2 * std::numbers::pi / fit->free_frequency);
      os << buf;
    } else {
      os << "# fit skipped: " << fit_error << '\n';
    }
    os << "E,ln_E,trace,predicted\n";
    for (const auto& s : samples) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.E, s.ln_E, s.trace,
                    predicted_trace(N, params, s.E, K));
      os << buf;
    }
  }
  return 0;
}

int cmd_lame(const Globals& g, int n, std::optional<double> k2, std::optional<double> lam,
             std::optional<double> energy, bool kappa_given) {
  if (energy) {
    if (!kappa_given) throw InputError("lame --energy needs --kappa");
    const auto p = map_energy(g.kappa, *energy);
    const auto w = instability_interval(g.kappa);
    const auto edges = antiperiodic_eigenvalues(1, p.k2);
    Record rec;
    rec.add("kappa", g.kappa).add("E", *energy).add("k2", p.k2).add("lambda", p.lam);
    rec.add("edge_lo", edges.antiperiodic_plus[0]).add("edge_hi", edges.antiperiodic_minus[0]);
    rec.add("E_lo", w.E_lo).add("E_hi", w.E_hi);
    rec.add("unstable", is_unstable(g.kappa, *energy));
    if (w.truncated) std::cerr << "warning: " << w.warning << '\n';
    print(g, rec);
    return 0;
  }
  if (!k2) throw InputError("lame needs --k2 (or --kappa with --energy)");
  const auto edges = antiperiodic_eigenvalues(n, *k2);
  json doc{{"n", n}, {"k2", *k2}, {"antiperiodic_plus", edges.antiperiodic_plus},
           {"antiperiodic_minus", edges.antiperiodic_minus}};
  if (lam) {
    const LameParams p{n, *k2, *lam};
    const auto c = ince_coeffs(p);
    doc["lambda"] = *lam;
    doc["ince"] = {{"a", c.a}, {"b", c.b}, {"c", c.c}, {"d", c.d}};
    // the n x n leading blocks; band edges above use a longer truncation
    doc["det_order"] = n;
    doc["det_cosine"] = antiperiodic_determinant(c, AntiperiodicFamily::cosine, n);
    doc["det_sine"] = antiperiodic_determinant(c, AntiperiodicFamily::sine, n);
    doc["monodromy_trace"] = lame_monodromy(p, g.tol).trace();
  }
  if (g.format == "json") {
    print_json(g, doc);
  } else {
    Output out(g.out);
    for (auto it = doc.begin(); it != doc.end(); ++it) out.stream() << it.key() << ',' << it.value().dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability of synchronous rotations in coupled pendulum chains"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--potential", g.potential, "pendulum | cos3 | fourier:c0,c1,...");
  auto* kappa_opt = app.add_option("--kappa", g.kappa, "coupling strength");
  app.add_option("--tol", g.tol, "integrator tolerance");
  app.add_option("--out", g.out, "output file (stdout when omitted)");
  app.add_option("--format", g.format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--svg", g.svg, "trace plot (scan, intervals)");
  app.add_option("--workers", g.workers)->check(CLI::Range(1, 1024));

  double energy = 1.0;
  int grid_points = 256;
  auto* validate_cmd = app.add_subcommand("validate", "check the potential's standing assumptions");
  validate_cmd->add_option("--grid", grid_points);

  auto* period_cmd = app.add_subcommand("period", "period of the rotating orbit");
  period_cmd->add_option("--energy", energy)->required();

  double t_max = 0.0;
  int steps = 100;
  bool separatrix = false;
  auto* orbit_cmd = app.add_subcommand("orbit", "sample the synchronous orbit");
  orbit_cmd->add_option("--energy", energy);
  orbit_cmd->add_option("--tmax", t_max, "end time (one period when omitted)");
  orbit_cmd->add_option("--steps", steps);
  orbit_cmd->add_flag("--separatrix", separatrix, "sample the E = 0 orbit instead");

  int particles = 4;
  double periods = 10.0, w0 = 0.1, perturb = 0.0;
  auto* chain_cmd = app.add_subcommand("chain", "period-2 ring against the two-particle system");
  chain_cmd->add_option("--energy", energy)->required();
  chain_cmd->add_option("--particles", particles);
  chain_cmd->add_option("--periods", periods);
  chain_cmd->add_option("--w0", w0, "initial relative displacement");
  chain_cmd->add_option("--perturb", perturb, "offset added to one site");

  double tol_class = kDefaultClassTol;
  auto* mono_cmd = app.add_subcommand("monodromy", "Floquet matrix of the relative channel");
  mono_cmd->add_option("--energy", energy)->required();
  mono_cmd->add_option("--tol-class", tol_class);

  double emin = 1e-6, emax = 100.0;
  int points = 500;
  std::string grid = "log";
  auto add_range = [&](CLI::App* c) {
    c->add_option("--emin", emin);
    c->add_option("--emax", emax);
    c->add_option("--points", points);
    c->add_option("--grid", grid)->check(CLI::IsMember({"log", "linear"}));
  };
  auto* scan_cmd = app.add_subcommand("scan", "trace of the Floquet matrix over an energy grid");
  add_range(scan_cmd);
  auto* intervals_cmd = app.add_subcommand("intervals", "instability intervals from a scan");
  add_range(intervals_cmd);

  double a_emin = 1e-8, a_emax = 1e-3;
  int a_points = 60;
  auto* asym_cmd = app.add_subcommand("asymptotics", "small-energy constants, N and log-periodic fit");
  asym_cmd->add_option("--emin", a_emin);
  asym_cmd->add_option("--emax", a_emax);
  asym_cmd->add_option("--points", a_points);

  int lame_n = 1;
  std::optional<double> k2, lam, lame_energy;
  auto* lame_cmd = app.add_subcommand("lame", "band edges and the closed-form instability window");
  lame_cmd->add_option("--n", lame_n);
  lame_cmd->add_option("--k2", k2);
  lame_cmd->add_option("--lambda", lam);
  lame_cmd->add_option("--energy", lame_energy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*validate_cmd) return cmd_validate(g, grid_points);
    if (*period_cmd) return cmd_period(g, energy);
    if (*orbit_cmd) return cmd_orbit(g, energy, t_max, steps, separatrix);
    if (*chain_cmd) return cmd_chain(g, energy, particles, periods, w0, perturb);
    if (*mono_cmd) return cmd_monodromy(g, energy, tol_class);
    if (*scan_cmd) return cmd_scan(g, scan_config(g, emin, emax, points, grid));
    if (*intervals_cmd) return cmd_intervals(g, scan_config(g, emin, emax, points, grid));
    if (*asym_cmd) return cmd_asymptotics(g, a_emin, a_emax, a_points);
    if (*lame_cmd) return cmd_lame(g, lame_n, k2, lam, lame_energy, kappa_opt->count() > 0);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
