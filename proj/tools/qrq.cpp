// qrq command-line front end.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "qrq/errors.hpp"
#include "qrq/fock_oracle.hpp"
#include "qrq/json_io.hpp"
#include "qrq/sweeps.hpp"

using namespace qrq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;

double deg(double v, bool degrees) { return degrees ? v * std::numbers::pi / 180.0 : v; }

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.10g", v);
  return b;
}

std::string fmt(cplx z) { return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i"; }

void print_json(const ojson& j) { std::cout << j.dump(2) << '\n'; }

void write_json_file(const ojson& j, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

// ---- classify ----

struct ClassifyArgs {
  double xi1 = 0, xi2 = 0, theta1 = 0, theta2 = 0, tol = 1e-6;
  std::string gate_file;
  bool json = false, degrees = false;
};

int run_classify(const ClassifyArgs& a) {
  ojson out;
  if (!a.gate_file.empty()) {
    std::ifstream f(a.gate_file);
    if (!f) throw Error(ErrorCode::IoError, "cannot read '" + a.gate_file + "'");
    TwoQubitGate g;
    g.matrix = matrix_from_json(nlohmann::json::parse(f));
    const ClassResult c = classify(g, a.tol);
    out["class"] = to_json(c);
    if (c.label != ClassLabel::NonUnitary) {
      out["invariants"] = to_json(makhlin_invariants(g));
      out["weyl"] = to_json(weyl_coordinates(g));
    }
  } else {
    const QrqParams p{a.xi1, a.xi2, deg(a.theta1, a.degrees), deg(a.theta2, a.degrees)};
    validate(p);
    const RegimeReport r = regime_classify(p, a.tol);
    const GateResult g = two_qubit_gate(p);
    out["params"] = to_json(p);
    out["computational"] = to_json(convert_params(p));
    out["class"] = to_json(r.cls);
    out["regime"] = to_string(r.regime);
    out["regime_asymptotic"] = r.asymptotic;
    out["amplitudes"] = to_json(r);
    if (g.unitary) {
      out["invariants"] = to_json(*r.invariants);
      out["weyl"] = to_json(weyl_coordinates(g.gate));
    } else {
      out["non_unitary"] = {{"residual", g.residual}};
    }
  }
  if (a.json) {
    print_json(out);
    return kExitOk;
  }
  std::cout << "class: " << out["class"]["label"].get<std::string>() << '\n';
  if (out.contains("non_unitary"))
    std::cout << "NonUnitary: unitarity residual " << fmt(out["non_unitary"]["residual"].get<double>()) << '\n';
  if (out.contains("invariants")) {
    const auto& inv = out["invariants"];
    std::cout << "g1: " << fmt(complex_from_json(inv["g1"])) << '\n'
              << "g2: " << fmt(inv["g2"].get<double>()) << '\n'
              << "entangling_power: " << fmt(inv["entangling_power"].get<double>()) << '\n';
    const auto& w = out["weyl"];
    std::cout << "alpha: " << fmt(w["alpha"][0].get<double>()) << ' ' << fmt(w["alpha"][1].get<double>()) << ' '
              << fmt(w["alpha"][2].get<double>()) << '\n'
              << "chamber: " << fmt(w["chamber_coords"][0].get<double>()) << ' '
              << fmt(w["chamber_coords"][1].get<double>()) << ' ' << fmt(w["chamber_coords"][2].get<double>()) << '\n';
  }
  if (out.contains("amplitudes")) {
    const auto& d = out["amplitudes"];
    std::cout << "regime: " << out["regime"].get<std::string>()
              << (out["regime_asymptotic"].get<bool>() ? " (asymptotic)" : "") << '\n'
              << "p_gate: " << fmt(d["p_gate"].get<double>()) << '\n'
              << "p_nq: " << fmt(d["p_nq"].get<double>()) << '\n'
              << "p_vac: " << fmt(d["p_vac"].get<double>()) << '\n'
              << "unitarity_residual: " << fmt(d["unitarity_residual"].get<double>()) << '\n';
  }
  return kExitOk;
}

// ---- phi ----

struct PhiArgs {
  double x = 0, delta = 0;
  std::string branch = "mm";
  bool all = false, json = false, degrees = false;
};

int run_phi(const PhiArgs& a) {
  const double delta = deg(a.delta, a.degrees);
  std::vector<Branch> branches;
  if (a.all) branches = {Branch::pp, Branch::pm, Branch::mp, Branch::mm};
  else branches = {branch_from_string(a.branch)};
  ojson arr = ojson::array();
  for (Branch b : branches) {
    const PhiSolution s = phi_en(a.x, delta, b);
    ojson j = to_json(s);
    if (s.phi_en && a.degrees) j["phi_en_degrees"] = *s.phi_en * 180.0 / std::numbers::pi;
    arr.push_back(j);
    if (!a.json) {
      std::cout << to_string(b) << ": ";
      if (s.phi_en) {
        const double shown = a.degrees ? *s.phi_en * 180.0 / std::numbers::pi : *s.phi_en;
        std::cout << "phi_en = " << fmt(shown) << "  residual = " << fmt(s.residual) << '\n';
      } else {
        std::cout << "Absent\n";
      }
    }
  }
  if (a.json) {
    ojson out = {{"x", a.x}, {"delta", delta}};
    try {
      out["x_min"] = x_min(delta);
    } catch (const Error&) {
      out["x_min"] = nullptr;
    }
    out["solutions"] = arr;
    print_json(out);
  }
  return kExitOk;
}

// ---- tables ----

struct TablesArgs {
  int which = 0;
  double scale = 1e6, prob_tol = 1e-3, class_tol = 1e-2;
  bool json = false;
};

int run_tables(const TablesArgs& a) {
  const auto rows = verify_tables(a.which, {a.scale, a.class_tol, a.prob_tol});
  bool all = true;
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    all = all && r.pass;
    arr.push_back(to_json(r));
    if (!a.json) {
      std::cout << (r.pass ? "PASS" : "FAIL") << "  table " << r.table << " row " << r.row << ": "
                << r.got_class << " (expected " << r.expected_class << "), " << r.prob_kind << " = "
                << fmt(r.got_prob) << " (expected " << fmt(r.expected_prob) << ")";
      if (!r.expected_approach.empty()) std::cout << ", approach " << r.got_approach << " (expected " << r.expected_approach << ")";
      std::cout << '\n';
    }
  }
  if (a.json) print_json({{"rows", arr}, {"pass", all}});
  return all ? kExitOk : kExitVerify;
}

// ---- sweep ----

struct SweepArgs {
  std::string config_file, preset, output;
  std::string mode = "x_delta";
  double nu = 100, delta = 0;
  double x_min = 1.6, x_max = 1e5, y_min = -1.5, y_max = 1.5;
  int nx = 200, ny = 200;
  bool x_log = true, y_log = false;
  std::vector<std::string> branches;
  std::optional<double> phi;
  int threads = -1;
  int subsystems = 1;
  bool trace = false, degrees = false;
};

int run_sweep(const SweepArgs& a, const CLI::App& sub) {
  nlohmann::json cj;
  if (!a.config_file.empty() && !a.preset.empty()) throw Error(ErrorCode::ConfigError, "use either --config or --preset");
  if (!a.config_file.empty()) {
    std::ifstream f(a.config_file);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot read '" + a.config_file + "'");
    try {
      cj = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
  } else if (!a.preset.empty()) {
    cj = preset(a.preset);
  } else {
    cj["mode"] = a.mode;
    if (a.mode == "x_delta") cj["nu"] = a.nu;
    if (a.mode == "x_nu") cj["delta"] = deg(a.delta, a.degrees);
    const bool angle_y = a.mode != "x_nu";
    // the appendix plane is linear in xi unless asked otherwise
    const bool x_log = sub.count("--x-log") ? a.x_log : a.mode != "xi_theta2_appendix";
    cj["x"] = {{"min", a.x_min}, {"max", a.x_max}, {"n", a.nx}, {"log", x_log}};
    cj["y"] = {{"min", angle_y ? deg(a.y_min, a.degrees) : a.y_min},
               {"max", angle_y ? deg(a.y_max, a.degrees) : a.y_max},
               {"n", a.ny},
               {"log", a.y_log}};
    if (!a.branches.empty()) cj["branches"] = a.branches;
    if (a.phi) cj["phi"] = deg(*a.phi, a.degrees);
  }
  if (sub.count("--subsystems")) cj["subsystem_count"] = a.subsystems;
  if (a.threads >= 0) cj["threads"] = a.threads;
  if (!a.output.empty()) cj["output"] = a.output;
  SweepConfig cfg = config_from_json(cj);

  if (cfg.mode == SweepMode::Tables) {
    TablesArgs t;
    t.which = cfg.table;
    return run_tables(t);
  }
  if (cfg.output.empty()) throw Error(ErrorCode::ConfigError, "--output is required");

  int code = kExitOk;
  SweepResult res;
  if (cfg.mode == SweepMode::Appendix) {
    AppendixCheck chk;
    res = appendix_scan(cfg, &chk);
    if (!chk.pass) code = kExitVerify;
    std::cout << "appendix: max p_vac " << fmt(chk.max_p_vac) << " at xi " << fmt(chk.xi_at_max) << ", theta2 "
              << fmt(chk.theta2_at_max) << (chk.pass ? " (ok)" : " (FAILED)") << '\n';
  } else {
    res = run_grid(cfg);
  }
  if (a.trace) {
    ojson loci = ojson::array();
    for (const Polyline& p : trace_locus(cfg)) loci.push_back(to_json(p));
    res.summary["locus_polylines"] = loci.size();
    std::string path = cfg.output;
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") path.resize(path.size() - 4);
    write_json_file(loci, path + ".locus.json");
  }
  write_csv(res, cfg.output);
  std::cout << "wrote " << res.rows.size() << " rows to " << cfg.output << " (" << res.absent_rows
            << " without phi_en, " << res.identity_failures << " identity failures)\n";
  if (res.identity_failures > 0) code = kExitVerify;
  return code;
}

// ---- verify ----

struct VerifyArgs {
  double max_xi = 2.0;
  int samples = 200;
  std::uint64_t seed = 20240611;
  std::string report = "verify_report.json";
  int n_start = 16;
  bool json = false;
};

int run_verify(const VerifyArgs& a) {
  if (a.samples <= 0) throw Error(ErrorCode::InvalidArgument, "--samples must be positive");
  OracleOptions opt;
  if (!(a.max_xi > 0.0) || a.max_xi > opt.xi_cap)
    throw Error(ErrorCode::InvalidArgument, "--max-xi must lie in (0, " + fmt(opt.xi_cap) + "]");
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> uxi(0.0, a.max_xi), uth(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0, worst_deficit = 0.0, worst_higher = 0.0;
  int worst_n = 0;
  ojson samples = ojson::array();
  for (int k = 0; k < a.samples; ++k) {
    QrqParams p;
    p.xi1 = uxi(rng);
    p.xi2 = uxi(rng);
    p.theta1 = uth(rng);
    p.theta2 = uth(rng);
    const ComparisonReport r = compare_closed_form(p, a.n_start, opt);
    worst = std::max(worst, r.max_rel_err);
    worst_deficit = std::max(worst_deficit, r.norm_deficit);
    worst_higher = std::max(worst_higher, r.w_higher);
    worst_n = std::max(worst_n, r.n_max);
    samples.push_back(to_json(r));
  }
  const bool pass = worst <= 1e-6 && worst_deficit <= opt.deficit_tol;
  const SensitivityRecord sens = sensitivity_check();
  ojson rep;
  rep["seed"] = a.seed;
  rep["samples"] = a.samples;
  rep["max_xi"] = a.max_xi;
  rep["max_rel_err"] = worst;
  rep["max_norm_deficit"] = worst_deficit;
  rep["max_w_higher"] = worst_higher;
  rep["max_n_max"] = worst_n;
  rep["tolerance"] = 1e-6;
  rep["pass"] = pass;
  rep["sensitivity"] = to_json(sens);
  rep["reports"] = samples;
  write_json_file(rep, a.report);
  if (a.json) {
    ojson brief = rep;
    brief.erase("reports");
    print_json(brief);
  } else {
    std::cout << (pass ? "PASS" : "FAIL") << ": " << a.samples << " samples, max rel err " << fmt(worst)
              << ", max norm deficit " << fmt(worst_deficit) << ", max w_higher " << fmt(worst_higher)
              << ", cutoff up to " << worst_n << '\n'
              << "sensitivity: |Re g1| " << fmt(std::abs(sens.re_g1_base)) << " -> " << fmt(std::abs(sens.re_g1_plus))
              << " at +" << fmt(100 * sens.frac) << "% x (threshold " << fmt(sens.threshold) << ", "
              << (sens.pass ? "met" : "not met") << ")\n"
              << "report: " << a.report << '\n';
  }
  return pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gate classification and sweeps for the QND-rotation-QND protocol"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* cls = app.add_subcommand("classify", "classify the two-qubit block at one parameter point");
  cls->add_option("--xi1", ca.xi1, "first interaction constant");
  cls->add_option("--xi2", ca.xi2, "second interaction constant");
  cls->add_option("--theta1", ca.theta1, "light rotation angle");
  cls->add_option("--theta2", ca.theta2, "atomic rotation angle");
  cls->add_option("--tol", ca.tol, "class tolerance")->check(CLI::Range(1e-15, 1e-2));
  cls->add_option("--gate", ca.gate_file, "classify a 4x4 JSON matrix instead")->check(CLI::ExistingFile);
  cls->add_flag("--json", ca.json);
  cls->add_flag("--degrees", ca.degrees, "angles in degrees");

  PhiArgs pa;
  auto* phi = app.add_subcommand("phi", "solve Re f_I = 0 for phi");
  phi->add_option("--x", pa.x, "x = xi1 xi2")->required();
  phi->add_option("--delta", pa.delta, "theta1 - theta2")->required();
  phi->add_option("--branch", pa.branch, "pp, pm, mp or mm");
  phi->add_flag("--all", pa.all, "all four branches");
  phi->add_flag("--json", pa.json);
  phi->add_flag("--degrees", pa.degrees, "angles in degrees");

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "grid scan to CSV");
  sw->add_option("--config", sa.config_file, "JSON config file");
  sw->add_option("--preset", sa.preset, "embedded config")->check(CLI::IsMember(preset_names()));
  sw->add_option("--output,-o", sa.output, "CSV path");
  sw->add_option("--mode", sa.mode)->check(CLI::IsMember({"x_delta", "x_nu", "xi_theta2_appendix"}));
  sw->add_option("--nu", sa.nu);
  sw->add_option("--delta", sa.delta);
  sw->add_option("--x-min", sa.x_min);
  sw->add_option("--x-max", sa.x_max);
  sw->add_option("--nx", sa.nx);
  sw->add_option("--x-log", sa.x_log);
  sw->add_option("--y-min", sa.y_min);
  sw->add_option("--y-max", sa.y_max);
  sw->add_option("--ny", sa.ny);
  sw->add_option("--y-log", sa.y_log);
  sw->add_option("--branch", sa.branches, "repeatable");
  sw->add_option("--phi", sa.phi, "fixed phi instead of phi_en");
  sw->add_option("--threads", sa.threads, "worker count, 0 = auto");
  sw->add_option("--subsystems", sa.subsystems, "subsystem_count metadata");
  sw->add_flag("--trace", sa.trace, "also trace the Re g1 = 0 locus");
  sw->add_flag("--degrees", sa.degrees, "angles in degrees");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "compare closed forms with the Fock-space oracle");
  ver->add_option("--max-xi", va.max_xi);
  ver->add_option("--samples", va.samples);
  ver->add_option("--seed", va.seed);
  ver->add_option("--report", va.report, "JSON report path");
  ver->add_option("--n-start", va.n_start, "initial cutoff")->check(CLI::Range(4, 384));
  ver->add_flag("--json", va.json);

  TablesArgs ta;
  auto* tab = app.add_subcommand("tables", "check the asymptotic table rows");
  tab->add_option("--which", ta.which, "1, 2 or 3 (all when omitted)")->check(CLI::Range(1, 3));
  tab->add_option("--scale", ta.scale, "value standing in for >> 1");
  tab->add_option("--prob-tol", ta.prob_tol);
  tab->add_flag("--json", ta.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cls) return run_classify(ca);
    if (*phi) return run_phi(pa);
    if (*sw) return run_sweep(sa, *sw);
    if (*ver) return run_verify(va);
    if (*tab) return run_tables(ta);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::CutoffTooSmall ? kExitVerify : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
