#include "qrq/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <thread>

#include "qrq/errors.hpp"

namespace qrq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kIdentityTol = 1e-8;

SweepMode mode_from_string(const std::string& s) {
  if (s == "x_delta") return SweepMode::XDelta;
  if (s == "x_nu") return SweepMode::XNu;
  if (s == "xi_theta2_appendix" || s == "appendix") return SweepMode::Appendix;
  if (s == "tables") return SweepMode::Tables;
  throw Error(ErrorCode::ConfigError, "unknown sweep mode '" + s + "'");
}

Axis axis_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "axis '" + name + "' must be an object");
  Axis a;
  for (const auto& [k, v] : j.items()) {
    if (k == "min") a.min = v.get<double>();
    else if (k == "max") a.max = v.get<double>();
    else if (k == "n") a.n = v.get<int>();
    else if (k == "log") a.log = v.get<bool>();
    else throw Error(ErrorCode::ConfigError, "unknown key '" + k + "' in axis '" + name + "'");
  }
  return a;
}

nlohmann::ordered_json axis_to_json(const Axis& a) {
  return {{"min", a.min}, {"max", a.max}, {"n", a.n}, {"log", a.log}};
}

void check_config(const SweepConfig& c) {
  if (c.mode == SweepMode::Tables) return;
  for (const Axis* a : {&c.x, &c.y}) {
    if (a->n < 2) throw Error(ErrorCode::ConfigError, "grid sizes must be at least 2");
    if (!std::isfinite(a->min) || !std::isfinite(a->max) || !(a->max > a->min))
      throw Error(ErrorCode::ConfigError, "axis range must be finite with max > min");
    if (a->log && !(a->min > 0.0)) throw Error(ErrorCode::ConfigError, "log axis needs a positive minimum");
  }
  if (c.mode == SweepMode::XDelta && !(c.nu > 0.0)) throw Error(ErrorCode::NuNonPositive, "nu must be positive");
  if (c.mode == SweepMode::XNu && !(c.y.min > 0.0)) throw Error(ErrorCode::NuNonPositive, "nu axis must be positive");
  if (c.mode != SweepMode::Appendix && !(c.x.min > 0.0))
    throw Error(ErrorCode::ConfigError, "x axis must be positive");
  if (c.mode == SweepMode::Appendix && c.x.min < 0.0)
    throw Error(ErrorCode::NegativeConstant, "xi axis must be non-negative");
  if (c.mode != SweepMode::Appendix && c.branches.empty())
    throw Error(ErrorCode::ConfigError, "at least one branch is required");
  if (c.subsystem_count < 1) throw Error(ErrorCode::ConfigError, "subsystem_count must be at least 1");
  if (!(c.class_tol > 0.0) || c.class_tol > 1e-2) throw Error(ErrorCode::ConfigError, "class_tol must lie in (0, 1e-2]");
}

// Fills amplitudes, invariants and label. clean drops the rounding-level Re f_I left by phi_en.
void fill_metrics(SweepRow& row, const QrqParams& p, bool clean, double class_tol) {
  const OutputDecomposition d = amplitudes(p);
  row.p_gate = d.p_gate;
  row.p_nq = d.p_nq;
  row.p_vac = d.p_vac;
  row.unitarity_residual = d.unitarity_residual;

  const cplx fi = clean ? cplx(0.0, d.f_i.imag()) : d.f_i;
  const double fs = d.f_s;
  const Mat4 block = fi * identity_matrix() + fs * swap_matrix();
  const double scale = std::abs(fi + fs);
  const bool unitary = scale > 0.0 && (clean || d.unitarity_residual <= 1e-9);

  if (unitary) {
    TwoQubitGate g;
    g.matrix = block / scale;
    const LocalInvariants inv = makhlin_invariants(g);
    row.re_g1 = inv.g1.real();
    row.im_g1 = inv.g1.imag();
    row.g2 = inv.g2;
    row.class_label = to_string(classify_invariants(inv.g1, inv.g2, class_tol).label);
    const double h2 = fi.imag() * fi.imag() + fs * fs;
    if (h2 > 0.0) {
      const double formula = -3.0 + 6.0 * fi.imag() * fi.imag() / h2;
      // only meaningful when Re f_I vanishes or f_S does
      if (clean || fs == 0.0 || std::abs(fi.real()) <= 1e-12 * std::abs(fi)) row.identity_error = std::abs(inv.g2 - formula);
    }
  } else {
    row.class_label = to_string(ClassLabel::NonUnitary);
    if (std::abs(block.determinant()) > 0.0) {
      const LocalInvariants inv = block_invariants(block);
      row.re_g1 = inv.g1.real();
      row.im_g1 = inv.g1.imag();
      row.g2 = inv.g2;
    }
  }
  if (std::abs(d.f_i) > 0.0) row.phase_f_i = std::arg(d.f_i);
}

double axis_point(const Axis& a, double t) {
  // t in [0, n-1]
  const double u = t / (a.n - 1);
  if (a.log) return std::exp(std::log(a.min) + u * (std::log(a.max) - std::log(a.min)));
  return a.min + u * (a.max - a.min);
}

std::optional<double> cell_re_g1(const SweepConfig& cfg, double xv, double yv, Branch b) {
  return evaluate_point(cfg, xv, yv, b).re_g1;
}

LocusPoint make_locus_point(const SweepConfig& cfg, double xv, double yv, Branch b) {
  const SweepRow r = evaluate_point(cfg, xv, yv, b);
  LocusPoint lp;
  lp.x = r.x;
  lp.nu = r.nu;
  lp.delta = r.delta;
  lp.phi = r.phi.value_or(0.0);
  lp.params = {r.xi1, r.xi2, r.theta1.value_or(0.0), r.theta2.value_or(0.0)};
  lp.branch = b;
  lp.re_g1 = r.re_g1.value_or(0.0);
  lp.im_g1 = r.im_g1.value_or(0.0);
  lp.g2 = r.g2.value_or(0.0);
  lp.p_gate = r.p_gate.value_or(0.0);
  lp.p_nq = r.p_nq.value_or(0.0);
  lp.p_vac = r.p_vac.value_or(0.0);
  const OutputDecomposition d = amplitudes(lp.params);
  const double h = std::hypot(d.f_i.imag(), d.f_s);
  lp.pe_residual = h > 0.0 ? std::abs(std::abs(d.f_i.imag()) - std::abs(d.f_s)) / h : 1.0;
  return lp;
}

// Bisection in the axis' native coordinate (log for log axes).
std::optional<LocusPoint> refine_crossing(const SweepConfig& cfg, const Axis& axis, bool along_x, double lo, double hi,
                                          double fixed, Branch b) {
  auto eval = [&](double v) { return along_x ? cell_re_g1(cfg, v, fixed, b) : cell_re_g1(cfg, fixed, v, b); };
  auto to_c = [&](double v) { return axis.log ? std::log(v) : v; };
  auto from_c = [&](double c) { return axis.log ? std::exp(c) : c; };
  std::optional<double> flo = eval(lo), fhi = eval(hi);
  if (!flo || !fhi) return std::nullopt;
  double clo = to_c(lo), chi = to_c(hi);
  double best = std::abs(*flo) < std::abs(*fhi) ? lo : hi;
  double best_f = std::min(std::abs(*flo), std::abs(*fhi));
  for (int it = 0; it < 200 && best_f > 1e-12; ++it) {
    const double cm = 0.5 * (clo + chi);
    if (cm == clo || cm == chi) break;
    const double vm = from_c(cm);
    const std::optional<double> fm = eval(vm);
    if (!fm) return std::nullopt;
    if (std::abs(*fm) < best_f) {
      best_f = std::abs(*fm);
      best = vm;
    }
    if ((*fm < 0.0) == (*flo < 0.0)) {
      clo = cm;
      flo = fm;
    } else {
      chi = cm;
    }
  }
  // a sign flip through a pole or a branch jump never settles
  if (best_f > 1e-6) return std::nullopt;
  return along_x ? make_locus_point(cfg, best, fixed, b) : make_locus_point(cfg, fixed, best, b);
}

double axis_coord(const Axis& a, double v) {
  const double c = a.log ? std::log(v) : v;
  const double c0 = a.log ? std::log(a.min) : a.min, c1 = a.log ? std::log(a.max) : a.max;
  return (c - c0) / (c1 - c0) * (a.n - 1);
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) v[i] = axis_point(*this, i);
  if (n >= 2) {
    v.front() = min;
    v.back() = max;
  }
  return v;
}

std::string to_string(SweepMode m) {
  switch (m) {
    case SweepMode::XDelta: return "x_delta";
    case SweepMode::XNu: return "x_nu";
    case SweepMode::Appendix: return "xi_theta2_appendix";
    case SweepMode::Tables: return "tables";
  }
  return "x_delta";
}

SweepConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  SweepConfig c;
  try {
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
    if (c.mode == SweepMode::Appendix) {
      c = appendix_default_config();
    }
    for (const auto& [k, v] : j.items()) {
      if (k == "mode") continue;
      if (k == "nu") c.nu = v.get<double>();
      else if (k == "delta") c.delta = v.get<double>();
      else if (k == "x") c.x = axis_from_json(v, k);
      else if (k == "y") c.y = axis_from_json(v, k);
      else if (k == "branches") {
        c.branches.clear();
        for (const auto& b : v) c.branches.push_back(branch_from_string(b.get<std::string>()));
      } else if (k == "phi") {
        if (v.is_null()) c.phi.reset();
        else c.phi = v.get<double>();
      } else if (k == "output") c.output = v.get<std::string>();
      else if (k == "subsystem_count") c.subsystem_count = v.get<int>();
      else if (k == "threads") c.threads = v.get<int>();
      else if (k == "table") c.table = v.get<int>();
      else if (k == "class_tol") c.class_tol = v.get<double>();
      else if (k == "description") continue;
      else throw Error(ErrorCode::ConfigError, "unknown config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::ConfigError, e.what());
    throw;
  }
  if (c.mode == SweepMode::Tables && (c.table < 0 || c.table > 3))
    throw Error(ErrorCode::ConfigError, "table must be 1, 2 or 3 (0 for all)");
  check_config(c);
  return c;
}

nlohmann::ordered_json config_to_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(c.mode);
  if (c.mode == SweepMode::Tables) {
    j["table"] = c.table;
    return j;
  }
  if (c.mode == SweepMode::XDelta) j["nu"] = c.nu;
  if (c.mode == SweepMode::XNu) j["delta"] = c.delta;
  j["x"] = axis_to_json(c.x);
  j["y"] = axis_to_json(c.y);
  if (c.mode != SweepMode::Appendix) {
    nlohmann::ordered_json b = nlohmann::ordered_json::array();
    for (Branch br : c.branches) b.push_back(to_string(br));
    j["branches"] = b;
  }
  j["phi"] = c.phi ? nlohmann::ordered_json(*c.phi) : nlohmann::ordered_json(nullptr);
  j["output"] = c.output;
  j["subsystem_count"] = c.subsystem_count;
  j["threads"] = c.threads;
  j["class_tol"] = c.class_tol;
  return j;
}

int resolve_threads(int requested) {
  int n = requested;
  if (const char* env = std::getenv("QRQ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) throw Error(ErrorCode::ConfigError, "QRQ_THREADS must be a non-negative integer");
    n = static_cast<int>(v);
  }
  if (n < 0) throw Error(ErrorCode::ConfigError, "thread count must be non-negative");
  if (n == 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

SweepRow evaluate_point(const SweepConfig& cfg, double xv, double yv, Branch branch, bool with_branch) {
  SweepRow row;
  if (cfg.mode == SweepMode::Appendix) {
    const QrqParams p{xv, xv, yv + kPi, yv};
    row.x = xv * xv;
    row.nu = xv;
    row.delta = kPi;
    row.phi = p.theta1 + p.theta2;
    row.xi1 = row.xi2 = xv;
    row.theta1 = p.theta1;
    row.theta2 = p.theta2;
    fill_metrics(row, p, false, cfg.class_tol);
    return row;
  }
  if (cfg.mode == SweepMode::Tables) throw Error(ErrorCode::ConfigError, "tables mode has no grid");
  row.x = xv;
  row.nu = cfg.mode == SweepMode::XDelta ? cfg.nu : yv;
  row.delta = cfg.mode == SweepMode::XDelta ? yv : cfg.delta;
  if (with_branch && !cfg.phi) row.branch = to_string(branch);
  if (!(row.nu > 0.0)) throw Error(ErrorCode::NuNonPositive, "nu must be positive");
  row.xi1 = row.x / row.nu;
  row.xi2 = row.nu;
  bool clean = false;
  if (cfg.phi) {
    row.phi = *cfg.phi;
  } else {
    const PhiSolution s = phi_en(row.x, row.delta, branch);
    if (!s.phi_en) return row;
    row.phi = *s.phi_en;
    clean = true;
  }
  const QrqParams p = convert_params_inv({row.x, row.nu, *row.phi, row.delta});
  row.theta1 = p.theta1;
  row.theta2 = p.theta2;
  fill_metrics(row, p, clean, cfg.class_tol);
  if (cfg.mode != SweepMode::Appendix) row.phase_f_i.reset();
  return row;
}

SweepResult run_grid(const SweepConfig& cfg) {
  check_config(cfg);
  if (cfg.mode == SweepMode::Tables) throw Error(ErrorCode::ConfigError, "tables mode is handled by verify_tables");
  SweepResult res;
  res.config = cfg;
  const std::vector<double> xs = cfg.x.values(), ys = cfg.y.values();
  const std::vector<Branch> branches =
      cfg.mode == SweepMode::Appendix || cfg.phi ? std::vector<Branch>{Branch::mm} : cfg.branches;
  const bool with_branch = cfg.mode != SweepMode::Appendix;
  const std::size_t per_branch = xs.size() * ys.size();
  res.rows.resize(per_branch * branches.size());

  const int threads = resolve_threads(cfg.threads);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= res.rows.size() || failed.load()) return;
      const std::size_t b = k / per_branch, rem = k % per_branch;
      const std::size_t iy = rem / xs.size(), ix = rem % xs.size();
      try {
        res.rows[k] = evaluate_point(cfg, xs[ix], ys[iy], branches[b], with_branch);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // summary, reduced in row order
  std::map<std::string, std::pair<double, double>> ranges;
  std::map<std::string, int> labels;
  double identity_max = 0.0;
  auto track = [&](const char* name, const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return;
    auto it = ranges.find(name);
    if (it == ranges.end()) ranges[name] = {*v, *v};
    else it->second = {std::min(it->second.first, *v), std::max(it->second.second, *v)};
  };
  for (const SweepRow& r : res.rows) {
    if (!r.phi) {
      ++res.absent_rows;
      continue;
    }
    if (r.identity_error > kIdentityTol) ++res.identity_failures;
    identity_max = std::max(identity_max, r.identity_error);
    ++labels[r.class_label];
    track("x", r.x);
    track("nu", r.nu);
    track("delta", r.delta);
    track("phi", r.phi);
    track("xi1", r.xi1);
    track("xi2", r.xi2);
    track("theta1", r.theta1);
    track("theta2", r.theta2);
    track("re_g1", r.re_g1);
    track("im_g1", r.im_g1);
    track("g2", r.g2);
    track("p_gate", r.p_gate);
    track("p_nq", r.p_nq);
    track("p_vac", r.p_vac);
    track("unitarity_residual", r.unitarity_residual);
    if (cfg.mode == SweepMode::Appendix) track("phase_f_i", r.phase_f_i);
  }
  nlohmann::ordered_json s;
  s["config"] = config_to_json(cfg);
  s["rows"] = res.rows.size();
  s["absent_rows"] = res.absent_rows;
  s["identity_failures"] = res.identity_failures;
  s["identity_max_error"] = identity_max;
  s["identity_tol"] = kIdentityTol;
  s["subsystem_count"] = cfg.subsystem_count;
  s["threads"] = threads;
  nlohmann::ordered_json cols;
  for (const char* name : {"x", "nu", "delta", "phi", "xi1", "xi2", "theta1", "theta2", "re_g1", "im_g1", "g2",
                           "p_gate", "p_nq", "p_vac", "unitarity_residual", "phase_f_i"}) {
    auto it = ranges.find(name);
    if (it == ranges.end()) continue;
    cols[name] = {{"min", it->second.first}, {"max", it->second.second}};
  }
  s["columns"] = cols;
  nlohmann::ordered_json lab;
  for (const auto& [k, v] : labels) lab[k] = v;
  s["class_counts"] = lab;
  res.summary = s;
  return res;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string summary_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() >= ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0)
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".summary.json";
  return csv_path + ".summary.json";
}

void write_csv(const SweepResult& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  const bool appendix = r.config.mode == SweepMode::Appendix;
  out << "x,nu,delta,phi,xi1,xi2,theta1,theta2,branch,re_g1,im_g1,g2,p_gate,p_nq,p_vac,unitarity_residual,class_label";
  if (appendix) out << ",phase_f_i";
  out << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const SweepRow& row : r.rows) {
    out << format_double(row.x) << ',' << format_double(row.nu) << ',' << format_double(row.delta) << ','
        << opt(row.phi) << ',' << format_double(row.xi1) << ',' << format_double(row.xi2) << ',' << opt(row.theta1)
        << ',' << opt(row.theta2) << ',' << row.branch << ',' << opt(row.re_g1) << ',' << opt(row.im_g1) << ','
        << opt(row.g2) << ',' << opt(row.p_gate) << ',' << opt(row.p_nq) << ',' << opt(row.p_vac) << ','
        << opt(row.unitarity_residual) << ',' << row.class_label;
    if (appendix) out << ',' << opt(row.phase_f_i);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
  out.close();
  std::ofstream js(summary_path(path), std::ios::binary);
  if (!js) throw Error(ErrorCode::IoError, "cannot write summary beside '" + path + "'");
  js << r.summary.dump(2) << '\n';
}

std::vector<Polyline> trace_locus(const SweepConfig& cfg, TraceAxis axis) {
  check_config(cfg);
  if (cfg.mode == SweepMode::Tables) throw Error(ErrorCode::ConfigError, "tables mode has no grid");
  const std::vector<double> xs = cfg.x.values(), ys = cfg.y.values();
  const std::vector<Branch> branches =
      cfg.mode == SweepMode::Appendix || cfg.phi ? std::vector<Branch>{Branch::mm} : cfg.branches;
  std::vector<Polyline> out;

  for (Branch b : branches) {
    std::vector<std::vector<std::optional<double>>> grid(ys.size(), std::vector<std::optional<double>>(xs.size()));
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
      for (std::size_t ix = 0; ix < xs.size(); ++ix) grid[iy][ix] = cell_re_g1(cfg, xs[ix], ys[iy], b);

    for (int pass = 0; pass < 2; ++pass) {
      const bool along_x = pass == 0;
      if (along_x && axis == TraceAxis::Y) continue;
      if (!along_x && axis == TraceAxis::X) continue;
      const std::size_t lines = along_x ? ys.size() : xs.size();
      const std::size_t len = along_x ? xs.size() : ys.size();
      const Axis& scan = along_x ? cfg.x : cfg.y;
      std::vector<Polyline> open;
      std::vector<double> open_pos;  // scan-axis grid coordinate of each polyline's last point
      std::vector<std::size_t> open_line;
      for (std::size_t l = 0; l < lines; ++l) {
        std::vector<LocusPoint> found;
        for (std::size_t k = 0; k + 1 < len; ++k) {
          const auto& f0 = along_x ? grid[l][k] : grid[k][l];
          const auto& f1 = along_x ? grid[l][k + 1] : grid[k + 1][l];
          if (!f0 || !f1) continue;
          if (*f0 != 0.0 && (*f0 < 0.0) == (*f1 < 0.0)) continue;
          const double lo = along_x ? xs[k] : ys[k], hi = along_x ? xs[k + 1] : ys[k + 1];
          const double fixed = along_x ? ys[l] : xs[l];
          if (auto p = refine_crossing(cfg, scan, along_x, lo, hi, fixed, b)) found.push_back(*p);
        }
        // greedy continuation: join the nearest open polyline from the previous line
        std::vector<bool> used(open.size(), false);
        for (const LocusPoint& p : found) {
          const double pos = axis_coord(scan, along_x ? (cfg.mode == SweepMode::Appendix ? p.nu : p.x)
                                                      : (cfg.mode == SweepMode::XDelta   ? p.delta
                                                         : cfg.mode == SweepMode::XNu    ? p.nu
                                                                                         : p.params.theta2));
          int best = -1;
          double best_d = 2.0;
          for (std::size_t o = 0; o < open.size(); ++o) {
            if (used[o] || open_line[o] + 1 != l) continue;
            const double dd = std::abs(open_pos[o] - pos);
            if (dd <= best_d) {
              best_d = dd;
              best = static_cast<int>(o);
            }
          }
          if (best < 0) {
            Polyline pl;
            pl.branch = b;
            pl.scan_axis = along_x ? "x" : "y";
            open.push_back(pl);
            open_pos.push_back(pos);
            open_line.push_back(l);
            used.push_back(true);
            best = static_cast<int>(open.size() - 1);
          }
          used[best] = true;
          open[best].points.push_back(p);
          open_pos[best] = pos;
          open_line[best] = l;
        }
      }
      for (auto& pl : open) out.push_back(std::move(pl));
    }
  }
  return out;
}

namespace {

struct TableSpec {
  int table;
  std::string row;
  QrqParams params;
  std::string branch;
  std::string expected_class;  // label or regime name for table 3 bunching rows
  std::string prob_kind;
  double expected_prob;
  std::string expected_approach;
  std::string note;
};

QrqParams from_locus(double x, double nu, double delta, Branch b) {
  const PhiSolution s = phi_en(x, delta, b);
  if (!s.phi_en) throw Error(ErrorCode::InvalidArgument, "phi_en absent at table point");
  return convert_params_inv({x, nu, *s.phi_en, delta});
}

std::vector<TableSpec> table_specs(int which, double scale) {
  std::vector<TableSpec> v;
  const double r2 = std::numbers::sqrt2;
  if (which == 0 || which == 1) {
    const double nu_big = scale, x_big = scale;
    v.push_back({1, "1", from_locus(x_big, r2, 0.0, Branch::mm), "mm", "SqrtSwap", "p_gate", 1.0 / 3.0, "",
                 "x >> 1, nu = sqrt2, delta = 0"});
    v.push_back({1, "2", from_locus(r2 * nu_big, nu_big, 0.0, Branch::mm), "mm", "SqrtSwap", "p_gate", 0.25, "",
                 "x = sqrt2 nu, nu >> 1, delta = 0"});
    v.push_back({1, "3", from_locus(x_big, r2, 0.0, Branch::pm), "pm", "SqrtSwapDagger", "p_gate", 1.0 / 3.0, "",
                 "x >> 1, nu = sqrt2, delta = 0"});
    v.push_back({1, "4", from_locus(r2 * nu_big, nu_big, 0.0, Branch::pm), "pm", "SqrtSwapDagger", "p_gate", 0.25,
                 "", "x = sqrt2 nu, nu >> 1, delta = 0"});
  }
  if (which == 0 || which == 2) {
    const double x = scale, s = std::sqrt(scale);
    const double p4 = 4.0 / 13.0;
    v.push_back({2, "1", from_locus(x, s + r2, kPi, Branch::pm), "pm", "SqrtSwap", "p_gate", p4, "below",
                 "x >> 1, nu = sqrt x + sqrt2, delta = pi"});
    v.push_back({2, "2", from_locus(x, s - r2, kPi, Branch::pm), "pm", "SqrtSwap", "p_gate", p4, "above",
                 "x >> 1, nu = sqrt x - sqrt2, delta = pi"});
    v.push_back({2, "3", from_locus(x, s + r2, kPi, Branch::mm), "mm", "SqrtSwapDagger", "p_gate", p4, "below",
                 "x >> 1, nu = sqrt x + sqrt2, delta = pi"});
    v.push_back({2, "4", from_locus(x, s - r2, kPi, Branch::mm), "mm", "SqrtSwapDagger", "p_gate", p4, "above",
                 "x >> 1, nu = sqrt x - sqrt2, delta = pi"});
  }
  if (which == 0 || which == 3) {
    const double xi2 = scale, xi = std::sqrt(scale);
    const double h = kPi / 2.0;
    v.push_back({3, "1+", {2.0 / xi2, xi2, h, h}, "", "Swap", "p_gate", 1.0, "", "xi1 xi2 = 2, theta1 = theta2 = pi/2"});
    v.push_back({3, "1-", {2.0 / xi2, xi2, -h, -h}, "", "Swap", "p_gate", 1.0, "", "xi1 xi2 = 2, theta1 = theta2 = -pi/2"});
    v.push_back({3, "2+", {xi, xi, 0.0, h}, "", "BunchingLight", "p_nq", 0.5, "", "xi1 = xi2 >> 1, (0, pi/2)"});
    v.push_back({3, "2-", {xi, xi, 0.0, -h}, "", "BunchingLight", "p_nq", 0.5, "", "xi1 = xi2 >> 1, (0, -pi/2)"});
    v.push_back({3, "3+", {xi, xi, h, 0.0}, "", "BunchingAtoms", "p_nq", 0.5, "", "xi1 = xi2 >> 1, (pi/2, 0)"});
    v.push_back({3, "3-", {xi, xi, -h, 0.0}, "", "BunchingAtoms", "p_nq", 0.5, "", "xi1 = xi2 >> 1, (-pi/2, 0)"});
  }
  return v;
}

}  // namespace

std::vector<TableRowReport> verify_tables(int which, const TableOptions& opt) {
  if (which < 0 || which > 3) throw Error(ErrorCode::InvalidArgument, "table must be 1, 2 or 3 (0 for all)");
  std::vector<TableRowReport> out;
  for (const TableSpec& t : table_specs(which, opt.scale)) {
    TableRowReport r;
    r.table = t.table;
    r.row = t.row;
    r.params = t.params;
    r.branch = t.branch;
    r.expected_class = t.expected_class;
    r.prob_kind = t.prob_kind;
    r.expected_prob = t.expected_prob;
    r.expected_approach = t.expected_approach;
    r.note = t.note;
    const OutputDecomposition d = amplitudes(t.params);
    bool ok_class = false;
    if (t.table < 3 || t.row[0] == '1') {
      // locus rows carry rounding-level Re f_I; the gate is built from Im f_I
      const bool on_locus = t.table < 3;
      const cplx fi = on_locus ? cplx(0.0, d.f_i.imag()) : d.f_i;
      const double scale = std::abs(fi + d.f_s);
      if (scale > 0.0 && (on_locus || d.unitarity_residual <= 1e-9)) {
        TwoQubitGate g;
        g.matrix = (fi * identity_matrix() + d.f_s * swap_matrix()) / scale;
        const LocalInvariants inv = makhlin_invariants(g);
        r.g1 = inv.g1;
        r.g2 = inv.g2;
        r.got_class = to_string(classify_invariants(inv.g1, inv.g2, opt.class_tol).label);
      } else {
        r.got_class = to_string(ClassLabel::NonUnitary);
      }
      r.got_prob = on_locus ? (d.f_i.imag() * d.f_i.imag() + d.f_s * d.f_s) / d.norm_n : d.p_gate;
      ok_class = r.got_class == t.expected_class;
    } else {
      const RegimeReport rr = regime_classify(t.params);
      r.got_class = to_string(rr.regime);
      r.got_prob = d.p_nq;
      const double nl = std::norm(d.f_l), na = std::norm(d.f_a);
      const double frac = (t.expected_class == "BunchingLight" ? nl : na) / (nl + na);
      ok_class = r.got_class == t.expected_class && frac >= 1.0 - opt.prob_tol;
      if (rr.invariants) {
        r.g1 = rr.invariants->g1;
        r.g2 = rr.invariants->g2;
      }
    }
    bool ok_prob = std::abs(r.got_prob - t.expected_prob) <= opt.prob_tol;
    if (t.table == 3 && t.row[0] == '1') ok_prob = r.got_prob >= 1.0 - opt.prob_tol;
    bool ok_dir = true;
    if (!t.expected_approach.empty()) {
      r.got_approach = r.got_prob < t.expected_prob ? "below" : "above";
      ok_dir = r.got_approach == t.expected_approach;
    }
    r.pass = ok_class && ok_prob && ok_dir;
    out.push_back(r);
  }
  return out;
}

SweepConfig appendix_default_config() {
  SweepConfig c;
  c.mode = SweepMode::Appendix;
  c.x = {0.0, 4.0, 201, false};
  c.y = {0.0, kPi, 201, false};
  c.branches.clear();
  return c;
}

SweepResult appendix_scan(const SweepConfig& cfg, AppendixCheck* check) {
  if (cfg.mode != SweepMode::Appendix) throw Error(ErrorCode::ConfigError, "appendix_scan needs the appendix mode");
  SweepResult res = run_grid(cfg);
  AppendixCheck c;
  for (const SweepRow& r : res.rows) {
    if (r.p_vac && *r.p_vac > c.max_p_vac) {
      c.max_p_vac = *r.p_vac;
      c.xi_at_max = r.xi1;
      c.theta2_at_max = *r.theta2;
    }
  }
  const double r2 = std::numbers::sqrt2;
  c.exact_p_vac = amplitudes({r2, r2, 1.5 * kPi, 0.5 * kPi}).p_vac;
  const double dx = (cfg.x.max - cfg.x.min) / (cfg.x.n - 1), dy = (cfg.y.max - cfg.y.min) / (cfg.y.n - 1);
  const bool inside = cfg.x.min <= r2 && r2 <= cfg.x.max && cfg.y.min <= kPi / 2 && kPi / 2 <= cfg.y.max;
  c.pass = inside && std::abs(c.exact_p_vac - 1.0 / 3.0) <= 1e-12 && c.max_p_vac <= 1.0 / 3.0 + 1e-12 &&
           std::abs(c.xi_at_max - r2) <= dx && std::abs(c.theta2_at_max - kPi / 2) <= dy;
  res.summary["appendix"] = {{"max_p_vac", c.max_p_vac},
                             {"xi_at_max", c.xi_at_max},
                             {"theta2_at_max", c.theta2_at_max},
                             {"exact_p_vac", c.exact_p_vac},
                             {"pass", c.pass}};
  if (check) *check = c;
  return res;
}

SensitivityRecord sensitivity_check(double x, double frac, Branch branch) {
  SensitivityRecord s;
  s.x = x;
  s.nu = std::numbers::sqrt2;
  s.delta = 0.0;
  s.frac = frac;
  s.branch = to_string(branch);
  const PhiSolution ps = phi_en(x, 0.0, branch);
  if (!ps.phi_en) throw Error(ErrorCode::InvalidArgument, "phi_en absent at the sensitivity point");
  s.phi = *ps.phi_en;
  SweepConfig cfg;
  cfg.mode = SweepMode::XNu;
  cfg.delta = 0.0;
  const SweepRow base = evaluate_point(cfg, x, s.nu, branch);
  s.re_g1_base = base.re_g1.value_or(0.0);
  s.p_gate_base = base.p_gate.value_or(0.0);
  cfg.phi = s.phi;
  const SweepRow plus = evaluate_point(cfg, x * (1.0 + frac), s.nu, branch);
  const SweepRow minus = evaluate_point(cfg, x * (1.0 - frac), s.nu, branch);
  s.re_g1_plus = plus.re_g1.value_or(0.0);
  s.re_g1_minus = minus.re_g1.value_or(0.0);
  s.p_gate_plus = plus.p_gate.value_or(0.0);
  s.slope_nu = x / std::numbers::sqrt2;
  const SweepRow sp = evaluate_point(cfg, x * (1.0 + frac), s.slope_nu, branch);
  const SweepRow sm = evaluate_point(cfg, x * (1.0 - frac), s.slope_nu, branch);
  s.slope_re_g1_plus = sp.re_g1.value_or(0.0);
  s.slope_re_g1_minus = sm.re_g1.value_or(0.0);
  s.pass = std::abs(s.re_g1_plus) > s.threshold;
  return s;
}

}  // namespace qrq
