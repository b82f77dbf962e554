#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qrq/qrq_core.hpp"

namespace qrq {

enum class SweepMode { XDelta, XNu, Appendix, Tables };

struct Axis {
  double min = 0.0;
  double max = 1.0;
  int n = 2;
  bool log = false;
  std::vector<double> values() const;
};

// Axis meaning per mode: XDelta (x, delta) at fixed nu; XNu (x, nu) at fixed delta;
// Appendix (xi, theta2) with xi1 = xi2 = xi and theta1 = theta2 + pi.
struct SweepConfig {
  SweepMode mode = SweepMode::XDelta;
  double nu = 100.0;
  double delta = 0.0;
  Axis x{1.6, 1e5, 200, true};
  Axis y{-1.5, 1.5, 200, false};
  std::vector<Branch> branches{Branch::mm};
  std::optional<double> phi;  // fixed phi instead of phi_en
  std::string output;
  int subsystem_count = 1;
  int threads = 0;  // 0 = auto
  int table = 1;
  double class_tol = 1e-6;
};

struct SweepRow {
  double x = 0.0, nu = 0.0, delta = 0.0;
  std::optional<double> phi;
  double xi1 = 0.0, xi2 = 0.0;
  std::optional<double> theta1, theta2;
  std::string branch;
  std::optional<double> re_g1, im_g1, g2, p_gate, p_nq, p_vac, unitarity_residual;
  std::string class_label;
  std::optional<double> phase_f_i;  // appendix scans only
  double identity_error = 0.0;      // |g2 - (-3 + 6 u^2/(u^2+s^2))|
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  int absent_rows = 0;
  int identity_failures = 0;
  nlohmann::ordered_json summary;
};

struct LocusPoint {
  double x = 0.0, nu = 0.0, delta = 0.0, phi = 0.0;
  QrqParams params;
  Branch branch = Branch::mm;
  double re_g1 = 0.0, im_g1 = 0.0, g2 = 0.0;
  double p_gate = 0.0, p_nq = 0.0, p_vac = 0.0;
  double pe_residual = 0.0;
};

struct Polyline {
  Branch branch = Branch::mm;
  std::string scan_axis;  // axis along which crossings were bracketed
  std::vector<LocusPoint> points;
};

enum class TraceAxis { X, Y, Both };

struct TableOptions {
  double scale = 1e6;
  double class_tol = 1e-2;
  double prob_tol = 1e-3;
};

struct TableRowReport {
  int table = 0;
  std::string row;
  QrqParams params;
  std::string branch;
  std::string expected_class, got_class;
  std::string prob_kind;
  double expected_prob = 0.0, got_prob = 0.0;
  std::string expected_approach, got_approach;
  cplx g1{};
  double g2 = 0.0;
  bool pass = false;
  std::string note;
};

// Invariant displacement after scaling x by (1 + frac) with phi held at its locus value.
struct SensitivityRecord {
  double x = 0.0, nu = 0.0, delta = 0.0, phi = 0.0, frac = 0.0;
  std::string branch;
  double re_g1_base = 0.0, re_g1_plus = 0.0, re_g1_minus = 0.0;
  double p_gate_base = 0.0, p_gate_plus = 0.0;
  // same probe on the sloping locus x = sqrt(2) nu
  double slope_nu = 0.0, slope_re_g1_plus = 0.0, slope_re_g1_minus = 0.0;
  double threshold = 0.3;
  bool pass = false;
};

struct AppendixCheck {
  double max_p_vac = 0.0;
  double xi_at_max = 0.0;
  double theta2_at_max = 0.0;
  double exact_p_vac = 0.0;  // closed form at (sqrt 2, pi/2)
  bool pass = false;
};

std::string to_string(SweepMode m);
SweepConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const SweepConfig& c);
std::vector<std::string> preset_names();
nlohmann::json preset(const std::string& name);

int resolve_threads(int requested);

SweepRow evaluate_point(const SweepConfig& cfg, double xv, double yv, Branch branch, bool with_branch = true);
SweepResult run_grid(const SweepConfig& cfg);
void write_csv(const SweepResult& r, const std::string& path);
std::string summary_path(const std::string& csv_path);
std::string format_double(double v);

std::vector<Polyline> trace_locus(const SweepConfig& cfg, TraceAxis axis = TraceAxis::Both);
std::vector<TableRowReport> verify_tables(int which, const TableOptions& opt = {});
SweepResult appendix_scan(const SweepConfig& cfg, AppendixCheck* check = nullptr);
SweepConfig appendix_default_config();
SensitivityRecord sensitivity_check(double x = 1e4, double frac = 0.04, Branch branch = Branch::mm);

}  // namespace qrq
