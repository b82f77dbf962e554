#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>
#include <algorithm>

#include "qrq/errors.hpp"
#include "qrq/sweeps.hpp"

using namespace qrq;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR2 = std::numbers::sqrt2;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

SweepConfig small_xnu() {
  SweepConfig c;
  c.mode = SweepMode::XNu;
  c.delta = 0.0;
  c.x = {1.0, 1e4, 30, true};
  c.y = {0.5, 100.0, 25, true};
  c.branches = {Branch::mm, Branch::pm};
  return c;
}

std::filesystem::path tmp_dir() {
  auto d = std::filesystem::temp_directory_path() / ("qrq_sweeps_" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("axis values") {
  const std::vector<double> lin = Axis{0.0, 1.0, 5, false}.values();
  REQUIRE(lin.size() == 5);
  CHECK(lin[2] == 0.5);
  CHECK(lin.back() == 1.0);
  const std::vector<double> lg = Axis{1.0, 1e4, 5, true}.values();
  CHECK(std::abs(lg[1] - 10.0) <= 1e-12);
  CHECK(lg.back() == 1e4);
}

TEST_CASE("config parsing") {
  const SweepConfig c = config_from_json(nlohmann::json::parse(R"({
    "mode": "x_nu", "delta": 0.5, "x": {"min": 2, "max": 100, "n": 10, "log": true},
    "y": {"min": 1, "max": 10, "n": 4}, "branches": ["pm", "mm"], "subsystem_count": 3})"));
  CHECK(c.mode == SweepMode::XNu);
  CHECK(c.delta == 0.5);
  CHECK(c.x.n == 10);
  CHECK(c.y.log == false);
  REQUIRE(c.branches.size() == 2);
  CHECK(c.branches[0] == Branch::pm);
  CHECK(c.subsystem_count == 3);

  const SweepConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back).dump() == config_to_json(c).dump());

  auto bad = [](const char* text) { return config_from_json(nlohmann::json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"mode": "x_nu", "bogus": 1})"), Error);
  CHECK_THROWS_AS(bad(R"({"mode": "nope"})"), Error);
  CHECK_THROWS_AS(bad(R"({"mode": "x_nu", "x": {"min": 2, "max": 100, "n": 1}})"), Error);
  CHECK_THROWS_AS(bad(R"({"mode": "x_delta", "nu": -1})"), Error);
  CHECK_THROWS_AS(bad(R"([1, 2])"), Error);
}

TEST_CASE("presets") {
  const std::vector<std::string> names = preset_names();
  CHECK(names.size() == 10);
  for (const std::string& n : names) CHECK_NOTHROW(config_from_json(preset(n)));
  CHECK(config_from_json(preset("fig8")).mode == SweepMode::Appendix);
  CHECK(config_from_json(preset("table2")).table == 2);
  CHECK_THROWS_AS(preset("fig99"), Error);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  ::setenv("QRQ_THREADS", "2", 1);
  CHECK(resolve_threads(0) == 2);
  ::setenv("QRQ_THREADS", "abc", 1);
  CHECK_THROWS_AS(resolve_threads(0), Error);
  ::unsetenv("QRQ_THREADS");
  CHECK(resolve_threads(0) >= 1);
  CHECK_THROWS_AS(resolve_threads(-1), Error);
}

TEST_CASE("run_grid layout and summary") {
  SweepConfig c = small_xnu();
  c.threads = 1;
  const SweepResult r = run_grid(c);
  REQUIRE(r.rows.size() == 2u * 30 * 25);
  // branch-major, then y, then x
  const std::vector<double> xs = c.x.values(), ys = c.y.values();
  CHECK(r.rows[0].branch == "mm");
  CHECK(r.rows[1].x == xs[1]);
  CHECK(r.rows[30].nu == ys[1]);
  CHECK(r.rows[30 * 25].branch == "pm");
  // x = 1 sits below the existence bound
  CHECK_FALSE(r.rows[0].phi.has_value());
  CHECK_FALSE(r.rows[0].re_g1.has_value());
  CHECK(r.absent_rows > 0);
  CHECK(r.identity_failures == 0);
  CHECK(r.summary["identity_max_error"].get<double>() <= 1e-8);
  CHECK(r.summary["columns"].contains("p_gate"));

  c.threads = 3;
  const SweepResult r3 = run_grid(c);
  REQUIRE(r3.rows.size() == r.rows.size());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    CHECK(r3.rows[k].re_g1 == r.rows[k].re_g1);
    CHECK(r3.rows[k].p_gate == r.rows[k].p_gate);
  }
}

TEST_CASE("x_delta map at nu = 100 separates Identity and SWAP regions") {
  SweepConfig c;
  c.mode = SweepMode::XDelta;
  c.nu = 100.0;
  c.x = {1.7, 1e5, 40, true};
  c.y = {-1.5, 1.5, 21, false};
  const SweepResult r = run_grid(c);
  double lo = 1.0, hi = -1.0;
  for (const SweepRow& row : r.rows)
    if (row.re_g1) {
      lo = std::min(lo, *row.re_g1);
      hi = std::max(hi, *row.re_g1);
    }
  CHECK(hi >= 0.99);
  CHECK(lo <= -0.99);
  CHECK(r.identity_failures == 0);
}

TEST_CASE("CSV rows are recomputable") {
  SweepConfig c = small_xnu();
  c.x.n = 6;
  c.y.n = 4;
  const SweepResult r = run_grid(c);
  const auto path = tmp_dir() / "grid.csv";
  write_csv(r, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "x,nu,delta,phi,xi1,xi2,theta1,theta2,branch,re_g1,im_g1,g2,p_gate,p_nq,p_vac,unitarity_residual,class_label");
  std::size_t k = 0;
  int present = 0;
  while (std::getline(in, line)) {
    const std::vector<std::string> cells = split(line);
    REQUIRE(cells.size() == 17);
    const SweepRow row = evaluate_point(c, std::stod(cells[0]), std::stod(cells[1]), branch_from_string(cells[8]));
    CHECK(format_double(row.x) == cells[0]);
    if (row.re_g1) {
      ++present;
      CHECK(format_double(*row.phi) == cells[3]);
      CHECK(format_double(*row.re_g1) == cells[9]);
      CHECK(format_double(*row.g2) == cells[11]);
      CHECK(format_double(*row.p_gate) == cells[12]);
      CHECK(row.class_label == cells[16]);
    } else {
      CHECK(cells[9].empty());
    }
    ++k;
  }
  CHECK(k == r.rows.size());
  CHECK(present > 0);
  CHECK(std::filesystem::exists(summary_path(path.string())));
  CHECK(summary_path("a/b.csv") == "a/b.summary.json");
  CHECK_THROWS_AS(write_csv(r, "/nonexistent_dir/x.csv"), Error);
}

TEST_CASE("locus on nu = sqrt2 at delta = 0 is the sqrt(SWAP) family") {
  SweepConfig c;
  c.mode = SweepMode::XNu;
  c.delta = 0.0;
  c.x = {100.0, 1e5, 12, true};
  c.y = {1.0, 2.0, 11, false};
  c.branches = {Branch::mm};
  const std::vector<Polyline> lines = trace_locus(c, TraceAxis::Y);
  int near = 0;
  for (const Polyline& pl : lines)
    for (const LocusPoint& p : pl.points) {
      CHECK(std::abs(p.re_g1) <= 1e-8);
      if (std::abs(p.nu - kR2) < 1e-3 && p.x >= 1e4) {
        ++near;
        CHECK(std::abs(std::hypot(p.re_g1, p.im_g1) - 0.25) <= 1e-6 * (1e5 / p.x) * 10);
      }
    }
  CHECK(near >= 2);
}

TEST_CASE("delta = pi locus crossings straddle x = nu^2") {
  SweepConfig c;
  c.mode = SweepMode::XNu;
  c.delta = kPi;
  c.x = {5e3, 2e4, 200, true};
  c.y = {99.0, 101.0, 3, false};
  c.branches = {Branch::pm};
  const std::vector<Polyline> lines = trace_locus(c, TraceAxis::X);
  std::vector<double> roots;
  for (const Polyline& pl : lines)
    for (const LocusPoint& p : pl.points)
      if (std::abs(p.nu - 100.0) < 1e-12) roots.push_back(std::sqrt(p.x));
  REQUIRE(roots.size() >= 2);
  std::sort(roots.begin(), roots.end());
  const double lo = roots.front(), hi = roots.back();
  CHECK(lo < 100.0);
  CHECK(hi > 100.0);
  // symmetric up to O(1/nu) corrections
  CHECK(std::abs((lo + hi) / 2 - 100.0) <= 5e-2);
  CHECK(std::abs(hi - lo - 2 * kR2) <= 0.1);
}

TEST_CASE("identity regime has no crossing") {
  SweepConfig c = appendix_default_config();
  c.x = {0.5, 3.0, 15, false};
  c.y = {0.1, 3.0, 15, false};
  CHECK(trace_locus(c).empty());
}

TEST_CASE("tables") {
  const std::vector<TableRowReport> all = verify_tables(0);
  CHECK(all.size() == 14);
  for (const TableRowReport& r : all) CHECK_MESSAGE(r.pass, "table ", r.table, " row ", r.row, " got ", r.got_class);

  const std::vector<TableRowReport> t2 = verify_tables(2);
  REQUIRE(t2.size() == 4);
  CHECK(t2[0].got_approach == "below");
  CHECK(t2[1].got_approach == "above");
  CHECK(std::abs(t2[0].got_prob - 0.3076254487) <= 1e-6);
  CHECK(std::abs(t2[1].got_prob - 0.3077593378) <= 1e-6);

  const std::vector<TableRowReport> t1 = verify_tables(1);
  CHECK(std::abs(t1[0].got_prob - 1.0 / 3.0) <= 1e-5);
  CHECK(std::abs(t1[1].got_prob - 0.25) <= 1e-5);
  CHECK(std::abs(t1[0].g1 - cplx(0.0, 0.25)) <= 1e-5);

  CHECK_THROWS_AS(verify_tables(4), Error);
}

TEST_CASE("appendix scan") {
  AppendixCheck chk;
  const SweepResult r = appendix_scan(appendix_default_config(), &chk);
  CHECK(chk.pass);
  CHECK(std::abs(chk.exact_p_vac - 1.0 / 3.0) <= 1e-15);
  CHECK(std::abs(chk.xi_at_max - kR2) <= 0.02);
  CHECK(std::abs(chk.theta2_at_max - kPi / 2) <= kPi / 200);
  CHECK(r.summary["appendix"]["pass"].get<bool>());

  const SweepConfig c = appendix_default_config();
  const SweepRow at = evaluate_point(c, kR2, kPi / 2, Branch::mm);
  CHECK(std::abs(*at.p_vac - 1.0 / 3.0) <= 1e-14);
  CHECK(std::abs(*at.phase_f_i) <= 1e-14);
  CHECK(at.class_label == "Identity");
  CHECK(*evaluate_point(c, 0.0, 1.0, Branch::mm).p_vac == 0.0);
  CHECK(*evaluate_point(c, 100.0, kPi / 2, Branch::mm).p_vac <= 1e-3);
  CHECK(*evaluate_point(c, 1000.0, kPi / 2, Branch::mm).p_vac <= 1e-5);
}

TEST_CASE("probability approaches 1/3 monotonically along nu = sqrt2") {
  SweepConfig c;
  c.mode = SweepMode::XNu;
  c.delta = 0.0;
  double prev = 1.0;
  for (const double x : Axis{100.0, 1e6, 60, true}.values()) {
    const SweepRow r = evaluate_point(c, x, kR2, Branch::mm);
    REQUIRE(r.p_gate);
    const double dev = std::abs(*r.p_gate - 1.0 / 3.0);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("sensitivity record") {
  const SensitivityRecord s = sensitivity_check();
  // nu = sqrt2 is the locus only asymptotically
  CHECK(std::abs(s.re_g1_base) <= 1e-3);
  CHECK(s.x == 1e4);
  CHECK(s.frac == 0.04);
  // measured: the displacement at nu = sqrt2 is tiny, on the sloping locus it is sizable
  CHECK(std::abs(s.re_g1_plus) < 1e-3);
  CHECK(std::abs(s.slope_re_g1_plus - 0.0585) <= 5e-3);
  CHECK(std::abs(s.slope_re_g1_minus + 0.0615) <= 5e-3);
  CHECK(s.pass == (std::abs(s.re_g1_plus) > s.threshold));
}
