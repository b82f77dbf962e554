// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "qrq/fock_oracle.hpp"
#include "qrq/invariants.hpp"
#include "qrq/qrq_core.hpp"
#include "qrq/sweeps.hpp"

using namespace qrq;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR2 = std::numbers::sqrt2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

TwoQubitGate gate(const Mat4& m) { return {m, false}; }

Outcome invariant_table() {
  double err = 0.0;
  auto want = [&](const Mat4& m, cplx g1, double g2) {
    const LocalInvariants inv = makhlin_invariants(gate(m));
    err = std::max({err, std::abs(inv.g1 - g1), std::abs(inv.g2 - g2)});
  };
  want(identity_matrix(), 1.0, 3.0);
  for (std::uint64_t s = 0; s < 10; ++s) want(random_local_gate(s).matrix, 1.0, 3.0);
  want(swap_matrix(), -1.0, -3.0);
  want(cnot_matrix(), 0.0, 1.0);
  want(sqrt_swap_matrix(), cplx(0.0, 0.25), 0.0);
  want(sqrt_swap_matrix().adjoint(), cplx(0.0, -0.25), 0.0);
  return {err <= 1e-9, fmt("max deviation %.2e", err)};
}

Outcome local_invariance() {
  const Mat4 u = random_unitary(2024);
  const LocalInvariants ref = makhlin_invariants(gate(u));
  double err = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Mat4 m = random_local_gate(4 * s).matrix * u * random_local_gate(4 * s + 1).matrix;
    const LocalInvariants inv = makhlin_invariants(gate(m));
    err = std::max({err, std::abs(inv.g1 - ref.g1), std::abs(inv.g2 - ref.g2)});
  }
  return {err <= 1e-10, fmt("100 trials, max drift %.2e", err)};
}

Outcome entangling() {
  auto ep = [](const Mat4& m) { return makhlin_invariants(gate(m)).entangling_power; };
  const double e1 = std::abs(ep(sqrt_swap_matrix()) - 1.0 / 6.0);
  const double e2 = std::abs(ep(cnot_matrix()) - 2.0 / 9.0);
  const double e3 = std::abs(ep(swap_matrix()));
  const double err = std::max({e1, e2, e3});
  return {err <= 1e-12, fmt("max deviation %.2e", err)};
}

Outcome table(int which) {
  const std::vector<TableRowReport> rows = verify_tables(which);
  bool ok = !rows.empty();
  std::string d;
  for (const TableRowReport& r : rows) {
    ok = ok && r.pass;
    d += r.row + ":" + r.got_class + " " + fmt("%.6f", r.got_prob);
    if (!r.got_approach.empty()) d += "(" + r.got_approach + ")";
    d += "; ";
  }
  return {ok, d};
}

Outcome table3_appendix() {
  Outcome t = table(3);
  const QrqParams p{kR2, kR2, 0.5 * kPi + kPi, 0.5 * kPi};
  const OutputDecomposition d = amplitudes(p);
  const RegimeReport rr = regime_classify(p);
  const bool vac = std::abs(d.p_vac - 1.0 / 3.0) <= 1e-14 && rr.cls.label == ClassLabel::Identity;
  t.detail += fmt("p_vac(sqrt2, pi/2) = %.15f", d.p_vac) + " " + to_string(rr.cls.label);
  t.pass = t.pass && vac;
  return t;
}

Outcome existence_bound() {
  bool ok = true;
  std::string d;
  for (double delta : {0.0, kPi}) {
    const double xm = x_min(delta);
    bool below = false, above = false;
    for (Branch b : {Branch::pp, Branch::pm, Branch::mp, Branch::mm}) {
      below = below || phi_en(xm - 1e-6, delta, b).phi_en.has_value();
      above = above || phi_en(xm + 1e-6, delta, b).phi_en.has_value();
    }
    ok = ok && !below && above;
    d += fmt("x_min(%.4f) = %.9f ", delta, xm);
  }
  return {ok, d};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uxi(0.0, 1.5), uth(0.0, 2 * kPi);
  double err = 0.0, deficit = 0.0;
  for (int k = 0; k < 200; ++k) {
    const QrqParams p{uxi(rng), uxi(rng), uth(rng), uth(rng)};
    const ComparisonReport r = compare_closed_form(p, 16);
    err = std::max(err, r.max_rel_err);
    deficit = std::max(deficit, r.norm_deficit);
  }
  return {err <= 1e-6 && deficit <= 1e-8, fmt("200 draws, max rel err %.2e, max deficit %.2e", err, deficit)};
}

Outcome pe_identity() {
  // sqrt(SWAP)-family loci at delta = 0 and delta = pi
  std::vector<LocusPoint> pts;
  SweepConfig c;
  c.mode = SweepMode::XNu;
  c.branches = {Branch::mm, Branch::pm};
  c.x = {2.0, 1e5, 60, true};
  c.y = {0.2, 1000.0, 60, true};
  for (double delta : {0.0, kPi}) {
    c.delta = delta;
    if (delta != 0.0) c.x.min = 10.0;
    for (const Polyline& pl : trace_locus(c))
      for (const LocusPoint& p : pl.points) pts.push_back(p);
  }
  // moderate constants for the oracle: x just above the delta = 0 bound region with xi <= 4
  SweepConfig m;
  m.mode = SweepMode::XNu;
  m.delta = 0.0;
  m.branches = {Branch::mm, Branch::pm};
  m.x = {2.0, 15.0, 40, false};
  m.y = {0.2, 4.0, 40, false};
  std::vector<LocusPoint> moderate;
  for (const Polyline& pl : trace_locus(m))
    for (const LocusPoint& p : pl.points)
      if (p.params.xi1 <= 4.0 && p.params.xi2 <= 4.0) moderate.push_back(p);

  int used = 0;
  double e_nq = 0.0, e_vac = 0.0;
  for (const LocusPoint& p : pts) {
    if (p.pe_residual > 1e-8) continue;
    ++used;
    e_nq = std::max(e_nq, std::abs(p.p_nq - p.p_gate));
    e_vac = std::max(e_vac, std::abs(p.p_vac - (1.0 - 2.0 * p.p_gate)));
  }
  // lowest squeezing first; the truncation grows fast with xi
  std::sort(moderate.begin(), moderate.end(), [](const LocusPoint& a, const LocusPoint& b) {
    return std::max(a.params.xi1, a.params.xi2) < std::max(b.params.xi1, b.params.xi2);
  });
  int oracle_used = 0;
  double e_bunch = 0.0, xi_top = 0.0;
  const QubitInput cross{1.0, 0.0, 0.0, 1.0};
  OracleOptions big;
  big.n_limit = 1024;
  const LocusPoint* prev = nullptr;
  for (const LocusPoint& p : moderate) {
    if (oracle_used == 6) break;
    if (p.pe_residual > 1e-8) continue;
    // both branches can land on the same point
    if (prev && std::abs(prev->params.xi1 - p.params.xi1) + std::abs(prev->params.xi2 - p.params.xi2) <= 1e-9) continue;
    prev = &p;
    const SectorDecomposition sd = decompose_sectors(run_qrq(p.params, cross, 32, big), cross);
    e_bunch = std::max(e_bunch, std::abs(sd.w_nql - sd.w_nqa));
    xi_top = std::max({xi_top, p.params.xi1, p.params.xi2});
    ++oracle_used;
  }
  const bool ok = used > 0 && oracle_used > 0 && e_nq <= 1e-6 && e_vac <= 1e-6 && e_bunch <= 1e-6;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d locus points: |p_nq-P| %.2e, |p_vac-(1-2P)| %.2e; %d oracle points (xi <= %.2f): |w_nql-w_nqa| %.2e",
                used, e_nq, e_vac, oracle_used, xi_top, e_bunch);
  return {ok, buf};
}

Outcome sensitivity() {
  const SensitivityRecord s = sensitivity_check(1e4, 0.04, Branch::mm);
  return {s.pass, fmt("|Re g1| %.3e -> %.3e at +4%% x (threshold %.1f)", std::abs(s.re_g1_base),
                      std::abs(s.re_g1_plus), s.threshold)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> crit{
      {"invariant table", invariant_table},
      {"local invariance", local_invariance},
      {"entangling power", entangling},
      {"table 1", [] { return table(1); }},
      {"table 2", [] { return table(2); }},
      {"table 3 and vacuum maximum", table3_appendix},
      {"existence bound", existence_bound},
      {"oracle equivalence", oracle_equivalence},
      {"PE structural identity", pe_identity},
      {"sensitivity", sensitivity},
  };
  const double limits[] = {1, 5, 1, 1, 1, 1, 1, 120, 120, 1};
  int failed = 0;
  for (std::size_t k = 0; k < crit.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limits[k]) {
      o.pass = false;
      o.detail += fmt(" [over time budget %.0f s]", limits[k]);
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", k + 1, crit[k].first.c_str(),
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(crit.size()) - failed, crit.size());
  return failed == 0 ? 0 : 1;
}
