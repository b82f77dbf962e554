#include "qrq/json_io.hpp"

#include <cmath>

#include "qrq/errors.hpp"

namespace qrq {

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson to_json(cplx z) { return ojson::array({number_or_null(z.real()), number_or_null(z.imag())}); }

ojson to_json(const Mat4& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < 4; ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < 4; ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

ojson to_json(const QrqParams& p) {
  return {{"xi1", p.xi1}, {"xi2", p.xi2}, {"theta1", p.theta1}, {"theta2", p.theta2}};
}

ojson to_json(const CompParams& c) { return {{"x", c.x}, {"nu", c.nu}, {"phi", c.phi}, {"delta", c.delta}}; }

ojson to_json(const LocalInvariants& inv) {
  return {{"g1", to_json(inv.g1)}, {"g2", number_or_null(inv.g2)}, {"entangling_power", number_or_null(inv.entangling_power)}};
}

ojson to_json(const WeylPoint& w) {
  return {{"alpha", w.alpha}, {"chamber_coords", w.chamber_coords}, {"lambdas", w.lambdas}, {"degenerate", w.degenerate}};
}

ojson to_json(const ClassResult& c) {
  ojson j = {{"label", to_string(c.label)}, {"g1", to_json(c.g1)}, {"g2", number_or_null(c.g2)}, {"tol", c.tol}};
  if (c.label == ClassLabel::NonUnitary) j["unitarity_error"] = c.unitarity_error;
  return j;
}

ojson to_json(const BogoliubovPair& b) {
  ojson g = ojson::array(), r = ojson::array();
  for (int i = 0; i < 2; ++i) {
    ojson gr = ojson::array(), rr = ojson::array();
    for (int k = 0; k < 2; ++k) {
      gr.push_back(to_json(b.g(i, k)));
      rr.push_back(to_json(b.r(i, k)));
    }
    g.push_back(gr);
    r.push_back(rr);
  }
  return {{"direction", to_string(b.direction)}, {"prefactor", to_json(BogoliubovPair::prefactor)}, {"g", g}, {"r", r}};
}

ojson to_json(const OutputDecomposition& d) {
  return {{"f_i_re", number_or_null(d.f_i.real())},
          {"f_i_im", number_or_null(d.f_i.imag())},
          {"f_s", number_or_null(d.f_s)},
          {"f_l_re", number_or_null(d.f_l.real())},
          {"f_l_im", number_or_null(d.f_l.imag())},
          {"f_a_re", number_or_null(d.f_a.real())},
          {"f_a_im", number_or_null(d.f_a.imag())},
          {"f_vac_re", number_or_null(d.f_vac.real())},
          {"f_vac_im", number_or_null(d.f_vac.imag())},
          {"norm_n", number_or_null(d.norm_n)},
          {"p_gate", number_or_null(d.p_gate)},
          {"p_nq", number_or_null(d.p_nq)},
          {"p_vac", number_or_null(d.p_vac)},
          {"unitarity_residual", number_or_null(d.unitarity_residual)}};
}

ojson to_json(const PhiSolution& s) {
  ojson j = {{"branch", to_string(s.branch)}};
  j["phi_en"] = s.phi_en ? ojson(*s.phi_en) : ojson(nullptr);
  j["discriminant"] = number_or_null(s.discriminant);
  j["residual"] = s.phi_en ? number_or_null(s.residual) : ojson(nullptr);
  return j;
}

ojson to_json(const RegimeReport& r) {
  ojson j = to_json(r.amps);
  j["class_label"] = to_string(r.cls.label);
  j["regime"] = to_string(r.regime);
  return j;
}

ojson to_json(const ComparisonReport& r) {
  ojson j = {{"xi1", r.params.xi1},
             {"xi2", r.params.xi2},
             {"theta1", r.params.theta1},
             {"theta2", r.params.theta2},
             {"n_max", r.n_max},
             {"max_rel_err", number_or_null(r.max_rel_err)},
             {"w_higher", number_or_null(r.w_higher)},
             {"norm_deficit", number_or_null(r.norm_deficit)}};
  j["diagnostics"] = {{"bunching_rel_err", number_or_null(r.bunching_rel_err)},
                      {"bunching_rel_err_printed_labels", number_or_null(r.bunching_rel_err_printed_labels)},
                      {"vacuum_rel_err", number_or_null(r.vacuum_rel_err)},
                      {"w_higher_same_pair", number_or_null(r.w_higher_same_pair)},
                      {"vacuum_share_same_pair", number_or_null(r.vacuum_share_same_pair)}};
  return j;
}

ojson to_json(const LocusPoint& p) {
  return {{"x", p.x},
          {"nu", p.nu},
          {"delta", p.delta},
          {"phi", p.phi},
          {"params", to_json(p.params)},
          {"branch", to_string(p.branch)},
          {"re_g1", p.re_g1},
          {"im_g1", p.im_g1},
          {"g2", p.g2},
          {"p_gate", p.p_gate},
          {"p_nq", p.p_nq},
          {"p_vac", p.p_vac},
          {"pe_residual", p.pe_residual}};
}

ojson to_json(const Polyline& p) {
  ojson pts = ojson::array();
  for (const auto& q : p.points) pts.push_back(to_json(q));
  return {{"branch", to_string(p.branch)}, {"scan_axis", p.scan_axis}, {"points", pts}};
}

ojson to_json(const TableRowReport& r) {
  ojson j = {{"table", r.table},
             {"row", r.row},
             {"params", to_json(r.params)},
             {"branch", r.branch},
             {"expected_class", r.expected_class},
             {"got_class", r.got_class},
             {"prob_kind", r.prob_kind},
             {"expected_prob", r.expected_prob},
             {"got_prob", r.got_prob}};
  if (!r.expected_approach.empty()) {
    j["expected_approach"] = r.expected_approach;
    j["got_approach"] = r.got_approach;
  }
  j["g1"] = to_json(r.g1);
  j["g2"] = r.g2;
  j["pass"] = r.pass;
  j["note"] = r.note;
  return j;
}

ojson to_json(const AppendixCheck& c) {
  return {{"max_p_vac", c.max_p_vac},
          {"xi_at_max", c.xi_at_max},
          {"theta2_at_max", c.theta2_at_max},
          {"exact_p_vac", c.exact_p_vac},
          {"pass", c.pass}};
}

ojson to_json(const SensitivityRecord& s) {
  return {{"x", s.x},
          {"nu", s.nu},
          {"delta", s.delta},
          {"phi", s.phi},
          {"frac", s.frac},
          {"branch", s.branch},
          {"re_g1_base", s.re_g1_base},
          {"re_g1_plus", s.re_g1_plus},
          {"re_g1_minus", s.re_g1_minus},
          {"p_gate_base", s.p_gate_base},
          {"p_gate_plus", s.p_gate_plus},
          {"slope_nu", s.slope_nu},
          {"slope_re_g1_plus", s.slope_re_g1_plus},
          {"slope_re_g1_minus", s.slope_re_g1_minus},
          {"threshold", s.threshold},
          {"pass", s.pass}};
}

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidArgument, "complex entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat4 matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidArgument, "gate must be a 4x4 array");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) throw Error(ErrorCode::InvalidArgument, "gate must be a 4x4 array");
    for (int k = 0; k < 4; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

}  // namespace qrq
