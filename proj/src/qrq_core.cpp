#include "qrq/qrq_core.hpp"

#include <cmath>
#include <numbers>

#include "qrq/errors.hpp"

namespace qrq {

namespace {

const cplx I1{0.0, 1.0};

bool re_fi_vanishes(const OutputDecomposition& d, double tol) {
  return std::abs(d.f_i.real()) <= tol * std::max(1.0, std::abs(d.f_i));
}

void require_re_fi_zero(const OutputDecomposition& d, double tol) {
  if (!re_fi_vanishes(d, tol))
    throw Error(ErrorCode::PreconditionReFIBroken,
                "Re f_I = " + std::to_string(d.f_i.real()) + " is not zero at this point");
}

Eigen::Matrix4cd rotation_transfer(double t1, double t2) {
  Eigen::Vector4cd d(std::polar(1.0, t1), std::polar(1.0, t2), std::polar(1.0, -t1), std::polar(1.0, -t2));
  return d.asDiagonal();
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::pp: return "pp";
    case Branch::pm: return "pm";
    case Branch::mp: return "mp";
    case Branch::mm: return "mm";
  }
  return "mm";
}

Branch branch_from_string(const std::string& s) {
  if (s == "pp") return Branch::pp;
  if (s == "pm") return Branch::pm;
  if (s == "mp") return Branch::mp;
  if (s == "mm") return Branch::mm;
  throw Error(ErrorCode::InvalidArgument, "unknown branch '" + s + "' (expected pp, pm, mp or mm)");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::None: return "None";
    case Regime::IdentityClass: return "IdentityClass";
    case Regime::SwapDeterministic: return "SwapDeterministic";
    case Regime::BunchingLight: return "BunchingLight";
    case Regime::BunchingAtoms: return "BunchingAtoms";
    case Regime::SqrtSwapFamily: return "SqrtSwapFamily";
  }
  return "None";
}

std::string to_string(Direction d) { return d == Direction::InFromOut ? "InFromOut" : "OutFromIn"; }

void validate(const QrqParams& p) {
  if (!std::isfinite(p.xi1) || !std::isfinite(p.xi2) || !std::isfinite(p.theta1) || !std::isfinite(p.theta2))
    throw Error(ErrorCode::InvalidArgument, "parameters must be finite");
  if (p.xi1 < 0.0 || p.xi2 < 0.0) throw Error(ErrorCode::NegativeConstant, "xi1 and xi2 must be non-negative");
}

CompParams convert_params(const QrqParams& p) {
  return {p.xi1 * p.xi2, p.xi2, p.theta1 + p.theta2, p.theta1 - p.theta2};
}

QrqParams convert_params_inv(const CompParams& c) {
  if (!(c.nu > 0.0)) throw Error(ErrorCode::NuNonPositive, "nu must be positive");
  return {c.x / c.nu, c.nu, 0.5 * (c.phi + c.delta), 0.5 * (c.phi - c.delta)};
}

BogoliubovPair stage_bogoliubov(double xi) {
  if (!(xi >= 0.0)) throw Error(ErrorCode::NegativeConstant, "xi must be non-negative");
  BogoliubovPair b;
  b.g << 2.0 * I1, xi, xi, 2.0 * I1;
  b.r << 0.0, -xi, -xi, 0.0;
  b.direction = Direction::OutFromIn;
  return b;
}

BogoliubovPair composite_bogoliubov(const QrqParams& p) {
  validate(p);
  const double x = p.xi1 * p.xi2;
  const double s1 = std::sin(p.theta1), s2 = std::sin(p.theta2);
  const cplx e1 = std::polar(1.0, p.theta1), e2 = std::polar(1.0, p.theta2);
  BogoliubovPair b;
  b.g << 2.0 * I1 * std::conj(e1) - x * s2, -p.xi1 * std::conj(e2) - p.xi2 * std::conj(e1),
      -p.xi1 * std::conj(e1) - p.xi2 * std::conj(e2), 2.0 * I1 * std::conj(e2) - x * s1;
  b.r << x * s2, p.xi1 * e2 + p.xi2 * std::conj(e1),  //
      p.xi1 * e1 + p.xi2 * std::conj(e2), x * s1;
  b.direction = Direction::InFromOut;
  return b;
}

Eigen::Matrix4cd transfer_matrix(const BogoliubovPair& b) {
  const cplx pf = BogoliubovPair::prefactor;
  Eigen::Matrix4cd t;
  t.topLeftCorner<2, 2>() = pf * b.g;
  t.topRightCorner<2, 2>() = pf * b.r;
  t.bottomLeftCorner<2, 2>() = (pf * b.r).conjugate();
  t.bottomRightCorner<2, 2>() = (pf * b.g).conjugate();
  return t;
}

BogoliubovPair from_transfer_matrix(const Eigen::Matrix4cd& t, Direction d) {
  BogoliubovPair b;
  const cplx inv = 1.0 / BogoliubovPair::prefactor;
  b.g = inv * t.topLeftCorner<2, 2>();
  b.r = inv * t.topRightCorner<2, 2>();
  b.direction = d;
  return b;
}

BogoliubovPair reverse_direction(const BogoliubovPair& b) {
  const Direction d = b.direction == Direction::InFromOut ? Direction::OutFromIn : Direction::InFromOut;
  return from_transfer_matrix(transfer_matrix(b).inverse(), d);
}

BogoliubovPair composite_forward(const QrqParams& p) {
  validate(p);
  const Eigen::Matrix4cd t = transfer_matrix(stage_bogoliubov(p.xi2)) * rotation_transfer(p.theta1, p.theta2) *
                             transfer_matrix(stage_bogoliubov(p.xi1));
  return from_transfer_matrix(t, Direction::OutFromIn);
}

double symplectic_residual(const BogoliubovPair& b) {
  const Eigen::Matrix2cd s = b.g * b.g.adjoint() - b.r * b.r.adjoint() - 4.0 * Eigen::Matrix2cd::Identity();
  return s.cwiseAbs().maxCoeff();
}

OutputDecomposition amplitudes(const QrqParams& p) {
  validate(p);
  const double x = p.xi1 * p.xi2;
  const double delta = p.theta1 - p.theta2;
  const double phi = p.theta1 + p.theta2;
  const cplx a1 = -2.0 * I1 + std::polar(x * std::sin(p.theta1), p.theta2);
  const cplx a2 = -2.0 * I1 + std::polar(x * std::sin(p.theta2), p.theta1);
  const cplx b = p.xi2 + std::polar(p.xi1, delta);
  const double b2 = std::pow(p.xi2 + p.xi1 * std::cos(delta), 2) + std::pow(p.xi1 * std::sin(delta), 2);
  const cplx ephi = std::polar(1.0, phi);

  OutputDecomposition d;
  d.f_i = -0.25 * a1 * a2;
  d.f_s = -0.25 * b2;
  d.f_l = -0.25 * std::conj(b) * a2;
  d.f_a = -0.25 * b * a1;
  d.f_vac = -0.25 * I1 *
            (x * p.xi2 * (std::cos(delta) - ephi) - I1 * x * p.xi1 * ephi * std::sin(phi) -
             2.0 * p.xi1 * ephi - 2.0 * p.xi2);
  const double gate = std::norm(d.f_i) + d.f_s * d.f_s;
  const double nq = std::norm(d.f_l) + std::norm(d.f_a);
  const double vac = std::norm(d.f_vac);
  d.norm_n = gate + nq + vac;
  d.p_gate = gate / d.norm_n;
  d.p_nq = nq / d.norm_n;
  d.p_vac = vac / d.norm_n;
  d.unitarity_residual = std::abs(d.f_i.real() * d.f_s) / std::max(1.0, gate);
  return d;
}

double unitarity_residual(const QrqParams& p) { return amplitudes(p).unitarity_residual; }

GateResult two_qubit_gate(const QrqParams& p, double tol) {
  const OutputDecomposition d = amplitudes(p);
  GateResult g;
  g.residual = d.unitarity_residual;
  const double scale = std::abs(d.f_i + d.f_s);
  if (d.unitarity_residual > tol || scale == 0.0) return g;
  g.unitary = true;
  g.gate.matrix = (d.f_i * identity_matrix() + d.f_s * swap_matrix()) / scale;
  return g;
}

LocalInvariants simplified_invariants(const QrqParams& p, double tol) {
  const OutputDecomposition d = amplitudes(p);
  require_re_fi_zero(d, tol);
  const double h = std::hypot(d.f_i.imag(), d.f_s);
  const double u = d.f_i.imag() / h, s = d.f_s / h;
  const cplx num = -u * u + I1 * u * s + s * s;
  const cplx den = std::pow(cplx(u, -s), 3) * cplx(u, s);
  LocalInvariants inv;
  inv.g1 = num * num / den;
  inv.g2 = -3.0 + 6.0 * u * u / (u * u + s * s);
  inv.entangling_power = entangling_power(inv);
  return inv;
}

double probability(const QrqParams& p, double tol) {
  const OutputDecomposition d = amplitudes(p);
  require_re_fi_zero(d, tol);
  return (d.f_i.imag() * d.f_i.imag() + d.f_s * d.f_s) / d.norm_n;
}

double pe_residual(const QrqParams& p, double tol) {
  const OutputDecomposition d = amplitudes(p);
  require_re_fi_zero(d, tol);
  return std::abs(std::abs(d.f_i.imag()) - std::abs(d.f_s)) / std::hypot(d.f_i.imag(), d.f_s);
}

double re_f_i(double x, double phi, double delta) {
  const double c = std::cos(phi);
  return 1.0 - x / 8.0 * (4.0 + x * c) * (std::cos(delta) - c);
}

double re_f_i_residual(double x, double phi, double delta) {
  const double c = std::cos(phi), cd = std::cos(delta);
  const double scale = 1.0 + x / 8.0 * (4.0 + x * std::abs(c)) * (std::abs(cd) + std::abs(c));
  return std::abs(re_f_i(x, phi, delta)) / scale;
}

PhiSolution phi_en(double x, double delta, Branch branch) {
  PhiSolution s;
  s.branch = branch;
  const double cd = std::cos(delta);
  s.discriminant = x * x * cd * cd + 8.0 * x * cd - 16.0;
  if (!(x > 0.0) || !(s.discriminant >= 0.0)) return s;
  // x c^2 + (4 - x cd) c + (8/x - 4 cd) = 0, roots split via Vieta to avoid cancellation
  const double bq = 4.0 - x * cd, cq = 8.0 / x - 4.0 * cd;
  const double sq = std::sqrt(s.discriminant);
  const double q = -0.5 * (bq + std::copysign(sq, bq));
  double r1 = q / x, r2 = (q != 0.0) ? cq / q : -bq / (2.0 * x);
  if (q == 0.0) r1 = r2;
  const double c_plus = std::max(r1, r2), c_minus = std::min(r1, r2);
  const bool inner_plus = branch == Branch::pp || branch == Branch::mp;
  const bool outer_plus = branch == Branch::pp || branch == Branch::pm;
  double c = inner_plus ? c_plus : c_minus;
  if (std::abs(c) > 1.0) {
    if (std::abs(c) - 1.0 > 1e-12) return s;
    c = std::copysign(1.0, c);
  }
  const double phi = std::acos(c);
  s.phi_en = outer_plus ? phi : -phi;
  s.residual = re_f_i_residual(x, *s.phi_en, delta);
  return s;
}

double x_min(double delta) {
  const double c = std::cos(delta);
  if (std::abs(c) < 1e-15) throw Error(ErrorCode::CosDeltaZero, "the bound diverges at cos(delta) = 0");
  const double r2 = 4.0 * std::numbers::sqrt2;
  return c > 0.0 ? (r2 - 4.0) / c : (r2 + 4.0) / -c;
}

RegimeReport regime_classify(const QrqParams& p, double tol, double asym_tol) {
  RegimeReport rep;
  rep.amps = amplitudes(p);
  const OutputDecomposition& d = rep.amps;
  const double sn = std::sqrt(d.norm_n);
  const double ni = std::abs(d.f_i) / sn, ns = std::abs(d.f_s) / sn;
  const double nl = std::abs(d.f_l) / sn, na = std::abs(d.f_a) / sn;
  const double x = p.xi1 * p.xi2;

  const GateResult g = two_qubit_gate(p);
  if (g.unitary) {
    rep.invariants = makhlin_invariants(g.gate);
    rep.cls = classify_invariants(rep.invariants->g1, rep.invariants->g2, std::max(tol, 1e-12));
  } else {
    rep.cls.label = ClassLabel::NonUnitary;
    rep.cls.tol = tol;
    rep.cls.unitarity_error = g.residual;
  }

  if (ns <= tol) {
    rep.regime = Regime::IdentityClass;
  } else if (ni <= tol && std::abs(x - 2.0) <= tol * 2.0) {
    rep.regime = Regime::SwapDeterministic;
  } else if (ni <= tol && na <= tol) {
    rep.regime = Regime::BunchingLight;
  } else if (ni <= tol && nl <= tol) {
    rep.regime = Regime::BunchingAtoms;
  } else if (re_fi_vanishes(d, tol) &&
             std::abs(std::abs(d.f_i.imag()) - std::abs(d.f_s)) / std::hypot(d.f_i.imag(), d.f_s) <= tol) {
    rep.regime = Regime::SqrtSwapFamily;
  } else if (d.p_gate <= asym_tol && std::min(nl, na) <= asym_tol * std::max(nl, na)) {
    rep.regime = nl > na ? Regime::BunchingLight : Regime::BunchingAtoms;
    rep.asymptotic = true;
  }
  return rep;
}

}  // namespace qrq
