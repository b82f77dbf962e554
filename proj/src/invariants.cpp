#include "qrq/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qrq/errors.hpp"

namespace qrq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
const cplx I1{0.0, 1.0};

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd p;
  switch (k) {
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -I1, I1, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: p.setIdentity();
  }
  return p;
}

Mat4 kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Mat4 k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

Eigen::Matrix2cd random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double s = 0.0;
  for (double& v : q) {
    v = n(rng);
    s += v * v;
  }
  s = std::sqrt(s);
  for (double& v : q) v /= s;
  Eigen::Matrix2cd u;
  u << cplx(q[0], q[1]), cplx(q[2], q[3]), cplx(-q[2], q[3]), cplx(q[0], -q[1]);
  return u;
}

// Largest Takagi value of a complex symmetric 2x2 matrix, i.e. max |b^T K b| over unit b.
double takagi_max(const Eigen::Matrix2cd& k) {
  const double f2 = k.squaredNorm();
  const double d = std::abs(k.determinant());
  const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
  return std::sqrt(std::max(0.0, 0.5 * (f2 + std::sqrt(disc))));
}

double concurrence_at(const Mat4& u, const Mat4& y, double t, double p) {
  const Eigen::Vector2cd a(std::cos(t / 2.0), std::polar(std::sin(t / 2.0), p));
  Eigen::Matrix<cplx, 4, 2> w;
  for (int j = 0; j < 2; ++j) {
    Vec4 in = Vec4::Zero();
    in(j) = a(0);
    in(2 + j) = a(1);
    w.col(j) = u * in;
  }
  const Eigen::Matrix2cd k = w.transpose() * y * w;
  return takagi_max(k);
}

std::array<double, 3> alpha_from_lambdas(const std::array<double, 4>& l) {
  // lambda1 = ax-ay+az, lambda2 = -ax+ay+az, lambda3 = -ax-ay-az, lambda4 = ax+ay-az
  return {(l[0] + l[3]) / 2.0, (l[1] + l[3]) / 2.0, (l[0] + l[1]) / 2.0};
}

std::array<double, 4> lambdas_from_alpha(const std::array<double, 3>& a) {
  return {a[0] - a[1] + a[2], -a[0] + a[1] + a[2], -a[0] - a[1] - a[2], a[0] + a[1] - a[2]};
}

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

std::string to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::Identity: return "Identity";
    case ClassLabel::Swap: return "Swap";
    case ClassLabel::SqrtSwap: return "SqrtSwap";
    case ClassLabel::SqrtSwapDagger: return "SqrtSwapDagger";
    case ClassLabel::Cnot: return "Cnot";
    case ClassLabel::PerfectEntanglerOther: return "PerfectEntanglerOther";
    case ClassLabel::OtherNonlocal: return "OtherNonlocal";
    case ClassLabel::NonUnitary: return "NonUnitary";
  }
  return "OtherNonlocal";
}

ClassLabel class_label_from_string(const std::string& s) {
  for (ClassLabel l : {ClassLabel::Identity, ClassLabel::Swap, ClassLabel::SqrtSwap,
                       ClassLabel::SqrtSwapDagger, ClassLabel::Cnot, ClassLabel::PerfectEntanglerOther,
                       ClassLabel::OtherNonlocal, ClassLabel::NonUnitary})
    if (to_string(l) == s) return l;
  throw Error(ErrorCode::InvalidArgument, "unknown class label '" + s + "'");
}

const Mat4& bell_q() {
  static const Mat4 q = [] {
    Mat4 m;
    m << 1, 0, 0, I1,  //
        0, I1, 1, 0,   //
        0, I1, -1, 0,  //
        1, 0, 0, -I1;
    return Mat4(m / std::sqrt(2.0));
  }();
  return q;
}

std::array<Vec4, 4> bell_states() {
  std::array<Vec4, 4> s;
  for (int j = 0; j < 4; ++j) s[j] = bell_q().col(j);
  return s;
}

Mat4 identity_matrix() { return Mat4::Identity(); }

Mat4 swap_matrix() {
  Mat4 s = Mat4::Zero();
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
  return s;
}

Mat4 cnot_matrix() {
  Mat4 c = Mat4::Zero();
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
  return c;
}

Mat4 sqrt_swap_matrix() {
  return cplx(0.5, -0.5) * Mat4::Identity() + cplx(0.5, 0.5) * swap_matrix();
}

Mat4 canonical_gate(double ax, double ay, double az) {
  Mat4 h = ax * kron2(pauli(1), pauli(1)) + ay * kron2(pauli(2), pauli(2)) +
           az * kron2(pauli(3), pauli(3));
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  const Eigen::Vector4cd ph = (I1 * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double unitarity_error(const Mat4& u) {
  return (u * u.adjoint() - Mat4::Identity()).cwiseAbs().maxCoeff();
}

TwoQubitGate project_su4(const TwoQubitGate& gate) {
  const double err = unitarity_error(gate.matrix);
  if (!(err <= 1e-6)) throw Error(ErrorCode::NonUnitaryInput, "||UU^dag - I||_max = " + std::to_string(err));
  // principal fourth root: arg in (-pi/4, pi/4]
  const cplx root = std::pow(gate.matrix.determinant(), 0.25);
  return {gate.matrix / root, true};
}

BellDiagonal to_bell_diagonal(const TwoQubitGate& gate) {
  const TwoQubitGate g = gate.su4_normalized ? gate : project_su4(gate);
  const Mat4 m = bell_q().adjoint() * g.matrix * bell_q();
  BellDiagonal out;
  double off = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) off += std::norm(m(i, j));
  out.off_diagonal_mass = std::sqrt(off);
  out.is_diagonal = out.off_diagonal_mass <= 1e-9;
  for (int j = 0; j < 4; ++j) out.entries[j] = m(j, j);
  Eigen::ComplexEigenSolver<Mat4> es(Mat4(m.transpose() * m), false);
  for (int j = 0; j < 4; ++j) out.m_eigenvalues[j] = es.eigenvalues()(j);
  return out;
}

LocalInvariants block_invariants(const Mat4& block) {
  const cplx root = std::pow(block.determinant(), 0.25);
  const Mat4 u = block / root;
  const Mat4 mm = bell_q().adjoint() * u * bell_q();
  const Mat4 m = mm.transpose() * mm;
  const cplx tr = m.trace();
  const cplx tr2 = (m * m).trace();
  const cplx det = m.determinant();
  LocalInvariants inv;
  inv.g1 = tr * tr / (16.0 * det);
  inv.g2 = ((tr * tr - tr2) / (4.0 * det)).real();
  inv.entangling_power = entangling_power(inv);
  return inv;
}

LocalInvariants makhlin_invariants(const TwoQubitGate& gate) {
  const TwoQubitGate g = gate.su4_normalized ? gate : project_su4(gate);
  return block_invariants(g.matrix);
}

std::array<double, 3> canonicalize_alpha(std::array<double, 3> a) {
  constexpr double eps = 1e-12;
  for (double& v : a) {
    v = std::fmod(v, kHalfPi);
    if (v < 0) v += kHalfPi;
    if (v > kHalfPi - eps) v -= kHalfPi;
    if (std::abs(v) < eps) v = 0.0;
  }
  auto sort_desc = [&] { std::sort(a.begin(), a.end(), std::greater<double>()); };
  for (int it = 0; it < 8; ++it) {
    sort_desc();
    if (a[0] + a[1] > kHalfPi + eps) {
      const double a0 = a[0];
      a[0] = kHalfPi - a[1];
      a[1] = kHalfPi - a0;
      continue;
    }
    break;
  }
  if (a[2] <= eps && a[0] > kPi / 4.0 + eps) {
    a[0] = kHalfPi - a[0];
    sort_desc();
  }
  return a;
}

WeylPoint weyl_coordinates(const TwoQubitGate& gate) {
  const TwoQubitGate g = gate.su4_normalized ? gate : project_su4(gate);
  const BellDiagonal bd = to_bell_diagonal(g);
  std::array<double, 4> lam{};
  std::array<cplx, 4> spectrum{};
  if (bd.is_diagonal) {
    for (int j = 0; j < 4; ++j) {
      lam[j] = std::arg(bd.entries[j]);
      spectrum[j] = bd.entries[j];
    }
  } else {
    for (int j = 0; j < 4; ++j) {
      lam[j] = std::arg(bd.m_eigenvalues[j]) / 2.0;
      spectrum[j] = bd.m_eigenvalues[j];
    }
  }
  double s = lam[0] + lam[1] + lam[2] + lam[3];
  const long k = std::lround(s / kPi);
  if (k % 2 != 0) lam[0] -= kPi;
  s = lam[0] + lam[1] + lam[2] + lam[3];
  const long k2 = std::lround(s / (2.0 * kPi));
  lam[0] -= 2.0 * kPi * static_cast<double>(k2);

  WeylPoint wp;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(spectrum[i] - spectrum[j]) < 1e-7) wp.degenerate = true;

  std::array<int, 4> perm{0, 1, 2, 3};
  bool first = true;
  std::array<double, 3> best{};
  do {
    std::array<double, 4> l{lam[perm[0]], lam[perm[1]], lam[perm[2]], lam[perm[3]]};
    const auto c = canonicalize_alpha(alpha_from_lambdas(l));
    if (first || std::lexicographical_compare(c.begin(), c.end(), best.begin(), best.end())) {
      best = c;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  wp.alpha = best;
  for (int j = 0; j < 3; ++j) wp.chamber_coords[j] = 2.0 * best[j];
  wp.lambdas = lambdas_from_alpha(best);
  return wp;
}

bool invariants_perfect_entangler(cplx g1, double g2, double tol) {
  // m[U] has det 1; its characteristic polynomial is z^4 - t z^3 + 2 g2 z^2 - conj(t) z + 1
  // with t = tr m = 4 sqrt(g1). The sign of the root only rotates the spectrum by pi.
  const cplx t = 4.0 * std::sqrt(g1);
  Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
  comp(0, 0) = t;
  comp(0, 1) = -2.0 * g2;
  comp(0, 2) = std::conj(t);
  comp(0, 3) = -1.0;
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
  Eigen::ComplexEigenSolver<Mat4> es(comp, false);
  std::array<double, 4> ang{};
  for (int j = 0; j < 4; ++j) ang[j] = std::arg(es.eigenvalues()(j));
  std::sort(ang.begin(), ang.end());
  double gap = ang[0] + 2.0 * kPi - ang[3];
  for (int j = 1; j < 4; ++j) gap = std::max(gap, ang[j] - ang[j - 1]);
  return gap <= kPi + tol;
}

ClassResult classify_invariants(cplx g1, double g2, double tol) {
  struct Target {
    ClassLabel label;
    cplx g1;
    double g2;
  };
  static const Target targets[] = {
      {ClassLabel::Identity, {1.0, 0.0}, 3.0},     {ClassLabel::Swap, {-1.0, 0.0}, -3.0},
      {ClassLabel::Cnot, {0.0, 0.0}, 1.0},         {ClassLabel::SqrtSwap, {0.0, 0.25}, 0.0},
      {ClassLabel::SqrtSwapDagger, {0.0, -0.25}, 0.0},
  };
  ClassResult r;
  r.g1 = g1;
  r.g2 = g2;
  r.tol = tol;
  for (const auto& t : targets) {
    if (near(g1, t.g1, tol) && std::abs(g2 - t.g2) <= tol) {
      r.label = t.label;
      return r;
    }
  }
  r.label = invariants_perfect_entangler(g1, g2, 1e-9) ? ClassLabel::PerfectEntanglerOther
                                                       : ClassLabel::OtherNonlocal;
  return r;
}

ClassResult classify(const TwoQubitGate& gate, double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw Error(ErrorCode::InvalidArgument, "tol must lie in (0, 1e-2]");
  const double err = unitarity_error(gate.matrix);
  if (!(err <= 1e-6)) {
    ClassResult r;
    r.label = ClassLabel::NonUnitary;
    r.tol = tol;
    r.unitarity_error = err;
    return r;
  }
  const LocalInvariants inv = makhlin_invariants(gate);
  ClassResult r = classify_invariants(inv.g1, inv.g2, tol);
  r.unitarity_error = err;
  return r;
}

double max_product_concurrence(const TwoQubitGate& gate, const ConcurrenceOptions& opt) {
  const Mat4& u = gate.matrix;
  Mat4 y = Mat4::Zero();
  y(0, 3) = y(3, 0) = -1.0;
  y(1, 2) = y(2, 1) = 1.0;
  const int n = std::max(opt.grid, 4);
  const double dt = kPi / (n - 1);
  const double dp = 2.0 * kPi / n;
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c = concurrence_at(u, y, i * dt, j * dp);
      if (c > best) {
        best = c;
        bt = i * dt;
        bp = j * dp;
      }
    }
  double ht = dt, hp = dp;
  const int m = std::max(opt.refine_points, 3);
  for (int round = 0; round < opt.refine_rounds; ++round) {
    const double t0 = bt, p0 = bp;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double t = t0 - ht + 2.0 * ht * i / (m - 1);
        const double p = p0 - hp + 2.0 * hp * j / (m - 1);
        const double c = concurrence_at(u, y, t, p);
        if (c > best) {
          best = c;
          bt = t;
          bp = p;
        }
      }
    ht *= 2.0 / (m - 1);
    hp *= 2.0 / (m - 1);
  }
  return std::clamp(best, 0.0, 1.0);
}

bool is_perfect_entangler(const TwoQubitGate& gate, const ConcurrenceOptions& opt) {
  return max_product_concurrence(gate, opt) >= 1.0 - 1e-6;
}

double entangling_power(const LocalInvariants& inv) {
  return std::clamp(2.0 / 9.0 * (1.0 - std::abs(inv.g1)), 0.0, 2.0 / 9.0);
}

TwoQubitGate random_local_gate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Matrix2cd k1 = random_su2(rng);
  const Eigen::Matrix2cd k2 = random_su2(rng);
  return {kron2(k1, k2), true};
}

Mat4 random_unitary(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4 z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<Mat4> qr(z);
  Mat4 q = qr.householderQ();
  const Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

}  // namespace qrq
