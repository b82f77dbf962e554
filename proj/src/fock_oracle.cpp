#include "qrq/fock_oracle.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qrq/errors.hpp"

namespace qrq {

namespace {

const cplx I1{0.0, 1.0};
constexpr int kLadder[] = {8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1024};

Eigen::MatrixXcd ladder_op(int n) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// Relative distance between two amplitude vectors after normalization and phase alignment.
double aligned_rel_err(const Eigen::VectorXcd& oracle, const Eigen::VectorXcd& closed) {
  const double no = oracle.norm(), nc = closed.norm();
  if (nc == 0.0 || no == 0.0) return (nc == no) ? 0.0 : 1.0;
  const Eigen::VectorXcd o = oracle / no, c = closed / nc;
  Eigen::Index k = 0;
  if (std::abs(c(0)) < 1e-3) c.cwiseAbs().maxCoeff(&k);
  if (std::abs(o(k)) == 0.0) return 1.0;
  const cplx u = (c(k) / std::abs(c(k))) / (o(k) / std::abs(o(k)));
  return (u * o - c).norm();
}

std::array<cplx, 4> input_vector(const QubitInput& in) {
  return {in.c0 * in.t0, in.c0 * in.t1, in.c1 * in.t0, in.c1 * in.t1};
}

}  // namespace

double qnd_kappa(double xi) { return -0.5 * xi; }

Eigen::MatrixXcd build_pair_hamiltonian(int n_max) {
  const Eigen::MatrixXcd a = ladder_op(n_max);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
  const Eigen::MatrixXcd pa = a.adjoint() - a;
  const Eigen::MatrixXcd pb = a - a.adjoint();
  return Eigen::kroneckerProduct(pa, id).eval() * Eigen::kroneckerProduct(id, pb).eval();
}

Eigen::MatrixXcd build_qnd_unitary(double xi, int n_max) {
  if (!(xi >= 0.0)) throw Error(ErrorCode::NegativeConstant, "xi must be non-negative");
  if (n_max < 4) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 4");
  const Eigen::MatrixXcd h = build_pair_hamiltonian(n_max);
  const Eigen::MatrixXcd gen = cplx(0.0, -qnd_kappa(xi)) * h;
  Eigen::MatrixXcd u = gen.exp();
  const int d = n_max + 1;
  double edge = 0.0;
  for (int na = 0; na <= n_max; ++na)
    for (int nb = 0; nb <= n_max; ++nb)
      if (na >= n_max - 1 || nb >= n_max - 1) edge += std::norm(u(na * d + nb, 0));
  if (edge > 1e-8)
    throw Error(ErrorCode::CutoffTooSmall, "vacuum leaks " + std::to_string(edge) + " into the top levels");
  return u;
}

Eigen::MatrixXcd build_rotation(double theta, int n_max) {
  Eigen::VectorXcd d(n_max + 1);
  for (int k = 0; k <= n_max; ++k) d(k) = std::polar(1.0, theta * k);
  return d.asDiagonal();
}

PairEvolver::PairEvolver(int n_max) : n_(n_max) {
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 2");
  const Eigen::MatrixXcd a = ladder_op(n_max);
  const Eigen::MatrixXcd x = I1 * (a.adjoint() - a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x);
  v_ = es.eigenvectors();
  d_ = es.eigenvalues();
}

Eigen::MatrixXcd PairEvolver::qnd(double xi, const Eigen::MatrixXcd& psi) const {
  // H = X_a X_b with X = i(a^dag - a); U = exp(-i kappa H)
  const double k = qnd_kappa(xi);
  Eigen::MatrixXcd t = v_.adjoint() * psi * v_.conjugate();
  for (int j = 0; j <= n_; ++j)
    for (int l = 0; l <= n_; ++l) t(j, l) *= std::polar(1.0, -k * d_(j) * d_(l));
  return v_ * t * v_.transpose();
}

Eigen::MatrixXcd PairEvolver::rotate(double theta_a, double theta_b, const Eigen::MatrixXcd& psi) const {
  Eigen::MatrixXcd out = psi;
  for (int na = 0; na <= n_; ++na)
    for (int nb = 0; nb <= n_; ++nb) out(na, nb) *= std::polar(1.0, theta_a * na + theta_b * nb);
  return out;
}

Eigen::MatrixXcd PairEvolver::qrq(const QrqParams& p, const Eigen::MatrixXcd& psi) const {
  return qnd(p.xi2, rotate(p.theta1, p.theta2, qnd(p.xi1, psi)));
}

Eigen::MatrixXcd PairEvolver::qrq_adjoint(const QrqParams& p, const Eigen::MatrixXcd& psi) const {
  // qnd(-xi) inverts a stage
  return qnd(-p.xi1, rotate(-p.theta1, -p.theta2, qnd(-p.xi2, psi)));
}

Eigen::MatrixXcd PairEvolver::basis(int na, int nb) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_ + 1, n_ + 1);
  m(na, nb) = 1.0;
  return m;
}

double PairEvolver::boundary_weight(const Eigen::MatrixXcd& psi) const {
  double w = 0.0;
  for (int na = 0; na <= n_; ++na)
    for (int nb = 0; nb <= n_; ++nb)
      if (na >= n_ - 1 || nb >= n_ - 1) w += std::norm(psi(na, nb));
  return w;
}

cplx FockStateVector::amplitude(int a0, int a1, int b0, int b1) const {
  if (std::max({a0, a1, b0, b1}) > n_max || std::min({a0, a1, b0, b1}) < 0) return 0.0;
  cplx s = 0.0;
  for (const auto& t : terms) s += t.coef * t.pair0(a0, b0) * t.pair1(a1, b1);
  return s;
}

double FockStateVector::norm2() const {
  cplx s = 0.0;
  for (const auto& t : terms)
    for (const auto& u : terms)
      s += std::conj(t.coef) * u.coef * t.pair0.conjugate().cwiseProduct(u.pair0).sum() *
           t.pair1.conjugate().cwiseProduct(u.pair1).sum();
  return s.real();
}

std::size_t FockStateVector::dense_index(int n, int a0, int a1, int b0, int b1) {
  const std::size_t d = static_cast<std::size_t>(n) + 1;
  return ((static_cast<std::size_t>(a0) * d + a1) * d + b0) * d + b1;
}

Eigen::VectorXcd FockStateVector::to_dense() const {
  const int d = n_max + 1;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d * d * d);
  for (int a0 = 0; a0 < d; ++a0)
    for (int a1 = 0; a1 < d; ++a1)
      for (int b0 = 0; b0 < d; ++b0)
        for (int b1 = 0; b1 < d; ++b1)
          out(static_cast<Eigen::Index>(dense_index(n_max, a0, a1, b0, b1))) = amplitude(a0, a1, b0, b1);
  return out;
}

FockStateVector run_qrq(const QrqParams& p, const QubitInput& in, int n_max, const OracleOptions& opt) {
  validate(p);
  if (p.xi1 > opt.xi_cap || p.xi2 > opt.xi_cap)
    throw Error(ErrorCode::InvalidArgument, "oracle regime is xi <= " + std::to_string(opt.xi_cap));
  const double n1 = std::norm(in.c0) + std::norm(in.c1), n2 = std::norm(in.t0) + std::norm(in.t1);
  if (std::abs(n1 - 1.0) > 1e-9 || std::abs(n2 - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "qubit inputs must be normalized");
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 2");

  std::vector<int> ladder{n_max};
  if (opt.adaptive)
    for (int n : kLadder)
      if (n > n_max && n <= opt.n_limit) ladder.push_back(n);

  const std::array<cplx, 4> coefs = input_vector(in);
  double last_deficit = 0.0;
  for (int n : ladder) {
    PairEvolver ev(n);
    FockStateVector st;
    st.n_max = n;
    for (int m = 0; m < 2; ++m)
      for (int k = 0; k < 2; ++k) {
        const cplx c = coefs[2 * m + k];
        if (c == 0.0) continue;
        // A_m^dag B_k^dag |vac>
        const Eigen::MatrixXcd in0 = ev.basis(m == 0 ? 1 : 0, k == 0 ? 1 : 0);
        const Eigen::MatrixXcd in1 = ev.basis(m == 1 ? 1 : 0, k == 1 ? 1 : 0);
        FockStateVector::Term t{c, ev.qrq(p, in0), ev.qrq(p, in1)};
        st.norm_deficit = std::max({st.norm_deficit, ev.boundary_weight(t.pair0), ev.boundary_weight(t.pair1)});
        st.terms.push_back(std::move(t));
      }
    last_deficit = st.norm_deficit;
    if (st.norm_deficit <= opt.deficit_tol || !opt.adaptive) return st;
  }
  throw Error(ErrorCode::CutoffTooSmall,
              "truncation deficit " + std::to_string(last_deficit) + " above tolerance at the largest cutoff");
}

SectorDecomposition decompose_sectors(const FockStateVector& st, const QubitInput& in) {
  SectorDecomposition sd;
  sd.norm2 = st.norm2();
  for (int a0 = 0; a0 <= 2; ++a0)
    for (int a1 = 0; a1 <= 2 - a0; ++a1)
      for (int b0 = 0; b0 <= 2 - a0 - a1; ++b0) {
        const int b1 = 2 - a0 - a1 - b0;
        const cplx amp = st.amplitude(a0, a1, b0, b1);
        sd.amplitudes[{a0, a1, b0, b1}] = amp;
        const int light = a0 + a1, atom = b0 + b1;
        if (light == 1 && atom == 1)
          sd.w_two_qubit += std::norm(amp);
        else if (light == 2)
          sd.w_nql += std::norm(amp);
        else
          sd.w_nqa += std::norm(amp);
      }
  sd.vacuum = st.amplitude(0, 0, 0, 0);
  sd.w_vac = std::norm(sd.vacuum);
  sd.w_higher = std::max(0.0, sd.norm2 - sd.w_two_qubit - sd.w_nql - sd.w_nqa - sd.w_vac);

  // two-qubit block: out(ij) = f_i in(ij) + f_s in(ji)
  const std::array<cplx, 4> v = input_vector(in);
  Eigen::Matrix<cplx, 4, 2> m;
  Eigen::Vector4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int r = 2 * i + j;
      m(r, 0) = v[r];
      m(r, 1) = v[2 * j + i];
      out(r) = sd.amplitudes[{i == 0, i == 1, j == 0, j == 1}];
    }
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 4, 2>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  sd.separable = svd.singularValues()(1) > 1e-10 * svd.singularValues()(0);
  if (sd.separable) {
    const Eigen::Vector2cd f = svd.solve(out);
    sd.f_i = f(0);
    sd.f_s = f(1);
  } else {
    // only f_i + f_s is observable
    const Eigen::Vector2cd f = m.completeOrthogonalDecomposition().solve(out);
    sd.f_i = f(0) + f(1);
    sd.f_s = 0.0;
  }
  sd.fit_residual = sd.separable ? (m * Eigen::Vector2cd(sd.f_i, sd.f_s) - out).norm()
                                  : (m.col(0) * sd.f_i - out).norm();
  return sd;
}

ComparisonReport compare_closed_form(const QrqParams& p, int n_max, const OracleOptions& opt) {
  ComparisonReport rep;
  rep.params = p;
  const QubitInput cross{1.0, 0.0, 0.0, 1.0};
  const QubitInput same{1.0, 0.0, 1.0, 0.0};
  const FockStateVector sc = run_qrq(p, cross, n_max, opt);
  const FockStateVector ss = run_qrq(p, same, n_max, opt);
  const SectorDecomposition dc = decompose_sectors(sc, cross);
  const SectorDecomposition ds = decompose_sectors(ss, same);
  const OutputDecomposition cf = amplitudes(p);

  rep.n_max = std::max(sc.n_max, ss.n_max);
  rep.norm_deficit = std::max(sc.norm_deficit, ss.norm_deficit);
  rep.w_higher = dc.w_higher;
  rep.w_higher_same_pair = ds.w_higher;

  rep.max_rel_err = aligned_rel_err(Eigen::Vector2cd(dc.f_i, dc.f_s), Eigen::Vector2cd(cf.f_i, cf.f_s));

  const cplx light = sc.amplitude(1, 1, 0, 0), atom = sc.amplitude(0, 0, 1, 1);
  Eigen::Vector4cd o4(dc.f_i, dc.f_s, light, atom);
  rep.bunching_rel_err = aligned_rel_err(o4, Eigen::Vector4cd(cf.f_i, cf.f_s, cf.f_a, cf.f_l));
  rep.bunching_rel_err_printed_labels = aligned_rel_err(o4, Eigen::Vector4cd(cf.f_i, cf.f_s, cf.f_l, cf.f_a));

  const cplx pair00 = ds.amplitudes.at({1, 0, 1, 0});
  rep.vacuum_rel_err =
      aligned_rel_err(Eigen::Vector2cd(pair00, ds.vacuum), Eigen::Vector2cd(cf.f_i + cf.f_s, cf.f_vac));
  rep.vacuum_share_same_pair = ds.w_vac / (ds.w_vac + ds.w_two_qubit);
  return rep;
}

Eigen::Matrix4cd heisenberg_transfer(const QrqParams& p, int n_max) {
  PairEvolver ev(n_max);
  const Eigen::MatrixXcd a = ladder_op(n_max);
  // operators on the pair matrix psi[nA][nB]: A acts on rows, B on columns
  auto apply = [&](int op, const Eigen::MatrixXcd& psi) -> Eigen::MatrixXcd {
    switch (op) {
      case 0: return a.adjoint() * psi;
      case 1: return psi * a;  // a is real, so B^dag acts as psi (a^dag)^T
      case 2: return a * psi;
      default: return psi * a.transpose();
    }
  };
  Eigen::Matrix4cd t;
  const Eigen::MatrixXcd vac = ev.basis(0, 0), one_a = ev.basis(1, 0), one_b = ev.basis(0, 1);
  for (int r = 0; r < 4; ++r) {
    auto heis = [&](const Eigen::MatrixXcd& s) { return ev.qrq_adjoint(p, apply(r, ev.qrq(p, s))); };
    const Eigen::MatrixXcd w0 = heis(vac);
    const Eigen::MatrixXcd wa = heis(one_a);
    const Eigen::MatrixXcd wb = heis(one_b);
    t(r, 0) = w0(1, 0);
    t(r, 1) = w0(0, 1);
    t(r, 2) = wa(0, 0);
    t(r, 3) = wb(0, 0);
  }
  return t;
}

Eigen::VectorXcd evolve_four_mode(const QrqParams& p, const QubitInput& in, int n_max) {
  using Sp = Eigen::SparseMatrix<cplx>;
  const int d = n_max + 1;
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d * d * d;
  auto idx = [&](int a0, int a1, int b0, int b1) {
    return static_cast<Eigen::Index>(FockStateVector::dense_index(n_max, a0, a1, b0, b1));
  };
  // H = (A0^dag - A0)(B0 - B0^dag) + (A1^dag - A1)(B1 - B1^dag)
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int a0 = 0; a0 < d; ++a0)
    for (int a1 = 0; a1 < d; ++a1)
      for (int b0 = 0; b0 < d; ++b0)
        for (int b1 = 0; b1 < d; ++b1) {
          const Eigen::Index col = idx(a0, a1, b0, b1);
          for (int pair = 0; pair < 2; ++pair) {
            const int na = pair == 0 ? a0 : a1, nb = pair == 0 ? b0 : b1;
            for (int da : {1, -1})
              for (int db : {1, -1}) {
                const int ma = na + da, mb = nb + db;
                if (ma < 0 || ma >= d || mb < 0 || mb >= d) continue;
                // (a^dag - a): +sqrt(n+1) up, -sqrt(n) down; (b - b^dag): +sqrt(n) down, -sqrt(n+1) up
                const double ca = da > 0 ? std::sqrt(na + 1.0) : -std::sqrt(static_cast<double>(na));
                const double cb = db < 0 ? std::sqrt(static_cast<double>(nb)) : -std::sqrt(nb + 1.0);
                const Eigen::Index row = pair == 0 ? idx(ma, a1, mb, b1) : idx(a0, ma, b0, mb);
                trip.emplace_back(row, col, ca * cb);
              }
          }
        }
  Sp h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  double hnorm = 0.0;
  for (int k = 0; k < h.outerSize(); ++k) {
    double s = 0.0;
    for (Sp::InnerIterator it(h, k); it; ++it) s += std::abs(it.value());
    hnorm = std::max(hnorm, s);
  }
  auto expv = [&](double kappa, Eigen::VectorXcd v) {
    // exp(-i kappa H) v by substepped Taylor series
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(kappa) * hnorm / 0.5)));
    const cplx tau(0.0, -kappa / steps);
    for (int s = 0; s < steps; ++s) {
      Eigen::VectorXcd term = v, acc = v;
      for (int k = 1; k < 60; ++k) {
        term = (tau / static_cast<double>(k)) * (h * term);
        acc += term;
        if (term.norm() < 1e-18 * acc.norm()) break;
      }
      v = acc;
    }
    return v;
  };
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const std::array<cplx, 4> c = input_vector(in);
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < 2; ++k) psi(idx(m == 0, m == 1, k == 0, k == 1)) += c[2 * m + k];
  psi = expv(qnd_kappa(p.xi1), psi);
  for (int a0 = 0; a0 < d; ++a0)
    for (int a1 = 0; a1 < d; ++a1)
      for (int b0 = 0; b0 < d; ++b0)
        for (int b1 = 0; b1 < d; ++b1)
          psi(idx(a0, a1, b0, b1)) *= std::polar(1.0, p.theta1 * (a0 + a1) + p.theta2 * (b0 + b1));
  return expv(qnd_kappa(p.xi2), psi);
}

}  // namespace qrq
