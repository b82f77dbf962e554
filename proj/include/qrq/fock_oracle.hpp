#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "qrq/qrq_core.hpp"

namespace qrq {

// Two-qubit product input (c0|0> + c1|1>)_light (t0|0> + t1|1>)_atom.
struct QubitInput {
  cplx c0{1.0, 0.0};
  cplx c1{0.0, 0.0};
  cplx t0{1.0, 0.0};
  cplx t1{0.0, 0.0};
};

struct OracleOptions {
  int n_limit = 256;
  double deficit_tol = 1e-8;
  double xi_cap = 4.0;
  bool adaptive = true;
};

// Pair states are (n_max+1)x(n_max+1) matrices indexed [n_A][n_B].
// Pair 0 holds modes (A0, B0), pair 1 holds (A1, B1).
struct FockStateVector {
  struct Term {
    cplx coef;
    Eigen::MatrixXcd pair0;
    Eigen::MatrixXcd pair1;
  };
  int n_max = 0;
  double norm_deficit = 0.0;
  std::vector<Term> terms;

  cplx amplitude(int a0, int a1, int b0, int b1) const;
  double norm2() const;
  // Full 4-mode array, index ((a0*(n+1)+a1)*(n+1)+b0)*(n+1)+b1.
  Eigen::VectorXcd to_dense() const;
  static std::size_t dense_index(int n_max, int a0, int a1, int b0, int b1);
};

struct SectorDecomposition {
  double w_two_qubit = 0.0;
  double w_nql = 0.0;
  double w_nqa = 0.0;
  double w_vac = 0.0;
  double w_higher = 0.0;
  double norm2 = 0.0;
  std::map<std::array<int, 4>, cplx> amplitudes;  // every tuple with two excitations
  cplx vacuum{};
  cplx f_i{};
  cplx f_s{};
  bool separable = false;  // input and SWAP(input) linearly independent
  double fit_residual = 0.0;
};

struct ComparisonReport {
  QrqParams params;
  int n_max = 0;
  double max_rel_err = 0.0;
  double w_higher = 0.0;
  double norm_deficit = 0.0;
  // diagnostics
  double bunching_rel_err = 0.0;                 // light/atom oracle vs closed (f_a, f_l)
  double bunching_rel_err_printed_labels = 0.0;  // light/atom oracle vs closed (f_l, f_a)
  double vacuum_rel_err = 0.0;                   // same-pair input, (f_i + f_s, f_vac)
  double w_higher_same_pair = 0.0;
  double vacuum_share_same_pair = 0.0;  // w_vac / (w_vac + w_two_qubit) for input |0>|0>
};

// U = exp(-i kappa H), H = (a^dag - a)(b - b^dag); kappa = -xi/2 reproduces the stage map.
double qnd_kappa(double xi);
Eigen::MatrixXcd build_pair_hamiltonian(int n_max);
Eigen::MatrixXcd build_qnd_unitary(double xi, int n_max);
Eigen::MatrixXcd build_rotation(double theta, int n_max);

// Exact exponentials on the truncated pair space through the spectrum of i(a^dag - a).
class PairEvolver {
 public:
  explicit PairEvolver(int n_max);
  int n_max() const { return n_; }
  Eigen::MatrixXcd qnd(double xi, const Eigen::MatrixXcd& psi) const;
  Eigen::MatrixXcd rotate(double theta_a, double theta_b, const Eigen::MatrixXcd& psi) const;
  Eigen::MatrixXcd qrq(const QrqParams& p, const Eigen::MatrixXcd& psi) const;
  Eigen::MatrixXcd qrq_adjoint(const QrqParams& p, const Eigen::MatrixXcd& psi) const;
  Eigen::MatrixXcd basis(int na, int nb) const;
  double boundary_weight(const Eigen::MatrixXcd& psi) const;

 private:
  int n_;
  Eigen::MatrixXcd v_;
  Eigen::VectorXd d_;
};

FockStateVector run_qrq(const QrqParams& p, const QubitInput& in, int n_max, const OracleOptions& opt = {});
SectorDecomposition decompose_sectors(const FockStateVector& state, const QubitInput& in);
ComparisonReport compare_closed_form(const QrqParams& p, int n_max, const OracleOptions& opt = {});

// Heisenberg map U^dag X U on X = (A^dag, B^dag, A, B) read off single-excitation matrix elements.
Eigen::Matrix4cd heisenberg_transfer(const QrqParams& p, int n_max);
// Reference evolution in the unfactorized 4-mode space (sparse Taylor series), dense layout.
Eigen::VectorXcd evolve_four_mode(const QrqParams& p, const QubitInput& in, int n_max);

}  // namespace qrq
