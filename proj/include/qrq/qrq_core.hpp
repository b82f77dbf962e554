#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "qrq/invariants.hpp"

namespace qrq {

struct QrqParams {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double theta1 = 0.0;  // light modes
  double theta2 = 0.0;  // atomic modes
};

struct CompParams {
  double x = 0.0;      // xi1 * xi2
  double nu = 0.0;     // xi2
  double phi = 0.0;    // theta1 + theta2
  double delta = 0.0;  // theta1 - theta2
};

enum class Direction { InFromOut, OutFromIn };

// Creation-operator map  a_k^dag -> (-i/2) sum_j (G_kj a_j^dag + R_kj a_j),  modes ordered (A, B).
struct BogoliubovPair {
  Eigen::Matrix2cd g = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  Direction direction = Direction::OutFromIn;
  static constexpr cplx prefactor{0.0, -0.5};
};

struct OutputDecomposition {
  cplx f_i{};
  double f_s = 0.0;
  cplx f_l{};
  cplx f_a{};
  cplx f_vac{};
  double norm_n = 0.0;
  double p_gate = 0.0;
  double p_nq = 0.0;
  double p_vac = 0.0;
  double unitarity_residual = 0.0;
};

enum class Branch { pp, pm, mp, mm };

struct PhiSolution {
  Branch branch = Branch::mm;
  std::optional<double> phi_en;
  double discriminant = 0.0;
  double residual = 0.0;  // scale-normalized Re f_I at phi_en
};

enum class Regime { None, IdentityClass, SwapDeterministic, BunchingLight, BunchingAtoms, SqrtSwapFamily };

struct RegimeReport {
  Regime regime = Regime::None;
  bool asymptotic = false;  // matched only by the dominant-weight rule
  OutputDecomposition amps;
  ClassResult cls;
  std::optional<LocalInvariants> invariants;
};

struct GateResult {
  bool unitary = false;
  TwoQubitGate gate;
  double residual = 0.0;
};

std::string to_string(Branch b);
Branch branch_from_string(const std::string& s);
std::string to_string(Regime r);
std::string to_string(Direction d);

void validate(const QrqParams& p);
CompParams convert_params(const QrqParams& p);
QrqParams convert_params_inv(const CompParams& c);

BogoliubovPair stage_bogoliubov(double xi);
BogoliubovPair composite_bogoliubov(const QrqParams& p);
// 4x4 action on (A^dag, B^dag, A, B).
Eigen::Matrix4cd transfer_matrix(const BogoliubovPair& b);
BogoliubovPair from_transfer_matrix(const Eigen::Matrix4cd& t, Direction d);
BogoliubovPair reverse_direction(const BogoliubovPair& b);
// Forward composition of the three stages, built from transfer matrices.
BogoliubovPair composite_forward(const QrqParams& p);
double symplectic_residual(const BogoliubovPair& b);

OutputDecomposition amplitudes(const QrqParams& p);
double unitarity_residual(const QrqParams& p);
GateResult two_qubit_gate(const QrqParams& p, double tol = 1e-9);
LocalInvariants simplified_invariants(const QrqParams& p, double tol = 1e-9);
double probability(const QrqParams& p, double tol = 1e-9);
double pe_residual(const QrqParams& p, double tol = 1e-9);

// Re f_I written through (x, phi, delta).
double re_f_i(double x, double phi, double delta);
double re_f_i_residual(double x, double phi, double delta);
PhiSolution phi_en(double x, double delta, Branch branch);
double x_min(double delta);

RegimeReport regime_classify(const QrqParams& p, double tol = 1e-6, double asym_tol = 0.05);

}  // namespace qrq
