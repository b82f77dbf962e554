#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace qrq {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

// Computational basis ordering |i>_1|j>_2 -> index 2i+j.
struct TwoQubitGate {
  Mat4 matrix = Mat4::Identity();
  bool su4_normalized = false;
};

struct LocalInvariants {
  cplx g1{1.0, 0.0};
  double g2 = 3.0;
  double entangling_power = 0.0;
};

struct WeylPoint {
  std::array<double, 3> alpha{};           // exp(i sum alpha_j s_j s_j) convention
  std::array<double, 3> chamber_coords{};  // 2*alpha
  std::array<double, 4> lambdas{};         // Bell-basis eigenphases, sum = 0
  bool degenerate = false;
};

enum class ClassLabel {
  Identity,
  Swap,
  SqrtSwap,
  SqrtSwapDagger,
  Cnot,
  PerfectEntanglerOther,
  OtherNonlocal,
  NonUnitary,
};

struct ClassResult {
  ClassLabel label = ClassLabel::OtherNonlocal;
  cplx g1{};
  double g2 = 0.0;
  double tol = 0.0;
  double unitarity_error = 0.0;  // only meaningful for NonUnitary
};

struct BellDiagonal {
  bool is_diagonal = false;
  double off_diagonal_mass = 0.0;
  std::array<cplx, 4> entries{};       // diag of Q^dag U Q when is_diagonal
  std::array<cplx, 4> m_eigenvalues{};  // spectrum of m = M^T M (general path)
};

struct ConcurrenceOptions {
  int grid = 32;
  int refine_rounds = 3;
  int refine_points = 17;
};

std::string to_string(ClassLabel label);
ClassLabel class_label_from_string(const std::string& s);

const Mat4& bell_q();
std::array<Vec4, 4> bell_states();

Mat4 identity_matrix();
Mat4 swap_matrix();
Mat4 cnot_matrix();
// (1-i)/2 I + (1+i)/2 SWAP, the square root of SWAP at the alpha = pi/8 chamber point (g1 = +i/4).
// The textbook (1+i)/2 I + (1-i)/2 SWAP is its adjoint.
Mat4 sqrt_swap_matrix();
// exp(i (ax XX + ay YY + az ZZ)).
Mat4 canonical_gate(double ax, double ay, double az);

double unitarity_error(const Mat4& u);

TwoQubitGate project_su4(const TwoQubitGate& gate);
BellDiagonal to_bell_diagonal(const TwoQubitGate& gate);
LocalInvariants makhlin_invariants(const TwoQubitGate& gate);
// Same formulas without the unitarity gate; the block is only rescaled by det^{1/4}.
LocalInvariants block_invariants(const Mat4& block);
WeylPoint weyl_coordinates(const TwoQubitGate& gate);
std::array<double, 3> canonicalize_alpha(std::array<double, 3> a);

ClassResult classify(const TwoQubitGate& gate, double tol = 1e-6);
ClassResult classify_invariants(cplx g1, double g2, double tol = 1e-6);
// Spectrum of m[U] reconstructed from (g1, g2); zero inside its convex hull marks a perfect entangler.
bool invariants_perfect_entangler(cplx g1, double g2, double tol = 1e-9);

bool is_perfect_entangler(const TwoQubitGate& gate, const ConcurrenceOptions& opt = {});
double max_product_concurrence(const TwoQubitGate& gate, const ConcurrenceOptions& opt = {});
double entangling_power(const LocalInvariants& inv);
TwoQubitGate random_local_gate(std::uint64_t seed);
Mat4 random_unitary(std::uint64_t seed);

}  // namespace qrq
