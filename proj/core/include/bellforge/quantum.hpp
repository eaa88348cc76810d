#pragma once

#include <Eigen/Dense>
#include <complex>
#include <variant>

#include "bellforge/bell.hpp"

namespace bellforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double operator_check = 1e-10;
}

// Pure state on C^{dim_a} (x) C^{dim_b}, index i*dim_b + j for |i>_A |j>_B.
struct Ket {
  Vector amplitudes;
  int dim_a = 0;
  int dim_b = 0;
};

struct DensityOperator {
  Matrix rho;
  int dim_a = 0;
  int dim_b = 0;
};

using State = std::variant<Ket, DensityOperator>;

int state_dim_a(const State& s);
int state_dim_b(const State& s);
// |psi><psi| for kets, rho as-is otherwise.
Matrix density_of(const State& s);
// Unit norm / unit trace + positivity within tol::operator_check.
void validate_state(const State& s);

// POVM for one setting: n effects, PSD, summing to the identity.
struct Measurement {
  std::vector<Matrix> effects;

  int dim() const { return effects.empty() ? 0 : static_cast<int>(effects.front().rows()); }
  int outcomes() const { return static_cast<int>(effects.size()); }
  bool is_projective(double tolerance = tol::operator_check) const;
  void validate(double tolerance = tol::operator_check) const;

  // Dichotomic observable A with A^2 = I: effects {(I+A)/2, (I-A)/2}.
  static Measurement from_observable(const Matrix& obs);
};

// Dichotomic qubit observable as a Bloch direction, or +-identity when
// degenerate (kept so the outcome count stays uniform).
struct QubitObservable {
  Eigen::Vector3d bloch = Eigen::Vector3d::Zero();
  int degenerate_sign = 0;  // 0: proper observable, +-1: observable = +-I

  Matrix to_matrix() const;
  Measurement to_measurement() const;
  static QubitObservable from_angles_deg(double theta_deg, double phi_deg);
};

struct QuantumStrategy {
  State state;
  std::vector<Measurement> alice;
  std::vector<Measurement> bob;

  Scenario scenario() const;
  void validate() const;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
// Swap operator S |i>_A |j>_B = |j>_A |i>_B on C^d (x) C^d.
Matrix swap_operator(int d);
// Trace out party B (keep A) or A (keep B).
Matrix partial_trace_b(const Matrix& rho, int dim_a, int dim_b);
Matrix partial_trace_a(const Matrix& rho, int dim_a, int dim_b);
Matrix partial_transpose_b(const Matrix& rho, int dim_a, int dim_b);

// P(a,b|x,y) = tr(rho M^A_{a|x} (x) M^B_{b|y}). Validates inputs.
Correlation born_correlation(const QuantumStrategy& s);

// B = sum beta(a,b,x,y) M^A_{a|x} (x) M^B_{b|y}; the offset is not folded in.
Matrix bell_operator(const BellFunctional& f, const std::vector<Measurement>& alice,
                     const std::vector<Measurement>& bob);

struct BestStateResult {
  Ket state;
  double value = 0.0;           // top eigenvalue + constant offset
  bool degenerate_top = false;  // top eigenspace not simple (within 1e-8)
};

// Top eigenvector of the Bell operator for fixed measurements.
BestStateResult best_state_for_measurements(const BellFunctional& f,
                                            const std::vector<Measurement>& alice,
                                            const std::vector<Measurement>& bob);

// The party-permutation-invariant CGLMP measurements: M_{a|0} = |a><a|,
// M_{a|1} = U|a><a|U* with U = TW, T = (-1) (+) I_{d-1},
// W_ij = 1/(d sin[(i-j-1/2) pi/d]).
std::vector<Measurement> cglmp_optimal_measurements(int d);
// The unitary U = TW itself (exposed for unitarity checks).
Matrix cglmp_unitary(int d);

// Entanglement negativity (sum |lambda_i| - 1)/2 of the partial transpose.
double negativity(const DensityOperator& rho);

// c p* + (1-c) swap(p*); same Bell value for symmetric functionals.
Correlation flat_segment(const BellFunctional& f, const Correlation& p_star, double c);

// --- explicit strategies from the catalog's sources ---

// |Phi+> with A0 = sz, A1 = sx, B_k = (sz + (-1)^k sx)/sqrt(2).
QuantumStrategy strategy_chsh_max();
// -i[cos(pi/8)|Phi-> + sin(pi/8)|Psi+>] with shared sz, sx.
QuantumStrategy strategy_chsh_sym();
// Shared-measurement family reaching 5 for every alpha.
QuantumStrategy strategy_i3322c(double alpha);
// Printed parameter sets exist for alpha = 1.5 and alpha = 2 only.
QuantumStrategy strategy_is(double alpha);
// Mirror-symmetric qubit strategy, Bell value ~0.6012.
QuantumStrategy strategy_j42();
// Conjugation-paired observables on |Phi+>, value 12 sqrt(2) + 3.
QuantumStrategy strategy_i9_max();
// Shared x-z-plane observables on |Phi+>, value 6 sqrt(3) + 9.
QuantumStrategy strategy_i9_sym();

}  // namespace bellforge
