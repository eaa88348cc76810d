#pragma once

#include "bellforge/quantum.hpp"

namespace bellforge {

enum class SufficientKind { identity, conjugation };

// Shared measurements on a swap-invariant state (the identity-kind
// sufficient condition), or the conjugation pairing rho* = S rho S* with
// M^B = conj(M^A).
bool check_sufficient_conditions(const QuantumStrategy& s, SufficientKind kind,
                                 double tolerance = tol::operator_check);

// Embeds a strategy with a symmetric correlation into a shared-measurement
// strategy on doubled local dimension: state
// 1/2 [rho_AB (x) |01><01| + rho_BA (x) |10><10|], effects
// M^A (x) |0><0| + M^B (x) |1><1|. Local factors are ordered
// (system (x) ancilla). Throws if the input correlation is asymmetric.
QuantumStrategy symmetrize_mixed(const QuantumStrategy& s, double tolerance = tol::symmetry);

// Pure-state variant: (|psi>_AB |01> + |psi>_BA |10>)/sqrt(2) with
// projective inputs; requires a ket state and projective measurements.
QuantumStrategy symmetrize_pure(const QuantumStrategy& s, double tolerance = tol::symmetry);

struct NaimarkResult {
  Measurement projective;
  Matrix isometry;  // V with V* Pi_a V = M_a
};

// Block dilation with ancilla dimension = number of outcomes; projective
// inputs pass through unchanged with an identity isometry.
NaimarkResult naimark_dilate(const Measurement& m);

// Purification on a doubled system; partial trace over the copy recovers rho.
Ket purify(const DensityOperator& rho);

// b_k = M a_k with M = diag(1,-1,1); effect matrices become complex
// conjugates of Alice's.
std::vector<QubitObservable> mirror_measurements(const std::vector<QubitObservable>& alice);

// cos(alpha) |psi_sym> + i sin(alpha) |Psi->; psi_sym must be a real
// symmetric two-qubit ket.
Ket mirror_state(double alpha, const Ket& psi_sym);

struct MirrorFormResult {
  bool is_mirror_form = false;
  double theta = 0.0;  // phase in S|psi> = e^{i theta} |psi*>
};

// Tests S|psi> = e^{i theta}|psi*| for some theta (equivalently, psi is a
// real-symmetric plus imaginary-antisymmetric combination up to phase).
MirrorFormResult check_mirror_state_form(const Ket& psi, double tolerance = tol::operator_check);

// R in SO(3) with R a_k = b_k for all k, if one exists (orthogonal
// Procrustes with a det +1 gate). Mirror pairs of non-coplanar directions
// have none.
std::optional<Eigen::Matrix3d> find_aligning_rotation(const std::vector<Eigen::Vector3d>& a,
                                                      const std::vector<Eigen::Vector3d>& b,
                                                      double tolerance = 1e-9);

// rho = 1/4 (I(x)I + r.sigma(x)I + I(x)s.sigma + sum T_ij sigma_i(x)sigma_j)
// with s = (r_x, -r_y, r_z); T must satisfy T_yx = -T_xy, T_zy = -T_yz,
// T_zx = T_xz, and the result must be positive semidefinite.
DensityOperator mirror_compatible_two_qubit_state(const Eigen::Vector3d& r,
                                                  const Eigen::Matrix3d& T);

}  // namespace bellforge
