#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace bellforge {

// One coefficient of a symmetric matrix: (row, col, value) with row <= col
// standing for the entry at both (row, col) and (col, row).
struct SdpEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double rhs = 0.0;
};

enum class SdpStatus { optimal, max_iterations, numerical_failure, infeasible };

const char* to_string(SdpStatus s);

//   (P) max tr(C X)  s.t.  tr(A_i X) = b_i,  X >= 0
//   (D) min b . y    s.t.  Z = sum_i y_i A_i - C >= 0
struct SdpProblem {
  int dim = 0;
  std::vector<SdpEntry> objective;
  std::vector<SdpConstraint> constraints;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  // relative duality gap and feasibility residuals at the returned iterate
  // (the best one visited, not necessarily the last)
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Primal-dual interior-point method: Nesterov-Todd scaling, Mehrotra
// predictor-corrector, dense Cholesky on the Schur complement. Intended for
// dense problems with dim up to ~1500. Failure is always reported through
// the status, never through a silently wrong value.
SdpSolution solve_sdp(const SdpProblem& p, double tolerance = 1e-8, int max_iterations = 200);

// Real embedding of a Hermitian pairing: H -> [[Re H, -Im H], [Im H, Re H]].
// tr(embed(A) embed(X)) = 2 tr(A X) for Hermitian A, X.
Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& h);
Eigen::MatrixXcd extract_hermitian(const Eigen::MatrixXd& e);

}  // namespace bellforge
