#pragma once

#include <cstdint>
#include <functional>

#include "bellforge/quantum.hpp"

namespace bellforge {

enum class SeesawMode { unrestricted, symmetric_correlation, shared_povm };
const char* to_string(SeesawMode m);
SeesawMode seesaw_mode_from_string(const std::string& s);

struct SeesawConfig {
  int local_dim = 2;
  int max_iters = 300;
  double convergence_tol = 1e-10;  // on the Bell-value delta per sweep
  int restarts = 20;
  SeesawMode mode = SeesawMode::unrestricted;
  std::uint64_t seed = 2024;
};

enum class StateSubspace { symmetric, antisymmetric, both, full };
const char* to_string(StateSubspace s);

struct ParamOptConfig {
  int local_dim = 2;
  // "both" alternates restarts between the swap-invariant subspaces. "full"
  // drops the subspace restriction (shared measurements only); its results
  // are a relaxation diagnostic, not SQS values.
  StateSubspace subspace = StateSubspace::both;
  // Per-setting outcome ranks summing to local_dim. When unset, the
  // balanced partition plus every single-setting degenerate variant
  // ({local_dim, 0, ...}) is cycled through.
  std::optional<std::vector<std::vector<int>>> rank_partitions;
  int restarts = 100;
  int max_evals = 40000;
  double grad_step = 1e-6;
  double termination_tol = 1e-8;
  std::uint64_t seed = 2024;
};

struct OptimizationReport {
  double best_value = 0.0;
  QuantumStrategy best_strategy;
  std::vector<double> per_restart;
  bool converged = false;
  std::string mode;  // echo of the configuration that produced the result
  int best_restart = -1;
  // Bell value after each full sweep of the winning restart (see-saw only);
  // non-decreasing in unrestricted mode.
  std::vector<double> best_value_trace;
};

// Alternating optimization: (1) Alice's POVMs, (2) Bob's POVMs, (3) state as
// the Bell operator's top eigenvector. Dichotomic updates are closed-form;
// POVM updates with n > 2 and every symmetric_correlation step go through
// the SDP solver. shared_povm copies Alice's POVMs to Bob and restricts the
// state step to swap-invariant states; it may oscillate, so the best visited
// value is reported.
OptimizationReport seesaw(const BellFunctional& f, const SeesawConfig& cfg);

// Closed-form inner step for binary outcomes: the +-1 observable maximizing
// tr(F A) over A^2 = I is sign(F). Effects are the projectors onto the
// nonnegative/negative eigenspaces; an exactly zero F falls back to the
// computational basis.
Measurement dichotomic_observable_update(const Matrix& effective_operator);

// Lower bound over symmetric quantum strategies: state in the chosen
// swap-invariant subspace, one shared projective measurement set
// parametrized by per-setting SU(D) elements (D^2-1 parameters each) under
// the configured rank partition; quasi-Newton local search, best over
// restarts. Warns through the report mode echo when f is not symmetric.
OptimizationReport sqs_lower_bound(const BellFunctional& f, const ParamOptConfig& cfg);

// SU(dim) chart: plane rotations with phases, dim^2-1 parameters.
Matrix su_unitary(int dim, const Eigen::VectorXd& params);

struct SweepRow {
  double alpha = 0.0;
  double local = 0.0;
  double sqs_qubit = 0.0;
  double quantum = 0.0;
};

// Per grid point: exact local bound, qubit SQS value, qubit see-saw value.
std::vector<SweepRow> sweep(const std::function<BellFunctional(double)>& family,
                            const std::vector<double>& alphas, const SeesawConfig& seesaw_cfg,
                            const ParamOptConfig& sqs_cfg);

}  // namespace bellforge
