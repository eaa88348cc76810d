#pragma once

#include <iosfwd>
#include <map>

#include "bellforge/bell.hpp"
#include "bellforge/sdp.hpp"

namespace bellforge {

// One projector generator in Collins-Gisin form: outcomes 0..n-2 only (the
// last outcome is eliminated through normalization).
struct NpaLetter {
  int party = 0;  // 0 = A, 1 = B
  int setting = 0;
  int outcome = 0;
  auto operator<=>(const NpaLetter&) const = default;
};

// A word is a product of projectors, stored with all A letters before all B
// letters (parties commute); within a party the order is meaningful.
using NpaWord = std::vector<NpaLetter>;

// Applies idempotence and same-setting orthogonality to fixpoint after
// party-sorting. Returns nullopt when the product is structurally zero.
std::optional<NpaWord> npa_reduce(NpaWord w);
NpaWord npa_adjoint(const NpaWord& w);
// Lexicographic min of the word and its adjoint (moments of real programs
// are insensitive to conjugation).
NpaWord npa_canonical(const NpaWord& w);
// Image under the party swap A <-> B, re-canonicalized.
std::optional<NpaWord> npa_swap(const NpaWord& w);

// Hierarchy levels. Level 2 carries every monomial with at most two
// projectors per party and total length <= 3, i.e. the plain length-2 set
// plus the mixed AAB/ABB products; the paper-scale bounds need those.
enum class NpaLevel { level1, level1_ab, level2 };
NpaLevel npa_level_from_string(const std::string& s);

struct MomentMatrix {
  Scenario scenario;
  NpaLevel level = NpaLevel::level1;
  bool twirled = false;

  std::vector<NpaWord> index_words;
  Eigen::MatrixXi entry_class;  // class id per entry, -1 for structural zeros
  std::vector<NpaWord> class_representative;
  std::map<NpaWord, int> class_of;
  int identity_class = -1;

  int size() const { return static_cast<int>(index_words.size()); }
  int variable_count() const { return static_cast<int>(class_representative.size()); }
};

MomentMatrix npa_moment_structure(const Scenario& s, NpaLevel level);

// Merges moment classes along orbits of the party-swap action; the result
// bounds the symmetric-correlation value.
MomentMatrix twirl(const MomentMatrix& m);

// Bell functional as a linear form over moment classes plus a constant,
// via the Collins-Gisin elimination of last outcomes.
struct MomentObjective {
  std::vector<double> coefficients;  // indexed by class id
  double constant = 0.0;
};
MomentObjective npa_objective(const BellFunctional& f, const MomentMatrix& m);

struct NpaBound {
  double value = 0.0;
  SdpStatus status = SdpStatus::numerical_failure;
  double solver_gap = 0.0;
  int moment_matrix_size = 0;
  int variables = 0;
};

// Upper bound on the quantum (or symmetric-correlation quantum) value.
// Solver failures propagate through the status.
NpaBound npa_upper_bound(const BellFunctional& f, NpaLevel level, bool symmetric = false,
                         double tolerance = 1e-9);

// The assembled moment SDP in the solver's (D)-side encoding: one
// constraint block per non-identity moment class.
SdpProblem npa_assemble(const BellFunctional& f, const MomentMatrix& m);

// Sparse SDPA (.dat-s) export of the assembled program, for cross-checking
// against external solvers.
void export_sdpa(const SdpProblem& p, std::ostream& out);

}  // namespace bellforge
