#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellforge {

// Default tolerances: 1e-9 for normalization/no-signaling (double-precision
// Born-rule noise floor), 1e-8 for symmetry classification.
namespace tol {
inline constexpr double probability = 1e-9;
inline constexpr double symmetry = 1e-8;
}  // namespace tol

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bipartite Bell scenario (2, m, n): settings per party and outcomes per
// setting. Outcome cardinality is uniform across settings.
struct Scenario {
  int settings_a = 0;
  int settings_b = 0;
  int outcomes = 0;

  Scenario() = default;
  Scenario(int m_a, int m_b, int n);
  static Scenario square(int m, int n) { return Scenario(m, m, n); }

  int joint_entries() const { return settings_a * settings_b * outcomes * outcomes; }
  bool operator==(const Scenario&) const = default;
};

// Joint conditional distribution P(a,b|x,y), stored dense.
class Correlation {
 public:
  explicit Correlation(const Scenario& s);

  const Scenario& scenario() const { return scenario_; }

  double operator()(int a, int b, int x, int y) const { return table_[index(a, b, x, y)]; }
  double& at(int a, int b, int x, int y) { return table_[index(a, b, x, y)]; }

  // Marginals; for no-signaling tables the choice of the other party's
  // setting is immaterial.
  double marginal_a(int a, int x, int y = 0) const;
  double marginal_b(int b, int y, int x = 0) const;

  const std::vector<double>& raw() const { return table_; }
  std::vector<double>& raw() { return table_; }

  bool is_normalized(double tolerance = tol::probability) const;

 private:
  int index(int a, int b, int x, int y) const;
  Scenario scenario_;
  std::vector<double> table_;
};

// Dichotomic-outcome view: <A_x>, <B_y>, <A_x B_y> with the (-1)^a sign
// convention. Only defined for n = 2.
struct CorrelatorView {
  Eigen::VectorXd singles_a;
  Eigen::VectorXd singles_b;
  Eigen::MatrixXd joints;  // joints(x, y) = <A_x B_y>
};

// Linear Bell functional beta . P + constant_offset. Correlator-form
// constants live in the offset so quoted local bounds match verbatim.
class BellFunctional {
 public:
  explicit BellFunctional(const Scenario& s, std::string name = {});

  const Scenario& scenario() const { return scenario_; }

  double operator()(int a, int b, int x, int y) const { return coeff_[index(a, b, x, y)]; }
  double& at(int a, int b, int x, int y) { return coeff_[index(a, b, x, y)]; }

  double constant_offset = 0.0;
  std::string name;
  std::optional<double> known_local_bound;

  const std::vector<double>& raw() const { return coeff_; }
  std::vector<double>& raw() { return coeff_; }

 private:
  int index(int a, int b, int x, int y) const;
  Scenario scenario_;
  std::vector<double> coeff_;
};

// Correlator-form weights used to assemble a functional for n = 2.
struct CorrelatorWeights {
  Eigen::VectorXd singles_a;
  Eigen::VectorXd singles_b;
  Eigen::MatrixXd joints;
  double offset = 0.0;

  static CorrelatorWeights zero(int m);
};

// beta . P + offset. Throws ShapeError on scenario mismatch.
double evaluate(const BellFunctional& f, const Correlation& p);

// n = 2 only.
CorrelatorView correlators_from_probabilities(const Correlation& p);

// Inverse of the correlator map: P = 1/4 [1 + (-1)^a <A_x> + (-1)^b <B_y>
// + (-1)^(a+b) <A_x B_y>]. Throws if a reconstructed entry is negative
// beyond tolerance (inconsistent correlator set).
Correlation probabilities_from_correlators(const CorrelatorView& c,
                                           double tolerance = tol::probability);

// Expands correlator weights into a probability-space functional. Single-
// party terms attach to the diagonal setting pair (x,x); on no-signaling
// correlations this is exact and keeps deterministic bounds in dyadic
// arithmetic.
BellFunctional functional_from_correlator_form(const CorrelatorWeights& w,
                                               std::string name = {});

// output(a,b,x,y) = input(b,a,y,x); requires settings_a == settings_b.
Correlation swap_parties(const Correlation& p);
BellFunctional swap_parties(const BellFunctional& f);

bool is_symmetric(const Correlation& p, double tolerance = tol::symmetry);
// Classification uses the coefficient tensor only; the offset is ignored.
bool is_symmetric_functional(const BellFunctional& f, double tolerance = tol::symmetry);

bool is_no_signaling(const Correlation& p, double tolerance = tol::probability);

// Uniform P(a,b|x,y) = 1/n^2.
Correlation uniform_correlation(const Scenario& s);

// Tsirelson correlation P_T(a,b|x,y) = 1/4 [1 + (-1)^(xy+a+b)/sqrt(2)].
Correlation tsirelson_correlation();

}  // namespace bellforge
