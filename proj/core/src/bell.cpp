#include "bellforge/bell.hpp"

#include <cmath>
#include <numeric>

namespace bellforge {

Scenario::Scenario(int m_a, int m_b, int n) : settings_a(m_a), settings_b(m_b), outcomes(n) {
  if (m_a < 1 || m_b < 1) throw ShapeError("scenario: need at least one setting per party");
  if (n < 2) throw ShapeError("scenario: need at least two outcomes");
}

Correlation::Correlation(const Scenario& s) : scenario_(s), table_(s.joint_entries(), 0.0) {}

int Correlation::index(int a, int b, int x, int y) const {
  const int n = scenario_.outcomes;
  return ((x * scenario_.settings_b + y) * n + a) * n + b;
}

double Correlation::marginal_a(int a, int x, int y) const {
  double s = 0.0;
  for (int b = 0; b < scenario_.outcomes; ++b) s += (*this)(a, b, x, y);
  return s;
}

double Correlation::marginal_b(int b, int y, int x) const {
  double s = 0.0;
  for (int a = 0; a < scenario_.outcomes; ++a) s += (*this)(a, b, x, y);
  return s;
}

bool Correlation::is_normalized(double tolerance) const {
  const int n = scenario_.outcomes;
  for (int x = 0; x < scenario_.settings_a; ++x)
    for (int y = 0; y < scenario_.settings_b; ++y) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double p = (*this)(a, b, x, y);
          if (p < -tolerance || p > 1.0 + tolerance) return false;
          s += p;
        }
      if (std::abs(s - 1.0) > tolerance) return false;
    }
  return true;
}

BellFunctional::BellFunctional(const Scenario& s, std::string nm)
    : name(std::move(nm)), scenario_(s), coeff_(s.joint_entries(), 0.0) {}

int BellFunctional::index(int a, int b, int x, int y) const {
  const int n = scenario_.outcomes;
  return ((x * scenario_.settings_b + y) * n + a) * n + b;
}

CorrelatorWeights CorrelatorWeights::zero(int m) {
  CorrelatorWeights w;
  w.singles_a = Eigen::VectorXd::Zero(m);
  w.singles_b = Eigen::VectorXd::Zero(m);
  w.joints = Eigen::MatrixXd::Zero(m, m);
  return w;
}

double evaluate(const BellFunctional& f, const Correlation& p) {
  if (!(f.scenario() == p.scenario()))
    throw ShapeError("evaluate: functional and correlation scenarios differ");
  const auto& c = f.raw();
  const auto& t = p.raw();
  double s = std::inner_product(c.begin(), c.end(), t.begin(), 0.0);
  return s + f.constant_offset;
}

CorrelatorView correlators_from_probabilities(const Correlation& p) {
  const Scenario& s = p.scenario();
  if (s.outcomes != 2) throw ShapeError("correlators require n = 2");
  CorrelatorView v;
  v.singles_a = Eigen::VectorXd::Zero(s.settings_a);
  v.singles_b = Eigen::VectorXd::Zero(s.settings_b);
  v.joints = Eigen::MatrixXd::Zero(s.settings_a, s.settings_b);
  for (int x = 0; x < s.settings_a; ++x)
    for (int a = 0; a < 2; ++a) v.singles_a(x) += (a ? -1.0 : 1.0) * p.marginal_a(a, x);
  for (int y = 0; y < s.settings_b; ++y)
    for (int b = 0; b < 2; ++b) v.singles_b(y) += (b ? -1.0 : 1.0) * p.marginal_b(b, y);
  for (int x = 0; x < s.settings_a; ++x)
    for (int y = 0; y < s.settings_b; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          v.joints(x, y) += ((a + b) % 2 ? -1.0 : 1.0) * p(a, b, x, y);
  return v;
}

Correlation probabilities_from_correlators(const CorrelatorView& c, double tolerance) {
  const int ma = static_cast<int>(c.singles_a.size());
  const int mb = static_cast<int>(c.singles_b.size());
  if (c.joints.rows() != ma || c.joints.cols() != mb)
    throw ShapeError("correlator view: joint table shape mismatch");
  Correlation p(Scenario(ma, mb, 2));
  for (int x = 0; x < ma; ++x)
    for (int y = 0; y < mb; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double sa = a ? -1.0 : 1.0;
          const double sb = b ? -1.0 : 1.0;
          const double v =
              0.25 * (1.0 + sa * c.singles_a(x) + sb * c.singles_b(y) + sa * sb * c.joints(x, y));
          if (v < -tolerance)
            throw std::domain_error("inconsistent correlator set: negative probability");
          p.at(a, b, x, y) = v;
        }
  return p;
}

BellFunctional functional_from_correlator_form(const CorrelatorWeights& w, std::string name) {
  const int m = static_cast<int>(w.singles_a.size());
  if (w.singles_b.size() != m || w.joints.rows() != m || w.joints.cols() != m)
    throw ShapeError("correlator weights: shape mismatch");
  BellFunctional f(Scenario(m, m, 2), std::move(name));
  for (int x = 0; x < m; ++x)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        f.at(a, b, x, x) += (a ? -1.0 : 1.0) * w.singles_a(x);
        f.at(a, b, x, x) += (b ? -1.0 : 1.0) * w.singles_b(x);
      }
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      const double j = w.joints(x, y);
      if (j == 0.0) continue;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) f.at(a, b, x, y) += ((a + b) % 2 ? -1.0 : 1.0) * j;
    }
  f.constant_offset = w.offset;
  return f;
}

Correlation swap_parties(const Correlation& p) {
  const Scenario& s = p.scenario();
  if (s.settings_a != s.settings_b)
    throw ShapeError("swap_parties requires equal setting counts");
  Correlation q(s);
  for (int x = 0; x < s.settings_a; ++x)
    for (int y = 0; y < s.settings_b; ++y)
      for (int a = 0; a < s.outcomes; ++a)
        for (int b = 0; b < s.outcomes; ++b) q.at(a, b, x, y) = p(b, a, y, x);
  return q;
}

BellFunctional swap_parties(const BellFunctional& f) {
  const Scenario& s = f.scenario();
  if (s.settings_a != s.settings_b)
    throw ShapeError("swap_parties requires equal setting counts");
  BellFunctional g(s, f.name);
  for (int x = 0; x < s.settings_a; ++x)
    for (int y = 0; y < s.settings_b; ++y)
      for (int a = 0; a < s.outcomes; ++a)
        for (int b = 0; b < s.outcomes; ++b) g.at(a, b, x, y) = f(b, a, y, x);
  g.constant_offset = f.constant_offset;
  g.known_local_bound = f.known_local_bound;
  return g;
}

namespace {
double max_abs_diff(const std::vector<double>& u, const std::vector<double>& v) {
  double d = 0.0;
  for (size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
  return d;
}
}  // namespace

bool is_symmetric(const Correlation& p, double tolerance) {
  if (p.scenario().settings_a != p.scenario().settings_b) return false;
  return max_abs_diff(p.raw(), swap_parties(p).raw()) <= tolerance;
}

bool is_symmetric_functional(const BellFunctional& f, double tolerance) {
  if (f.scenario().settings_a != f.scenario().settings_b) return false;
  return max_abs_diff(f.raw(), swap_parties(f).raw()) <= tolerance;
}

bool is_no_signaling(const Correlation& p, double tolerance) {
  const Scenario& s = p.scenario();
  for (int x = 0; x < s.settings_a; ++x)
    for (int a = 0; a < s.outcomes; ++a) {
      const double ref = p.marginal_a(a, x, 0);
      for (int y = 1; y < s.settings_b; ++y)
        if (std::abs(p.marginal_a(a, x, y) - ref) > tolerance) return false;
    }
  for (int y = 0; y < s.settings_b; ++y)
    for (int b = 0; b < s.outcomes; ++b) {
      const double ref = p.marginal_b(b, y, 0);
      for (int x = 1; x < s.settings_a; ++x)
        if (std::abs(p.marginal_b(b, y, x) - ref) > tolerance) return false;
    }
  return true;
}

Correlation uniform_correlation(const Scenario& s) {
  Correlation p(s);
  const double v = 1.0 / (s.outcomes * s.outcomes);
  for (auto& e : p.raw()) e = v;
  return p;
}

Correlation tsirelson_correlation() {
  Correlation p(Scenario::square(2, 2));
  const double r = 1.0 / std::sqrt(2.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          p.at(a, b, x, y) = 0.25 * (1.0 + ((x * y + a + b) % 2 ? -r : r));
  return p;
}

}  // namespace bellforge
