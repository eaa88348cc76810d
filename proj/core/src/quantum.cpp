#include "bellforge/quantum.hpp"

#include <cmath>
#include <numbers>

namespace bellforge {

namespace {
constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

void check_hermitian(const Matrix& m, double tolerance, const char* what) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance)
    throw std::domain_error(std::string(what) + ": not Hermitian");
}
}  // namespace

int state_dim_a(const State& s) {
  return std::visit([](const auto& v) { return v.dim_a; }, s);
}

int state_dim_b(const State& s) {
  return std::visit([](const auto& v) { return v.dim_b; }, s);
}

Matrix density_of(const State& s) {
  if (const Ket* k = std::get_if<Ket>(&s)) return k->amplitudes * k->amplitudes.adjoint();
  return std::get<DensityOperator>(s).rho;
}

void validate_state(const State& s) {
  if (const Ket* k = std::get_if<Ket>(&s)) {
    if (k->amplitudes.size() != k->dim_a * k->dim_b)
      throw ShapeError("ket: amplitude length does not match local dimensions");
    if (std::abs(k->amplitudes.norm() - 1.0) > tol::operator_check)
      throw std::domain_error("ket: not normalized");
    return;
  }
  const auto& d = std::get<DensityOperator>(s);
  if (d.rho.rows() != d.dim_a * d.dim_b || d.rho.cols() != d.rho.rows())
    throw ShapeError("density operator: shape does not match local dimensions");
  check_hermitian(d.rho, tol::operator_check, "density operator");
  if (std::abs(d.rho.trace().real() - 1.0) > tol::operator_check)
    throw std::domain_error("density operator: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::operator_check)
    throw std::domain_error("density operator: not positive semidefinite");
}

bool Measurement::is_projective(double tolerance) const {
  for (const auto& e : effects)
    if (((e * e) - e).cwiseAbs().maxCoeff() > tolerance) return false;
  return true;
}

void Measurement::validate(double tolerance) const {
  if (effects.empty()) throw ShapeError("measurement: no effects");
  const int d = dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : effects) {
    if (e.rows() != d || e.cols() != d) throw ShapeError("measurement: effect shape mismatch");
    check_hermitian(e, tolerance, "effect");
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tolerance)
      throw std::domain_error("effect: not positive semidefinite");
    sum += e;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tolerance)
    throw std::domain_error("measurement: effects do not sum to identity");
}

Measurement Measurement::from_observable(const Matrix& obs) {
  const int d = static_cast<int>(obs.rows());
  Measurement m;
  m.effects = {(Matrix::Identity(d, d) + obs) / 2.0, (Matrix::Identity(d, d) - obs) / 2.0};
  return m;
}

Matrix QubitObservable::to_matrix() const {
  if (degenerate_sign != 0)
    return static_cast<double>(degenerate_sign) * Matrix::Identity(2, 2);
  return bloch.x() * pauli_x() + bloch.y() * pauli_y() + bloch.z() * pauli_z();
}

Measurement QubitObservable::to_measurement() const { return Measurement::from_observable(to_matrix()); }

QubitObservable QubitObservable::from_angles_deg(double theta_deg, double phi_deg) {
  const double t = deg2rad(theta_deg), p = deg2rad(phi_deg);
  QubitObservable o;
  o.bloch = {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
  return o;
}

Scenario QuantumStrategy::scenario() const {
  return Scenario(static_cast<int>(alice.size()), static_cast<int>(bob.size()),
                  alice.empty() ? 2 : alice.front().outcomes());
}

void QuantumStrategy::validate() const {
  validate_state(state);
  if (alice.empty() || bob.empty()) throw ShapeError("strategy: missing measurements");
  const int n = alice.front().outcomes();
  for (const auto& m : alice) {
    if (m.outcomes() != n) throw ShapeError("strategy: non-uniform outcome counts");
    if (m.dim() != state_dim_a(state)) throw ShapeError("strategy: Alice dimension mismatch");
    m.validate();
  }
  for (const auto& m : bob) {
    if (m.outcomes() != n) throw ShapeError("strategy: non-uniform outcome counts");
    if (m.dim() != state_dim_b(state)) throw ShapeError("strategy: Bob dimension mismatch");
    m.validate();
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix swap_operator(int d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

Matrix partial_trace_b(const Matrix& rho, int dim_a, int dim_b) {
  Matrix out = Matrix::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k) out(i, j) += rho(i * dim_b + k, j * dim_b + k);
  return out;
}

Matrix partial_trace_a(const Matrix& rho, int dim_a, int dim_b) {
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_b; ++k)
    for (int l = 0; l < dim_b; ++l)
      for (int i = 0; i < dim_a; ++i) out(k, l) += rho(i * dim_b + k, i * dim_b + l);
  return out;
}

Matrix partial_transpose_b(const Matrix& rho, int dim_a, int dim_b) {
  Matrix out(rho.rows(), rho.cols());
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k)
        for (int l = 0; l < dim_b; ++l)
          out(i * dim_b + l, j * dim_b + k) = rho(i * dim_b + k, j * dim_b + l);
  return out;
}

Correlation born_correlation(const QuantumStrategy& s) {
  s.validate();
  const Scenario sc = s.scenario();
  Correlation p(sc);
  if (const Ket* k = std::get_if<Ket>(&s.state)) {
    // <psi| M (x) N |psi> via one D_B x D_A reshape of the amplitudes:
    // Psi(j,i) = <ij|psi>, so the value is sum conj(Psi) .* (N Psi M^T).
    Eigen::Map<const Matrix> psi(k->amplitudes.data(), k->dim_b, k->dim_a);
    for (int x = 0; x < sc.settings_a; ++x)
      for (int y = 0; y < sc.settings_b; ++y)
        for (int a = 0; a < sc.outcomes; ++a)
          for (int b = 0; b < sc.outcomes; ++b) {
            const Matrix t = s.bob[y].effects[b] * psi * s.alice[x].effects[a].transpose();
            p.at(a, b, x, y) = psi.conjugate().cwiseProduct(t).sum().real();
          }
    return p;
  }
  const Matrix rho = density_of(s.state);
  for (int x = 0; x < sc.settings_a; ++x)
    for (int y = 0; y < sc.settings_b; ++y)
      for (int a = 0; a < sc.outcomes; ++a)
        for (int b = 0; b < sc.outcomes; ++b)
          p.at(a, b, x, y) =
              (rho * kron(s.alice[x].effects[a], s.bob[y].effects[b])).trace().real();
  return p;
}

Matrix bell_operator(const BellFunctional& f, const std::vector<Measurement>& alice,
                     const std::vector<Measurement>& bob) {
  const Scenario& sc = f.scenario();
  if (static_cast<int>(alice.size()) != sc.settings_a ||
      static_cast<int>(bob.size()) != sc.settings_b)
    throw ShapeError("bell_operator: measurement count does not match scenario");
  const int da = alice.front().dim(), db = bob.front().dim();
  Matrix op = Matrix::Zero(da * db, da * db);
  for (int x = 0; x < sc.settings_a; ++x)
    for (int y = 0; y < sc.settings_b; ++y)
      for (int a = 0; a < sc.outcomes; ++a)
        for (int b = 0; b < sc.outcomes; ++b) {
          const double c = f(a, b, x, y);
          if (c != 0.0) op += c * kron(alice[x].effects[a], bob[y].effects[b]);
        }
  return op;
}

BestStateResult best_state_for_measurements(const BellFunctional& f,
                                            const std::vector<Measurement>& alice,
                                            const std::vector<Measurement>& bob) {
  const Matrix op = bell_operator(f, alice, bob);
  Eigen::SelfAdjointEigenSolver<Matrix> es(op);
  const auto& ev = es.eigenvalues();
  const int top = static_cast<int>(ev.size()) - 1;
  BestStateResult r;
  r.state.dim_a = alice.front().dim();
  r.state.dim_b = bob.front().dim();
  r.state.amplitudes = es.eigenvectors().col(top);
  r.value = ev(top) + f.constant_offset;
  r.degenerate_top = top > 0 && ev(top) - ev(top - 1) < 1e-8 * std::max(1.0, std::abs(ev(top)));
  return r;
}

Matrix cglmp_unitary(int d) {
  if (d < 2) throw std::domain_error("cglmp_unitary: d >= 2 required");
  Matrix w(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) w(i, j) = 1.0 / (d * std::sin((i - j - 0.5) * kPi / d));
  Matrix t = Matrix::Identity(d, d);
  t(0, 0) = -1.0;
  return t * w;
}

std::vector<Measurement> cglmp_optimal_measurements(int d) {
  const Matrix u = cglmp_unitary(d);
  Measurement m0, m1;
  for (int a = 0; a < d; ++a) {
    Matrix proj = Matrix::Zero(d, d);
    proj(a, a) = 1.0;
    m0.effects.push_back(proj);
    m1.effects.push_back(u * proj * u.adjoint());
  }
  return {m0, m1};
}

double negativity(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose_b(rho.rho, rho.dim_a, rho.dim_b),
                                           Eigen::EigenvaluesOnly);
  return (es.eigenvalues().cwiseAbs().sum() - 1.0) / 2.0;
}

Correlation flat_segment(const BellFunctional& f, const Correlation& p_star, double c) {
  if (!is_symmetric_functional(f))
    throw std::domain_error("flat_segment: functional must be symmetric");
  const Correlation swapped = swap_parties(p_star);
  Correlation out(p_star.scenario());
  for (size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = c * p_star.raw()[i] + (1.0 - c) * swapped.raw()[i];
  return out;
}

// --- explicit strategies ---

namespace {
Ket ket2(std::initializer_list<Complex> amps) {
  Ket k;
  k.dim_a = k.dim_b = 2;
  k.amplitudes = Vector(4);
  int i = 0;
  for (Complex c : amps) k.amplitudes(i++) = c;
  return k;
}
}  // namespace

QuantumStrategy strategy_chsh_max() {
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy s;
  s.state = ket2({r, 0, 0, r});
  s.alice = {Measurement::from_observable(pauli_z()), Measurement::from_observable(pauli_x())};
  s.bob = {Measurement::from_observable((pauli_z() + pauli_x()) * r),
           Measurement::from_observable((pauli_z() - pauli_x()) * r)};
  return s;
}

QuantumStrategy strategy_chsh_sym() {
  const double r = 1.0 / std::sqrt(2.0);
  const double c = std::cos(kPi / 8), sn = std::sin(kPi / 8);
  // -i [cos(pi/8)|Phi-> + sin(pi/8)|Psi+>]
  QuantumStrategy s;
  s.state = ket2({-kI * c * r, -kI * sn * r, -kI * sn * r, kI * c * r});
  s.alice = {Measurement::from_observable(pauli_z()), Measurement::from_observable(pauli_x())};
  s.bob = s.alice;
  return s;
}

QuantumStrategy strategy_i3322c(double alpha) {
  const double r = 1.0 / std::sqrt(2.0);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double ch = std::cos(alpha / 2), sh = std::sin(alpha / 2);
  QuantumStrategy s;
  // i sin(a/2)|Phi+> - cos(a/2)|Psi+>
  s.state = ket2({kI * sh * r, -ch * r, -ch * r, kI * sh * r});
  const Matrix a0 = 0.5 * (2 * std::cos(kPi / 6) * pauli_x() + ca * pauli_y() + sa * pauli_z());
  const Matrix a1 = 0.5 * (2 * std::cos(kPi / 6) * pauli_x() - ca * pauli_y() - sa * pauli_z());
  s.alice = {Measurement::from_observable(a0), Measurement::from_observable(a1),
             Measurement::from_observable(pauli_y())};
  s.bob = s.alice;
  return s;
}

QuantumStrategy strategy_is(double alpha) {
  double p, sp, t;
  if (alpha == 1.5) {
    p = 16.0 / 21.0;
    sp = 8.0 / 17.0;
    t = -std::sqrt(5.0) / 3.0;
  } else if (alpha == 2.0) {
    p = 2.0 * (1.0 + std::sqrt(13.0)) / (3.0 * std::sqrt(13.0));
    sp = (10.0 * std::sqrt(13.0) - 18.0) / 61.0;
    t = -std::sqrt((11.0 - std::sqrt(13.0)) / 18.0);
  } else {
    throw std::domain_error("strategy_is: parameters are printed for alpha in {1.5, 2} only");
  }
  QuantumStrategy s;
  s.state = ket2({std::sqrt(p), 0, 0, std::sqrt(1.0 - p)});
  s.alice = {
      Measurement::from_observable(sp * pauli_x() + std::sqrt(1.0 - sp * sp) * pauli_z()),
      Measurement::from_observable(pauli_x()), Measurement::from_observable(pauli_z())};
  const double tz = std::sqrt(1.0 - t * t);
  Measurement b2;  // degenerate B_2 = I kept as a zero-effect POVM
  b2.effects = {Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  s.bob = {Measurement::from_observable(t * pauli_x() + tz * pauli_z()),
           Measurement::from_observable(t * pauli_x() - tz * pauli_z()), b2};
  return s;
}

QuantumStrategy strategy_j42() {
  const double a = deg2rad(42.5092);
  QuantumStrategy s;
  s.state = ket2({-std::sin(a), 0, 0, std::cos(a)});
  // (theta, phi) in degrees; phi_1 is arbitrary per the source and fixed to 0
  const double angles[4][2] = {
      {61.9767, 166.1570}, {0.0, 0.0}, {54.3423, 41.5892}, {52.2700, -71.170}};
  for (const auto& ang : angles) {
    const auto oa = QubitObservable::from_angles_deg(ang[0], ang[1]);
    const auto ob = QubitObservable::from_angles_deg(ang[0], -ang[1]);
    s.alice.push_back(oa.to_measurement());
    s.bob.push_back(ob.to_measurement());
  }
  return s;
}

namespace {
// Observables 1..3 and 4..9 (0-based 0..2 and 3..8) of the CHSH_3 block set.
std::vector<Matrix> i9_base_observables() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> obs(9);
  obs[0] = pauli_z();
  obs[1] = pauli_x();
  obs[2] = -pauli_y();
  obs[3] = (pauli_z() + pauli_x()) * r;
  obs[4] = (pauli_z() - pauli_x()) * r;
  obs[5] = (pauli_z() + pauli_y()) * r;
  obs[6] = (pauli_z() - pauli_y()) * r;
  obs[7] = (pauli_x() + pauli_y()) * r;
  obs[8] = (pauli_x() - pauli_y()) * r;
  return obs;
}
}  // namespace

QuantumStrategy strategy_i9_max() {
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy s;
  s.state = ket2({r, 0, 0, r});
  const auto base = i9_base_observables();
  for (int k = 0; k < 9; ++k) {
    const Matrix a = k < 3 ? base[k] : base[k].conjugate();
    const Matrix b = k < 3 ? base[k].conjugate() : base[k];
    s.alice.push_back(Measurement::from_observable(a));
    s.bob.push_back(Measurement::from_observable(b));
  }
  return s;
}

QuantumStrategy strategy_i9_sym() {
  const double r = 1.0 / std::sqrt(2.0), q = std::sqrt(3.0);
  QuantumStrategy s;
  s.state = ket2({r, 0, 0, r});
  std::vector<Matrix> obs(9);
  obs[0] = obs[8] = pauli_z();
  obs[7] = pauli_x();
  obs[1] = obs[5] = (q * pauli_x() + pauli_z()) / 2.0;
  obs[2] = (q * pauli_x() - pauli_z()) / 2.0;
  obs[4] = -obs[2];
  obs[3] = (pauli_x() + q * pauli_z()) / 2.0;
  obs[6] = (-pauli_x() + q * pauli_z()) / 2.0;
  for (const auto& o : obs) s.alice.push_back(Measurement::from_observable(o));
  s.bob = s.alice;
  return s;
}

}  // namespace bellforge
