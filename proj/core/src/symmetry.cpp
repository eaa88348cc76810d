#include "bellforge/symmetry.hpp"

#include <cmath>

namespace bellforge {

namespace {
constexpr Complex kI{0.0, 1.0};

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void require_square_strategy(const QuantumStrategy& s, const char* what) {
  if (state_dim_a(s.state) != state_dim_b(s.state) || s.alice.size() != s.bob.size())
    throw ShapeError(std::string(what) + ": equal local dimensions and setting counts required");
}
}  // namespace

bool check_sufficient_conditions(const QuantumStrategy& s, SufficientKind kind,
                                 double tolerance) {
  if (state_dim_a(s.state) != state_dim_b(s.state) || s.alice.size() != s.bob.size())
    return false;
  const int d = state_dim_a(s.state);
  const Matrix rho = density_of(s.state);
  const Matrix swap = swap_operator(d);
  const Matrix rho_ba = swap * rho * swap.adjoint();
  if (kind == SufficientKind::identity) {
    if (max_abs(rho - rho_ba) > tolerance) return false;
    for (size_t x = 0; x < s.alice.size(); ++x) {
      if (s.alice[x].outcomes() != s.bob[x].outcomes()) return false;
      for (int a = 0; a < s.alice[x].outcomes(); ++a)
        if (max_abs(s.alice[x].effects[a] - s.bob[x].effects[a]) > tolerance) return false;
    }
    return true;
  }
  if (max_abs(rho.conjugate() - rho_ba) > tolerance) return false;
  for (size_t x = 0; x < s.alice.size(); ++x) {
    if (s.alice[x].outcomes() != s.bob[x].outcomes()) return false;
    for (int a = 0; a < s.alice[x].outcomes(); ++a)
      if (max_abs(s.alice[x].effects[a].conjugate() - s.bob[x].effects[a]) > tolerance)
        return false;
  }
  return true;
}

namespace {
// (system (x) ancilla) index on one side: i*2 + alpha
int side_index(int i, int alpha) { return i * 2 + alpha; }

Matrix doubled_effect(const Matrix& ma, const Matrix& mb) {
  const int d = static_cast<int>(ma.rows());
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out(side_index(i, 0), side_index(j, 0)) = ma(i, j);
      out(side_index(i, 1), side_index(j, 1)) = mb(i, j);
    }
  return out;
}
}  // namespace

QuantumStrategy symmetrize_mixed(const QuantumStrategy& s, double tolerance) {
  require_square_strategy(s, "symmetrize_mixed");
  if (!is_symmetric(born_correlation(s), tolerance))
    throw std::domain_error("symmetrize_mixed: input correlation is not symmetric");
  const int d = state_dim_a(s.state);
  const Matrix rho = density_of(s.state);
  const Matrix swap = swap_operator(d);
  const Matrix rho_ba = swap * rho * swap.adjoint();

  const int dd = 2 * d;
  Matrix out = Matrix::Zero(dd * dd, dd * dd);
  auto put = [&](const Matrix& r, int alpha, int beta) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            out(side_index(i, alpha) * dd + side_index(j, beta),
                side_index(k, alpha) * dd + side_index(l, beta)) += 0.5 * r(i * d + j, k * d + l);
  };
  put(rho, 0, 1);     // rho_AB (x) |01><01|
  put(rho_ba, 1, 0);  // rho_BA (x) |10><10|

  QuantumStrategy t;
  t.state = DensityOperator{out, dd, dd};
  for (size_t x = 0; x < s.alice.size(); ++x) {
    Measurement m;
    for (int a = 0; a < s.alice[x].outcomes(); ++a)
      m.effects.push_back(doubled_effect(s.alice[x].effects[a], s.bob[x].effects[a]));
    t.alice.push_back(m);
  }
  t.bob = t.alice;
  return t;
}

QuantumStrategy symmetrize_pure(const QuantumStrategy& s, double tolerance) {
  require_square_strategy(s, "symmetrize_pure");
  const Ket* k = std::get_if<Ket>(&s.state);
  if (!k) throw std::domain_error("symmetrize_pure: pure state required");
  for (const auto& m : s.alice)
    if (!m.is_projective()) throw std::domain_error("symmetrize_pure: projective measurements required");
  for (const auto& m : s.bob)
    if (!m.is_projective()) throw std::domain_error("symmetrize_pure: projective measurements required");
  if (!is_symmetric(born_correlation(s), tolerance))
    throw std::domain_error("symmetrize_pure: input correlation is not symmetric");

  const int d = k->dim_a;
  const int dd = 2 * d;
  Vector amp = Vector::Zero(dd * dd);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // |psi>_AB |01> + |psi>_BA |10>
      amp(side_index(i, 0) * dd + side_index(j, 1)) += r * k->amplitudes(i * d + j);
      amp(side_index(i, 1) * dd + side_index(j, 0)) += r * k->amplitudes(j * d + i);
    }

  QuantumStrategy t;
  t.state = Ket{amp, dd, dd};
  for (size_t x = 0; x < s.alice.size(); ++x) {
    Measurement m;
    for (int a = 0; a < s.alice[x].outcomes(); ++a)
      m.effects.push_back(doubled_effect(s.alice[x].effects[a], s.bob[x].effects[a]));
    t.alice.push_back(m);
  }
  t.bob = t.alice;
  return t;
}

NaimarkResult naimark_dilate(const Measurement& m) {
  m.validate();
  const int d = m.dim();
  if (m.is_projective())
    return {m, Matrix::Identity(d, d)};
  const int n = m.outcomes();
  Matrix v = Matrix::Zero(d * n, d);  // index (i, alpha) -> i*n + alpha
  for (int a = 0; a < n; ++a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.effects[a]);
    const Matrix root =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v(i * n + a, j) += root(i, j);
  }
  NaimarkResult out;
  out.isometry = v;
  for (int a = 0; a < n; ++a) {
    Matrix proj = Matrix::Zero(d * n, d * n);
    for (int i = 0; i < d; ++i) proj(i * n + a, i * n + a) = 1.0;
    out.projective.effects.push_back(proj);
  }
  return out;
}

Ket purify(const DensityOperator& rho) {
  const int d = static_cast<int>(rho.rho.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho);
  Ket psi;
  psi.dim_a = psi.dim_b = d;
  psi.amplitudes = Vector::Zero(d * d);
  for (int kk = 0; kk < d; ++kk) {
    const double lam = std::max(0.0, es.eigenvalues()(kk));
    if (lam <= 0.0) continue;
    const double root = std::sqrt(lam);
    for (int i = 0; i < d; ++i) psi.amplitudes(i * d + kk) += root * es.eigenvectors()(i, kk);
  }
  psi.amplitudes /= psi.amplitudes.norm();
  return psi;
}

std::vector<QubitObservable> mirror_measurements(const std::vector<QubitObservable>& alice) {
  std::vector<QubitObservable> bob;
  bob.reserve(alice.size());
  for (const auto& a : alice) {
    QubitObservable o = a;
    o.bloch.y() = -o.bloch.y();
    bob.push_back(o);
  }
  return bob;
}

Ket mirror_state(double alpha, const Ket& psi_sym) {
  if (psi_sym.dim_a != 2 || psi_sym.dim_b != 2)
    throw ShapeError("mirror_state: two-qubit state required");
  if (psi_sym.amplitudes.imag().cwiseAbs().maxCoeff() > 1e-12)
    throw std::domain_error("mirror_state: psi_sym must be real");
  if (std::abs(psi_sym.amplitudes(1) - psi_sym.amplitudes(2)) > 1e-12)
    throw std::domain_error("mirror_state: psi_sym must be symmetric");
  const double r = 1.0 / std::sqrt(2.0);
  Vector singlet(4);
  singlet << 0, r, -r, 0;
  Ket out;
  out.dim_a = out.dim_b = 2;
  out.amplitudes = std::cos(alpha) * psi_sym.amplitudes + kI * std::sin(alpha) * singlet;
  return out;
}

MirrorFormResult check_mirror_state_form(const Ket& psi, double tolerance) {
  if (psi.dim_a != psi.dim_b) throw ShapeError("check_mirror_state_form: square system required");
  const Matrix swap = swap_operator(psi.dim_a);
  const Vector lhs = swap * psi.amplitudes;
  const Vector rhs = psi.amplitudes.conjugate();
  int kmax = 0;
  rhs.cwiseAbs().maxCoeff(&kmax);
  MirrorFormResult r;
  const Complex phase = lhs(kmax) / rhs(kmax);
  if (std::abs(std::abs(phase) - 1.0) > tolerance) return r;
  const Complex unit = phase / std::abs(phase);
  if ((lhs - unit * rhs).cwiseAbs().maxCoeff() > tolerance) return r;
  r.is_mirror_form = true;
  r.theta = std::arg(unit);
  if (r.theta < 0) r.theta += 2 * std::numbers::pi;
  return r;
}

std::optional<Eigen::Matrix3d> find_aligning_rotation(const std::vector<Eigen::Vector3d>& a,
                                                      const std::vector<Eigen::Vector3d>& b,
                                                      double tolerance) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("find_aligning_rotation: need matching nonempty direction lists");
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (size_t k = 0; k < a.size(); ++k) m += b[k] * a[k].transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Eigen::Matrix3d rot = svd.matrixU() * d * svd.matrixV().transpose();
  for (size_t k = 0; k < a.size(); ++k)
    if ((rot * a[k] - b[k]).cwiseAbs().maxCoeff() > tolerance) return std::nullopt;
  return rot;
}

DensityOperator mirror_compatible_two_qubit_state(const Eigen::Vector3d& r,
                                                  const Eigen::Matrix3d& T) {
  if (std::abs(T(1, 0) + T(0, 1)) > 1e-12 || std::abs(T(2, 1) + T(1, 2)) > 1e-12 ||
      std::abs(T(2, 0) - T(0, 2)) > 1e-12)
    throw std::domain_error("mirror_compatible_two_qubit_state: T does not have the mirror pattern");
  const Eigen::Vector3d s{r.x(), -r.y(), r.z()};
  const Matrix paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  const Matrix id = Matrix::Identity(2, 2);
  Matrix rho = kron(id, id);
  for (int i = 0; i < 3; ++i) {
    rho += r(i) * kron(paulis[i], id);
    rho += s(i) * kron(id, paulis[i]);
    for (int j = 0; j < 3; ++j) rho += T(i, j) * kron(paulis[i], paulis[j]);
  }
  rho *= 0.25;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::operator_check)
    throw std::domain_error("mirror_compatible_two_qubit_state: parameters give a non-positive state");
  return DensityOperator{rho, 2, 2};
}

}  // namespace bellforge
