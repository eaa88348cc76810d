#include <doctest.h>

#include <bellforge/catalog.hpp>
#include <bellforge/symmetry.hpp>
#include <cmath>

#include "test_helpers.hpp"

using namespace bellforge;
namespace bt = bellforge::testing;

namespace {
double corr_distance(const Correlation& a, const Correlation& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.raw().size(); ++i) d = std::max(d, std::abs(a.raw()[i] - b.raw()[i]));
  return d;
}

QuantumStrategy mirror_strategy(double alpha, int m, SplitMix& rng) {
  QuantumStrategy s;
  Ket sym;
  sym.dim_a = sym.dim_b = 2;
  Eigen::Vector3d w{rng.normal(), rng.normal(), rng.normal()};
  w.normalize();
  sym.amplitudes = Vector(4);
  // real combination of |Phi+>, |Phi->, |Psi+>
  const double r = 1.0 / std::sqrt(2.0);
  sym.amplitudes << (w(0) + w(1)) * r, w(2) * r, w(2) * r, (w(0) - w(1)) * r;
  s.state = mirror_state(alpha, sym);
  std::vector<QubitObservable> dirs;
  for (int k = 0; k < m; ++k) {
    QubitObservable o;
    o.bloch = Eigen::Vector3d{rng.normal(), rng.normal(), rng.normal()}.normalized();
    dirs.push_back(o);
  }
  const auto mirrored = mirror_measurements(dirs);
  for (int k = 0; k < m; ++k) {
    s.alice.push_back(dirs[k].to_measurement());
    s.bob.push_back(mirrored[k].to_measurement());
  }
  return s;
}
}  // namespace

TEST_CASE("sufficient conditions on the printed strategies") {
  CHECK(check_sufficient_conditions(strategy_chsh_sym(), SufficientKind::identity));
  CHECK(check_sufficient_conditions(strategy_j42(), SufficientKind::conjugation));
  CHECK_FALSE(check_sufficient_conditions(strategy_j42(), SufficientKind::identity));
  CHECK_FALSE(check_sufficient_conditions(strategy_chsh_max(), SufficientKind::identity));
  CHECK_FALSE(check_sufficient_conditions(strategy_chsh_max(), SufficientKind::conjugation));
}

TEST_CASE("mixed symmetrization of the maximal CHSH strategy") {
  const auto s = strategy_chsh_max();
  const auto t = symmetrize_mixed(s);
  CHECK(state_dim_a(t.state) == 4);
  CHECK(check_sufficient_conditions(t, SufficientKind::identity));
  CHECK(corr_distance(born_correlation(t), tsirelson_correlation()) < 1e-10);
}

TEST_CASE("mixed symmetrization leaves symmetric strategies valid") {
  const auto s = strategy_chsh_sym();
  const auto t = symmetrize_mixed(s);
  CHECK(check_sufficient_conditions(t, SufficientKind::identity));
  CHECK(corr_distance(born_correlation(t), born_correlation(s)) < 1e-10);
}

TEST_CASE("mixed symmetrization preserves the J42 value") {
  const auto t = symmetrize_mixed(strategy_j42());
  CHECK(state_dim_a(t.state) == 4);
  CHECK(std::abs(evaluate(j42().functional, born_correlation(t)) - 0.6012) < 1e-3);
}

TEST_CASE("mixed symmetrization rejects asymmetric correlations") {
  SplitMix rng(67);
  // a deterministic asymmetric point
  QuantumStrategy s;
  Ket k;
  k.dim_a = k.dim_b = 2;
  k.amplitudes = Vector::Zero(4);
  k.amplitudes(1) = 1.0;  // |01>
  s.state = k;
  const Measurement comp = Measurement::from_observable(pauli_z());
  s.alice = {comp, comp};
  s.bob = {comp, comp};
  CHECK_THROWS_AS(symmetrize_mixed(s), std::domain_error);
  (void)rng;
}

TEST_CASE("pure symmetrization") {
  const auto t = symmetrize_pure(strategy_chsh_max());
  CHECK(state_dim_a(t.state) == 4);
  CHECK(std::get_if<Ket>(&t.state) != nullptr);
  CHECK(check_sufficient_conditions(t, SufficientKind::identity));
  CHECK(corr_distance(born_correlation(t), tsirelson_correlation()) < 1e-10);

  // symmetric shared-measurement input: correlation unchanged
  const auto s2 = strategy_chsh_sym();
  const auto t2 = symmetrize_pure(s2);
  CHECK(corr_distance(born_correlation(t2), born_correlation(s2)) < 1e-10);

  // CGLMP d=3 optimal SQS doubles to local dimension 6
  const auto meas = cglmp_optimal_measurements(3);
  const auto r = best_state_for_measurements(i22dd(3).functional, meas, meas);
  QuantumStrategy s3;
  s3.state = r.state;
  s3.alice = meas;
  s3.bob = meas;
  const auto t3 = symmetrize_pure(s3);
  CHECK(state_dim_a(t3.state) == 6);
  CHECK(corr_distance(born_correlation(t3), born_correlation(s3)) < 1e-10);

  // density-operator input is rejected
  QuantumStrategy s4 = strategy_chsh_sym();
  s4.state = DensityOperator{density_of(s4.state), 2, 2};
  CHECK_THROWS_AS(symmetrize_pure(s4), std::domain_error);
}

TEST_CASE("naimark dilation") {
  // projective input: unchanged
  const Measurement pvm = Measurement::from_observable(pauli_x());
  const auto rp = naimark_dilate(pvm);
  CHECK(rp.projective.dim() == 2);
  CHECK((rp.isometry - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  // degenerate {I, 0} POVM
  Measurement deg;
  deg.effects = {Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  const auto rd = naimark_dilate(deg);
  CHECK(rd.projective.is_projective());
  for (int a = 0; a < 2; ++a) {
    const Matrix back = rd.isometry.adjoint() * rd.projective.effects[a] * rd.isometry;
    CHECK((back - deg.effects[a]).cwiseAbs().maxCoeff() < 1e-10);
  }

  // random rank-deficient 3-outcome qubit POVM: statistics match
  SplitMix rng(71);
  const Measurement povm = bt::random_povm(2, 3, rng);
  const auto rr = naimark_dilate(povm);
  CHECK(rr.projective.dim() == 6);
  for (int trial = 0; trial < 20; ++trial) {
    Vector psi(2);
    psi << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
    psi /= psi.norm();
    const Vector lifted = rr.isometry * psi;
    for (int a = 0; a < 3; ++a) {
      const double direct = (psi.adjoint() * povm.effects[a] * psi)(0).real();
      const double dilated = (lifted.adjoint() * rr.projective.effects[a] * lifted)(0).real();
      CHECK(std::abs(direct - dilated) < 1e-10);
    }
  }
}

TEST_CASE("purification") {
  // maximally mixed qubit pair: maximally entangled purification
  DensityOperator mixed{Matrix::Identity(2, 2) / 2.0, 1, 2};
  const Ket psi = purify(mixed);
  const Matrix back = partial_trace_b(psi.amplitudes * psi.amplitudes.adjoint(), 2, 2);
  CHECK((back - mixed.rho).cwiseAbs().maxCoeff() < 1e-10);
  // Schmidt coefficients 1/sqrt(2): |Phi+>-equivalent
  Eigen::SelfAdjointEigenSolver<Matrix> es(back, Eigen::EigenvaluesOnly);
  CHECK(std::abs(es.eigenvalues()(0) - 0.5) < 1e-12);

  // pure input stays rank one
  SplitMix rng(73);
  const Ket pure = bt::random_ket(2, 1, rng);
  const Matrix rho_pure = pure.amplitudes * pure.amplitudes.adjoint();
  const Ket lift = purify(DensityOperator{rho_pure, 2, 1});
  CHECK((partial_trace_b(lift.amplitudes * lift.amplitudes.adjoint(), 2, 2) - rho_pure)
            .cwiseAbs()
            .maxCoeff() < 1e-10);

  // random rank-2 state
  Matrix g(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Matrix rho2 = g * g.adjoint();
  rho2 /= rho2.trace().real();
  const Ket lift2 = purify(DensityOperator{rho2, 3, 1});
  CHECK((partial_trace_b(lift2.amplitudes * lift2.amplitudes.adjoint(), 3, 3) - rho2)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("mirror measurements") {
  QubitObservable y_axis;
  y_axis.bloch = {0, 1, 0};
  const auto mirrored = mirror_measurements({y_axis});
  CHECK((mirrored[0].bloch - Eigen::Vector3d{0, -1, 0}).norm() < 1e-15);
  const Matrix conj_effect = y_axis.to_measurement().effects[0].conjugate();
  CHECK((mirrored[0].to_measurement().effects[0] - conj_effect).cwiseAbs().maxCoeff() < 1e-12);

  QubitObservable xz;
  xz.bloch = Eigen::Vector3d{1, 0, 1}.normalized();
  CHECK((mirror_measurements({xz})[0].bloch - xz.bloch).norm() < 1e-15);

  // J42's printed Bob directions are phi -> -phi
  const double angles[4][2] = {
      {61.9767, 166.1570}, {0.0, 0.0}, {54.3423, 41.5892}, {52.2700, -71.170}};
  std::vector<QubitObservable> alice;
  for (auto& a : angles) alice.push_back(QubitObservable::from_angles_deg(a[0], a[1]));
  const auto bob = mirror_measurements(alice);
  for (int k = 0; k < 4; ++k) {
    const auto expect = QubitObservable::from_angles_deg(angles[k][0], -angles[k][1]);
    CHECK((bob[k].bloch - expect.bloch).norm() < 1e-12);
  }
}

TEST_CASE("mirror state family") {
  Ket phi_plus;
  phi_plus.dim_a = phi_plus.dim_b = 2;
  phi_plus.amplitudes = Vector(4);
  const double r = 1.0 / std::sqrt(2.0);
  phi_plus.amplitudes << r, 0, 0, r;

  const Ket at0 = mirror_state(0.0, phi_plus);
  CHECK((at0.amplitudes - phi_plus.amplitudes).cwiseAbs().maxCoeff() < 1e-15);

  const Ket at90 = mirror_state(std::numbers::pi / 2, phi_plus);
  Vector singlet(4);
  singlet << 0, r, -r, 0;
  CHECK((at90.amplitudes - Complex(0, 1) * singlet).cwiseAbs().maxCoeff() < 1e-12);

  // the J42 state is the alpha = 0 member with psi_sym = itself
  const auto j = strategy_j42();
  const auto res = check_mirror_state_form(std::get<Ket>(j.state));
  CHECK(res.is_mirror_form);
}

TEST_CASE("check_mirror_state_form") {
  Ket phi_minus;
  phi_minus.dim_a = phi_minus.dim_b = 2;
  phi_minus.amplitudes = Vector(4);
  const double r = 1.0 / std::sqrt(2.0);
  phi_minus.amplitudes << r, 0, 0, -r;
  CHECK(check_mirror_state_form(mirror_state(0.3, phi_minus)).is_mirror_form);

  Ket k01;
  k01.dim_a = k01.dim_b = 2;
  k01.amplitudes = Vector::Zero(4);
  k01.amplitudes(1) = 1.0;
  CHECK_FALSE(check_mirror_state_form(k01).is_mirror_form);

  // global phases only shift theta
  Ket rotated = mirror_state(0.3, phi_minus);
  rotated.amplitudes *= std::exp(Complex(0, 1.234));
  CHECK(check_mirror_state_form(rotated).is_mirror_form);
}

TEST_CASE("find_aligning_rotation") {
  std::vector<Eigen::Vector3d> a{{1, 0, 0}, {0, 0, 1}};
  auto same = find_aligning_rotation(a, a);
  REQUIRE(same.has_value());
  CHECK((*same - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);

  // coplanar (x-z plane) mirror pair: a rotation exists
  const Eigen::Matrix3d mirror = Eigen::Vector3d{1, -1, 1}.asDiagonal();
  std::vector<Eigen::Vector3d> coplanar{{1, 0, 0}, Eigen::Vector3d{1, 0, 1}.normalized()};
  std::vector<Eigen::Vector3d> coplanar_m;
  for (const auto& v : coplanar) coplanar_m.push_back(mirror * v);
  auto rot = find_aligning_rotation(coplanar, coplanar_m);
  REQUIRE(rot.has_value());
  for (size_t k = 0; k < coplanar.size(); ++k)
    CHECK(((*rot) * coplanar[k] - coplanar_m[k]).norm() < 1e-9);

  // non-coplanar triad: no rotation can implement the reflection
  std::vector<Eigen::Vector3d> triad{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Eigen::Vector3d> triad_m;
  for (const auto& v : triad) triad_m.push_back(mirror * v);
  CHECK_FALSE(find_aligning_rotation(triad, triad_m).has_value());

  CHECK_THROWS_AS(find_aligning_rotation({}, {}), std::invalid_argument);
}

TEST_CASE("random rotation pairs align, random non-coplanar mirror pairs do not") {
  SplitMix rng(79);
  int found = 0, blocked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector3d> a;
    for (int k = 0; k < 4; ++k)
      a.push_back(Eigen::Vector3d{rng.normal(), rng.normal(), rng.normal()}.normalized());
    // rotation-constructed pair
    Eigen::Vector3d axis{rng.normal(), rng.normal(), rng.normal()};
    axis.normalize();
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(rng.uniform(0, 3.1), axis).toRotationMatrix();
    std::vector<Eigen::Vector3d> b;
    for (const auto& v : a) b.push_back(rot * v);
    if (find_aligning_rotation(a, b)) ++found;
    // mirror pair: random 4 directions are almost surely non-coplanar
    const Eigen::Matrix3d mirror = Eigen::Vector3d{1, -1, 1}.asDiagonal();
    std::vector<Eigen::Vector3d> bm;
    for (const auto& v : a) bm.push_back(mirror * v);
    if (!find_aligning_rotation(a, bm)) ++blocked;
  }
  CHECK(found == 50);
  CHECK(blocked == 50);
}

TEST_CASE("mirror-compatible two-qubit states") {
  // T = diag(1,-1,1) with r = 0 is the |Phi+> correlation pattern
  const Eigen::Matrix3d t_phi = Eigen::Vector3d{1, -1, 1}.asDiagonal();
  const auto rho = mirror_compatible_two_qubit_state(Eigen::Vector3d::Zero(), t_phi);
  const Matrix sw = swap_operator(2);
  CHECK((rho.rho.conjugate() - sw * rho.rho * sw.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Ket phi_plus;
  phi_plus.dim_a = phi_plus.dim_b = 2;
  phi_plus.amplitudes = Vector(4);
  const double r = 1.0 / std::sqrt(2.0);
  phi_plus.amplitudes << r, 0, 0, r;
  CHECK((rho.rho - phi_plus.amplitudes * phi_plus.amplitudes.adjoint()).cwiseAbs().maxCoeff() <
        1e-12);

  const auto mixed = mirror_compatible_two_qubit_state(Eigen::Vector3d::Zero(),
                                                       Eigen::Matrix3d::Zero());
  CHECK((mixed.rho - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::Matrix3d bad = Eigen::Matrix3d::Zero();
  bad(0, 1) = 0.3;  // T_yx must be -T_xy
  bad(1, 0) = 0.3;
  CHECK_THROWS_AS(mirror_compatible_two_qubit_state(Eigen::Vector3d::Zero(), bad),
                  std::domain_error);
  // parameters violating positivity
  CHECK_THROWS_AS(
      mirror_compatible_two_qubit_state(Eigen::Vector3d{0.9, 0, 0.9}, 2.0 * t_phi),
      std::domain_error);
}

TEST_CASE("random mirror-compatible states give symmetric correlations") {
  SplitMix rng(83);
  int tested = 0;
  while (tested < 10) {
    Eigen::Vector3d r{rng.normal(), rng.normal(), rng.normal()};
    Eigen::Matrix3d t;
    t << rng.normal(), rng.normal(), rng.normal(),
         0, rng.normal(), rng.normal(),
         0, 0, rng.normal();
    t(1, 0) = -t(0, 1);
    t(2, 0) = t(0, 2);
    t(2, 1) = -t(1, 2);
    r *= 0.15;
    t *= 0.15;
    DensityOperator rho{Matrix::Zero(4, 4), 2, 2};
    try {
      rho = mirror_compatible_two_qubit_state(r, t);
    } catch (const std::domain_error&) {
      continue;
    }
    ++tested;
    QuantumStrategy s;
    s.state = rho;
    std::vector<QubitObservable> dirs;
    for (int k = 0; k < 3; ++k) {
      QubitObservable o;
      o.bloch = Eigen::Vector3d{rng.normal(), rng.normal(), rng.normal()}.normalized();
      dirs.push_back(o);
    }
    const auto mirrored = mirror_measurements(dirs);
    for (int k = 0; k < 3; ++k) {
      s.alice.push_back(dirs[k].to_measurement());
      s.bob.push_back(mirrored[k].to_measurement());
    }
    CHECK(check_sufficient_conditions(s, SufficientKind::conjugation));
    CHECK(is_symmetric(born_correlation(s), 1e-10));
  }
}

TEST_CASE("mirror strategies produce symmetric correlations") {
  SplitMix rng(89);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 5);
    const auto s = mirror_strategy(rng.uniform(0, 3.14), m, rng);
    CHECK(is_symmetric(born_correlation(s), 1e-10));
  }
}

TEST_CASE("symmetrizations preserve random symmetric-correlation strategies") {
  SplitMix rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = mirror_strategy(rng.uniform(0, 3.14), 2, rng);
    const auto p = born_correlation(s);
    const auto tm = symmetrize_mixed(s);
    CHECK(corr_distance(born_correlation(tm), p) < 1e-10);
    CHECK(check_sufficient_conditions(tm, SufficientKind::identity));
    const auto tp = symmetrize_pure(s);
    CHECK(corr_distance(born_correlation(tp), p) < 1e-10);
    CHECK(check_sufficient_conditions(tp, SufficientKind::identity));
  }
}
