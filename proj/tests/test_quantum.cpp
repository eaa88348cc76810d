#include <doctest.h>

#include <bellforge/catalog.hpp>
#include <bellforge/quantum.hpp>
#include <cmath>

#include "test_helpers.hpp"

using namespace bellforge;
namespace bt = bellforge::testing;

namespace {
const double kSqrt2 = std::sqrt(2.0);

Ket printed_psi3() {
  const double al = (5.0 - std::sqrt(33.0)) / 2.0;
  const double ga = 2.0 / 3.0 * std::sqrt(2.0 / (55.0 - 9.0 * std::sqrt(33.0)));
  Ket k;
  k.dim_a = k.dim_b = 3;
  k.amplitudes = Vector::Zero(9);
  auto idx = [](int i, int j) { return i * 3 + j; };
  k.amplitudes(idx(0, 0)) = al;
  k.amplitudes(idx(1, 2)) = -al;
  k.amplitudes(idx(2, 1)) = -al;
  k.amplitudes(idx(0, 1)) = 1;
  k.amplitudes(idx(1, 0)) = 1;
  k.amplitudes(idx(2, 2)) = 1;
  k.amplitudes(idx(0, 2)) = -(al + 1) / 2;
  k.amplitudes(idx(2, 0)) = -(al + 1) / 2;
  k.amplitudes(idx(1, 1)) = (al + 1) / 2;
  k.amplitudes *= ga;
  return k;
}
}  // namespace

TEST_CASE("born correlation of the maximal CHSH strategy is the Tsirelson point") {
  const auto p = born_correlation(strategy_chsh_max());
  const auto pt = tsirelson_correlation();
  for (size_t i = 0; i < p.raw().size(); ++i) CHECK(std::abs(p.raw()[i] - pt.raw()[i]) < 1e-12);
}

TEST_CASE("born correlation of a computational product state is deterministic") {
  QuantumStrategy s;
  Ket k;
  k.dim_a = k.dim_b = 2;
  k.amplitudes = Vector::Zero(4);
  k.amplitudes(0) = 1.0;  // |00>
  s.state = k;
  const Measurement comp = Measurement::from_observable(pauli_z());
  s.alice = {comp, comp};
  s.bob = {comp, comp};
  const auto p = born_correlation(s);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(std::abs(p(0, 0, x, y) - 1.0) < 1e-14);
}

TEST_CASE("the symmetric CHSH strategy is symmetric and optimal") {
  const auto s = strategy_chsh_sym();
  const auto p = born_correlation(s);
  CHECK(is_symmetric(p, 1e-12));
  CHECK(std::abs(evaluate(chsh().functional, p) - 2.0 * kSqrt2) < 1e-12);
}

TEST_CASE("bell operator eigenvalues") {
  const auto s = strategy_chsh_max();
  const Matrix b = bell_operator(chsh().functional, s.alice, s.bob);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
  CHECK(std::abs(es.eigenvalues().maxCoeff() - 2.0 * kSqrt2) < 1e-12);

  BellFunctional zero(Scenario::square(2, 2));
  CHECK(bell_operator(zero, s.alice, s.bob).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bell operator expectation equals the evaluated Born value") {
  SplitMix rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = bt::random_functional(Scenario::square(2, 2), rng);
    f.constant_offset = rng.normal();
    const auto s = bt::random_strategy(2, 2, 2, rng);
    const Matrix b = bell_operator(f, s.alice, s.bob);
    const auto& k = std::get<Ket>(s.state);
    const double direct = (k.amplitudes.adjoint() * b * k.amplitudes)(0).real() + f.constant_offset;
    CHECK(std::abs(direct - evaluate(f, born_correlation(s))) < 1e-11);
  }
}

TEST_CASE("best state for the CGLMP measurements") {
  {
    const auto s = strategy_chsh_max();
    const auto r = best_state_for_measurements(chsh().functional, s.alice, s.bob);
    CHECK(std::abs(r.value - 2.0 * kSqrt2) < 1e-10);
  }
  {
    const auto meas = cglmp_optimal_measurements(3);
    const auto r = best_state_for_measurements(i22dd(3).functional, meas, meas);
    CHECK(std::abs(cglmp_value_from_i22dd(3, r.value) - 2.91485425) < 1e-6);
    // the printed optimal state spans the top eigenvector
    const Ket psi3 = printed_psi3();
    const Complex overlap = (psi3.amplitudes.adjoint() * r.state.amplitudes)(0);
    CHECK(std::abs(overlap) > 1.0 - 1e-6);
  }
  {
    const auto meas = cglmp_optimal_measurements(5);
    const auto r = best_state_for_measurements(i22dd(5).functional, meas, meas);
    CHECK(std::abs(cglmp_value_from_i22dd(5, r.value) - 3.01571048) < 1e-6);
  }
}

TEST_CASE("degenerate top eigenspaces are flagged") {
  // a zero functional makes every state optimal
  BellFunctional zero(Scenario::square(2, 2));
  const auto s = strategy_chsh_max();
  const auto r = best_state_for_measurements(zero, s.alice, s.bob);
  CHECK(r.degenerate_top);
  const auto sharp = best_state_for_measurements(chsh().functional, s.alice, s.bob);
  CHECK_FALSE(sharp.degenerate_top);
}

TEST_CASE("cglmp unitary is unitary up to d = 19") {
  for (int d = 2; d <= 19; ++d) {
    const Matrix u = cglmp_unitary(d);
    CHECK((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(cglmp_unitary(1), std::domain_error);
}

TEST_CASE("cglmp d=2 SQS reproduces the symmetric CHSH value") {
  const auto meas = cglmp_optimal_measurements(2);
  const auto r = best_state_for_measurements(i22dd(2).functional, meas, meas);
  const double sym_value = evaluate(chsh().functional, born_correlation(strategy_chsh_sym()));
  CHECK(std::abs(cglmp_value_from_i22dd(2, r.value) - sym_value) < 1e-7);
}

TEST_CASE("cglmp d=19 value") {
  const auto meas = cglmp_optimal_measurements(19);
  const auto r = best_state_for_measurements(i22dd(19).functional, meas, meas);
  CHECK(std::abs(cglmp_value_from_i22dd(19, r.value) - 3.24158164) < 1e-5);
}

TEST_CASE("printed strategies hit their quoted values") {
  CHECK(std::abs(evaluate(chsh().functional, born_correlation(strategy_chsh_max())) -
                 2.0 * kSqrt2) < 1e-12);
  CHECK(std::abs(evaluate(i_s(2.0).functional, born_correlation(strategy_is(2.0))) -
                 (13.0 + 4.0 * std::sqrt(13.0)) / 3.0) < 1e-9);
  CHECK(std::abs(evaluate(i_s(1.5).functional, born_correlation(strategy_is(1.5))) - 25.0 / 3.0) <
        1e-12);
  CHECK_THROWS_AS(strategy_is(2.5), std::domain_error);

  const auto pj = born_correlation(strategy_j42());
  CHECK(std::abs(evaluate(j42().functional, pj) - 0.6012) < 1e-3);
  CHECK(is_symmetric(pj, 1e-3));

  CHECK(std::abs(evaluate(i9().functional, born_correlation(strategy_i9_max())) -
                 (12.0 * kSqrt2 + 3.0)) < 1e-9);
  CHECK(std::abs(evaluate(i9().functional, born_correlation(strategy_i9_sym())) -
                 (6.0 * std::sqrt(3.0) + 9.0)) < 1e-9);
}

TEST_CASE("negativity") {
  {
    const auto s = strategy_chsh_max();
    const DensityOperator rho{density_of(s.state), 2, 2};
    CHECK(std::abs(negativity(rho) - 0.5) < 1e-9);
  }
  {
    Ket k;
    k.dim_a = k.dim_b = 2;
    k.amplitudes = Vector::Zero(4);
    k.amplitudes(1) = 1.0;  // |01>, product
    CHECK(std::abs(negativity(DensityOperator{density_of(State{k}), 2, 2})) < 1e-12);
  }
  {
    const auto meas = cglmp_optimal_measurements(3);
    const auto r = best_state_for_measurements(i22dd(3).functional, meas, meas);
    const DensityOperator rho{r.state.amplitudes * r.state.amplitudes.adjoint(), 3, 3};
    CHECK(std::abs(negativity(rho) - 0.9836) < 5e-4);
  }
  {
    const auto meas = cglmp_optimal_measurements(5);
    const auto r = best_state_for_measurements(i22dd(5).functional, meas, meas);
    const DensityOperator rho{r.state.amplitudes * r.state.amplitudes.adjoint(), 5, 5};
    CHECK(std::abs(negativity(rho) - 1.9203) < 5e-4);
  }
}

TEST_CASE("negativity is invariant under local unitaries") {
  SplitMix rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const Ket k = bt::random_ket(3, 3, rng);
    const Matrix rho = k.amplitudes * k.amplitudes.adjoint();
    const double ref = negativity(DensityOperator{rho, 3, 3});
    const Matrix u = kron(bt::random_unitary(3, rng), bt::random_unitary(3, rng));
    const double rotated = negativity(DensityOperator{u * rho * u.adjoint(), 3, 3});
    CHECK(std::abs(rotated - ref) < 1e-9);
  }
}

TEST_CASE("flat segment endpoints") {
  const auto p = born_correlation(strategy_j42());
  const auto fj = j42().functional;
  const auto c1 = flat_segment(fj, p, 1.0);
  for (size_t i = 0; i < p.raw().size(); ++i) CHECK(c1.raw()[i] == p.raw()[i]);
  const auto c0 = flat_segment(fj, p, 0.0);
  const auto sw = swap_parties(p);
  for (size_t i = 0; i < p.raw().size(); ++i) CHECK(c0.raw()[i] == sw.raw()[i]);
  CHECK(std::abs(evaluate(fj, c0) - evaluate(fj, p)) < 1e-12);
  CHECK_THROWS_AS(flat_segment(chsh_asymmetric().functional, tsirelson_correlation(), 0.5),
                  std::domain_error);
}

TEST_CASE("born correlations are normalized and no-signaling") {
  SplitMix rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = bt::random_strategy(trial % 2 ? 2 : 3, 2, trial % 3 ? 2 : 3, rng);
    const auto p = born_correlation(s);
    CHECK(p.is_normalized(1e-9));
    CHECK(is_no_signaling(p, 1e-9));
  }
}

TEST_CASE("shared measurements on swap-invariant states give symmetric correlations") {
  SplitMix rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    QuantumStrategy s;
    s.state = bt::random_swap_invariant_ket(2, rng, trial % 4 == 0);
    for (int x = 0; x < 3; ++x) s.alice.push_back(bt::random_povm(2, 2, rng));
    s.bob = s.alice;
    CHECK(is_symmetric(born_correlation(s), 1e-10));
  }
}

TEST_CASE("symmetric bell operators commute with the swap") {
  SplitMix rng(61);
  const Matrix sw = swap_operator(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = bt::random_functional(Scenario::square(2, 2), rng);
    const auto fsw = swap_parties(f);
    for (size_t i = 0; i < f.raw().size(); ++i) f.raw()[i] = 0.5 * (f.raw()[i] + fsw.raw()[i]);
    std::vector<Measurement> shared{bt::random_povm(2, 2, rng), bt::random_povm(2, 2, rng)};
    const Matrix b = bell_operator(f, shared, shared);
    CHECK((b * sw - sw * b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("state and measurement validation") {
  Ket bad;
  bad.dim_a = bad.dim_b = 2;
  bad.amplitudes = Vector::Ones(4);  // unnormalized
  CHECK_THROWS_AS(validate_state(State{bad}), std::domain_error);

  Measurement m;
  m.effects = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(m.validate(), std::domain_error);

  QuantumStrategy s = strategy_chsh_max();
  s.bob[0] = Measurement::from_observable(Matrix::Identity(3, 3));  // wrong local dimension
  CHECK_THROWS_AS(born_correlation(s), ShapeError);
}
