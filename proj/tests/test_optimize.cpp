#include <doctest.h>

#include <bellforge/catalog.hpp>
#include <bellforge/local.hpp>
#include <bellforge/optimize.hpp>
#include <bellforge/symmetry.hpp>
#include <cmath>

#include "test_helpers.hpp"

using namespace bellforge;
namespace bt = bellforge::testing;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("dichotomic update reproduces fixed points and the tie rule") {
  const auto mz = dichotomic_observable_update(pauli_z());
  CHECK((mz.effects[0] - (Matrix::Identity(2, 2) + pauli_z()) / 2.0).cwiseAbs().maxCoeff() <
        1e-14);
  const auto tie = dichotomic_observable_update(Matrix::Zero(2, 2));
  CHECK(std::abs(tie.effects[0](0, 0).real() - 1.0) < 1e-15);
  CHECK(std::abs(tie.effects[1](1, 1).real() - 1.0) < 1e-15);
}

TEST_CASE("dichotomic update value is the brute-force upper envelope") {
  SplitMix rng(109);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix f(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f(i, j) = Complex(rng.normal(), rng.normal());
    f = (0.5 * (f + f.adjoint())).eval();
    const auto m = dichotomic_observable_update(f);
    const Matrix obs = m.effects[0] - m.effects[1];
    const double value = (f * obs).trace().real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(f, Eigen::EigenvaluesOnly);
    CHECK(std::abs(value - es.eigenvalues().cwiseAbs().sum()) < 1e-10);
    for (int sample = 0; sample < 10000; ++sample) {
      const auto pvm = bt::random_pvm(3, 2, rng);
      const double v = (f * (pvm.effects[0] - pvm.effects[1])).trace().real();
      CHECK(v <= value + 1e-9);
    }
  }
}

TEST_CASE("seesaw finds the Tsirelson bound") {
  SeesawConfig cfg;
  cfg.restarts = 20;
  cfg.seed = 11;
  const auto rep = seesaw(chsh().functional, cfg);
  CHECK(rep.best_value >= 2.0 * kSqrt2 - 1e-7);
  CHECK(rep.best_value <= 2.0 * kSqrt2 + 1e-9);
  CHECK(rep.converged);
  CHECK(rep.per_restart.size() == 20);
  // reported value goes through the public evaluation path
  CHECK(std::abs(evaluate(chsh().functional, born_correlation(rep.best_strategy)) -
                 rep.best_value) < 1e-9);
}

TEST_CASE("seesaw on i22dd(2) matches the affine CHSH image") {
  SeesawConfig cfg;
  cfg.restarts = 12;
  cfg.seed = 5;
  const auto rep = seesaw(i22dd(2).functional, cfg);
  CHECK(std::abs(rep.best_value - (2.0 * kSqrt2 - 2.0) / 4.0) < 1e-7);
}

TEST_CASE("seesaw reaches the I_S(2) quantum value") {
  SeesawConfig cfg;
  cfg.restarts = 24;
  cfg.seed = 3;
  const auto rep = seesaw(i_s(2.0).functional, cfg);
  CHECK(std::abs(rep.best_value - (13.0 + 4.0 * std::sqrt(13.0)) / 3.0) < 1e-5);
}

TEST_CASE("seesaw reaches the J42 quantum bound") {
  SeesawConfig cfg;
  cfg.restarts = 20;
  cfg.seed = 17;
  const auto rep = seesaw(j42().functional, cfg);
  CHECK(rep.best_value >= 0.6712);
  CHECK(rep.best_value <= 0.6722 + 1e-3);
}

TEST_CASE("shared-povm mode terminates and stays symmetric") {
  SeesawConfig cfg;
  cfg.mode = SeesawMode::shared_povm;
  cfg.restarts = 12;
  cfg.max_iters = 60;
  cfg.seed = 23;
  const auto rep = seesaw(chsh().functional, cfg);
  CHECK(rep.best_value >= 2.0 * kSqrt2 - 1e-4);
  CHECK(check_sufficient_conditions(rep.best_strategy, SufficientKind::identity, 1e-8));
  CHECK(is_symmetric(born_correlation(rep.best_strategy), 1e-8));
}

TEST_CASE("symmetric-correlation mode recovers the CHSH maximum through SDPs") {
  SeesawConfig cfg;
  cfg.mode = SeesawMode::symmetric_correlation;
  cfg.restarts = 2;
  cfg.max_iters = 40;
  cfg.seed = 7;
  const auto rep = seesaw(chsh().functional, cfg);
  CHECK(rep.best_value >= 2.0 * kSqrt2 - 1e-5);
  CHECK(is_symmetric(born_correlation(rep.best_strategy), 1e-6));
}

TEST_CASE("unrestricted sweeps are monotone") {
  SplitMix rng(113);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = bt::random_functional(Scenario::square(2, 2), rng);
    SeesawConfig cfg;
    cfg.restarts = 3;
    cfg.seed = 1000 + trial;
    const auto rep = seesaw(f, cfg);
    REQUIRE(!rep.best_value_trace.empty());
    for (size_t i = 1; i < rep.best_value_trace.size(); ++i)
      CHECK(rep.best_value_trace[i] >= rep.best_value_trace[i - 1] - 1e-10);
  }
}

TEST_CASE("flat segment through the see-saw J42 maximizer") {
  SeesawConfig cfg;
  cfg.restarts = 20;
  cfg.seed = 29;
  const auto rep = seesaw(j42().functional, cfg);
  REQUIRE(rep.best_value >= 0.6712);
  const auto p_star = born_correlation(rep.best_strategy);
  const auto f = j42().functional;
  const double ref = evaluate(f, p_star);
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto mix = flat_segment(f, p_star, c);
    CHECK(std::abs(evaluate(f, mix) - ref) < 1e-12);
  }
  const auto half = flat_segment(f, p_star, 0.5);
  CHECK(is_symmetric(half, 1e-12));
}

TEST_CASE("su_unitary is unitary and uses dim^2-1 parameters") {
  SplitMix rng(127);
  for (int d : {2, 3, 4}) {
    Eigen::VectorXd params(d * d - 1);
    for (int k = 0; k < params.size(); ++k) params(k) = rng.uniform(-3.0, 3.0);
    const Matrix u = su_unitary(d, params);
    CHECK((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(u.determinant() - Complex(1.0, 0.0)) < 1e-10);
  }
  CHECK_THROWS_AS(su_unitary(2, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("sqs lower bound reaches the CHSH maximum with a qubit SQS") {
  ParamOptConfig cfg;
  cfg.restarts = 12;
  cfg.seed = 31;
  cfg.subspace = StateSubspace::symmetric;
  const auto rep = sqs_lower_bound(chsh().functional, cfg);
  CHECK(std::abs(rep.best_value - 2.0 * kSqrt2) < 1e-5);
  CHECK(check_sufficient_conditions(rep.best_strategy, SufficientKind::identity, 1e-9));
  CHECK(std::abs(evaluate(chsh().functional, born_correlation(rep.best_strategy)) -
                 rep.best_value) < 1e-9);
}

TEST_CASE("qubit SQS cannot violate I_S(2)") {
  ParamOptConfig cfg;
  cfg.restarts = 40;
  cfg.seed = 37;
  const auto rep = sqs_lower_bound(i_s(2.0).functional, cfg);
  CHECK(rep.best_value <= 9.0 + 1e-6);
  CHECK(rep.best_value >= 9.0 - 1e-4);  // the local bound is reachable
  for (double v : rep.per_restart) CHECK(v <= 9.0 + 1e-6);
}

TEST_CASE("sqs lower bound warns on asymmetric functionals") {
  ParamOptConfig cfg;
  cfg.restarts = 2;
  cfg.max_evals = 2000;
  cfg.seed = 41;
  const auto rep = sqs_lower_bound(chsh_asymmetric().functional, cfg);
  CHECK(rep.mode.find("warning") != std::string::npos);
}

TEST_CASE("explicit rank partitions are validated") {
  ParamOptConfig cfg;
  cfg.rank_partitions = {{1, 1}, {2, 1}};  // second setting sums to 3, not 2
  CHECK_THROWS_AS(sqs_lower_bound(chsh().functional, cfg), std::invalid_argument);
}

TEST_CASE("sweep table over a two-point grid") {
  SeesawConfig scfg;
  scfg.restarts = 8;
  scfg.seed = 43;
  ParamOptConfig pcfg;
  pcfg.restarts = 16;
  pcfg.max_evals = 20000;
  pcfg.seed = 47;
  const auto rows =
      sweep([](double a) { return i_s(a).functional; }, {1.5, 2.0, 3.0}, scfg, pcfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.local == 2.0 * r.alpha + 5.0);
    CHECK(r.quantum >= r.local - 1e-9);
    CHECK(r.sqs_qubit <= r.quantum + 1e-6);
  }
  CHECK(std::abs(rows[0].quantum - 25.0 / 3.0) < 1e-4);
  CHECK(std::abs(rows[1].quantum - 9.1407) < 1e-3);
  CHECK(rows[1].sqs_qubit <= 9.0 + 1e-6);
  // at alpha = 3 the best qubit SQS is the local bound itself
  CHECK(std::abs(rows[2].sqs_qubit - 11.0) < 1e-4);
  CHECK(rows[2].sqs_qubit <= 11.0 + 1e-6);
}
