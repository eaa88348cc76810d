#include <doctest.h>

#include <bellforge/catalog.hpp>
#include <bellforge/local.hpp>
#include <bellforge/quantum.hpp>
#include <cmath>

using namespace bellforge;

namespace {
const double kSqrt2 = std::sqrt(2.0);

// all single-party relabelings of a (2,2,2) functional: setting swaps and
// per-setting outcome flips on each side
std::vector<BellFunctional> relabelings_222(const BellFunctional& f) {
  std::vector<BellFunctional> out;
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb)
      for (int mask = 0; mask < 16; ++mask) {
        BellFunctional g(f.scenario());
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b) {
                const int xs = pa ? 1 - x : x;
                const int ys = pb ? 1 - y : y;
                const int as = (mask >> x) & 1 ? 1 - a : a;
                const int bs = (mask >> (2 + y)) & 1 ? 1 - b : b;
                g.at(a, b, x, y) = f(as, bs, xs, ys);
              }
        out.push_back(std::move(g));
      }
  return out;
}
}  // namespace

TEST_CASE("chsh entry") {
  const auto e = chsh();
  CHECK(*e.functional.known_local_bound == 2.0);
  CHECK(local_bound(e.functional).value == 2.0);
  CHECK(e.symmetric);
}

TEST_CASE("asymmetric chsh printed form is not symmetric") {
  // only the printed form: an outcome flip on A_1 relabels it back to the
  // symmetric CHSH, so no every-relabeling claim is made here
  const auto e = chsh_asymmetric();
  CHECK_FALSE(e.symmetric);
  CHECK(local_bound(e.functional).value == 2.0);
}

TEST_CASE("i_r0r1 admits no symmetric relabeling") {
  for (auto [r0, r1] : {std::pair{0.1, 0.05}, std::pair{-0.12, 0.03}}) {
    const auto e = i_r0r1(r0, r1);
    CHECK_FALSE(e.symmetric);
    for (const auto& g : relabelings_222(e.functional)) CHECK_FALSE(is_symmetric_functional(g));
  }
}

TEST_CASE("i22dd entries") {
  CHECK(i22dd(3).symmetric);
  for (int d : {2, 3, 4}) {
    const auto e = i22dd(d);
    CHECK(*e.functional.known_local_bound == 0.0);
    CHECK(local_bound(e.functional).value == 0.0);
  }
  CHECK_THROWS_AS(i22dd(1), std::domain_error);
}

TEST_CASE("i22dd(2) has the CHSH quantum maximum through the affine relation") {
  const auto meas = cglmp_optimal_measurements(2);
  const auto r = best_state_for_measurements(i22dd(2).functional, meas, meas);
  // I_2 = 2 sqrt(2) maps back to (2 sqrt(2) - 2)/4
  CHECK(std::abs(r.value - (2.0 * kSqrt2 - 2.0) / 4.0) < 1e-7);
}

TEST_CASE("cglmp affine relation") {
  CHECK(cglmp_value_from_i22dd(2, 0.0) == 2.0);
  {
    const auto meas = cglmp_optimal_measurements(3);
    const auto r = best_state_for_measurements(i22dd(3).functional, meas, meas);
    CHECK(std::abs(cglmp_value_from_i22dd(3, r.value) - 2.91485425) < 1e-6);
  }
  {
    const auto meas = cglmp_optimal_measurements(4);
    const auto r = best_state_for_measurements(i22dd(4).functional, meas, meas);
    CHECK(std::abs(cglmp_value_from_i22dd(4, r.value) - 2.97269840) < 1e-6);
  }
  // affine and increasing in the second argument
  for (int d : {2, 3, 7}) {
    const double v1 = cglmp_value_from_i22dd(d, 0.25);
    const double v2 = cglmp_value_from_i22dd(d, 0.35);
    CHECK(v2 > v1);
    const double mid = cglmp_value_from_i22dd(d, 0.30);
    CHECK(std::abs(mid - 0.5 * (v1 + v2)) < 1e-12);
  }
}

TEST_CASE("i_s entries") {
  CHECK(*i_s(2.0).functional.known_local_bound == 9.0);
  CHECK(local_bound(i_s(2.0).functional).value == 9.0);
  CHECK(i_s(1.5).symmetric);
  const DeterministicStrategy witness{{0, 1, 0}, {0, 1, 0}};
  const auto f = i_s(2.0).functional;
  CHECK(evaluate(f, deterministic_correlation(witness, f.scenario())) == 9.0);
}

TEST_CASE("i3322c entry") {
  const auto e = i3322c();
  CHECK(local_bound(e.functional).value == 4.0);
  CHECK(e.symmetric);
  for (double alpha : {0.0, 1.0, std::numbers::pi / 2}) {
    const double v = evaluate(e.functional, born_correlation(strategy_i3322c(alpha)));
    CHECK(std::abs(v - 5.0) < 1e-10);
  }
}

TEST_CASE("j42 entry") {
  const auto e = j42();
  CHECK(e.symmetric);
  CHECK(local_bound(e.functional).value == 0.0);
  const double v = evaluate(e.functional, born_correlation(strategy_j42()));
  CHECK(std::abs(v - 0.6012) < 1e-3);
}

TEST_CASE("i9 entry") {
  const auto e = i9();
  CHECK(e.symmetric);
  CHECK(std::abs(evaluate(e.functional, born_correlation(strategy_i9_max())) -
                 (12.0 * kSqrt2 + 3.0)) < 1e-9);
  CHECK(std::abs(evaluate(e.functional, born_correlation(strategy_i9_sym())) -
                 (6.0 * std::sqrt(3.0) + 9.0)) < 1e-9);
  CHECK(local_bound(e.functional).value == *e.functional.known_local_bound);
}

TEST_CASE("i_r0r1 local bound g") {
  CHECK(std::abs(local_bound_g(0.0, 0.0) - 1.0 / kSqrt2) < 1e-15);
  // slice r0 >= r1 >= 0: g = 1/sqrt2 + r0 + (sqrt2 - 1) r1
  for (double r0 : {0.05, 0.15, 0.25})
    for (double r1 : {0.0, 0.04}) {
      if (r1 > r0) continue;
      CHECK(std::abs(local_bound_g(r0, r1) - (1.0 / kSqrt2 + r0 + (kSqrt2 - 1.0) * r1)) < 1e-15);
    }
  // interior grid: enumerated bound agrees with g and the Tsirelson value 1 wins
  const auto pt = tsirelson_correlation();
  for (double r0 = -0.28; r0 <= 0.28; r0 += 0.07)
    for (double r1 = -0.28; r1 <= 0.28; r1 += 0.07) {
      if (!in_octagon(r0, r1)) continue;
      const auto e = i_r0r1(r0, r1);
      CHECK(std::abs(local_bound(e.functional).value - local_bound_g(r0, r1)) < 1e-9);
      CHECK(std::abs(evaluate(e.functional, pt) - 1.0) < 1e-12);
      CHECK(evaluate(e.functional, pt) > local_bound_g(r0, r1));
    }
}

TEST_CASE("in_octagon basics") {
  CHECK(in_octagon(0.0, 0.0));
  CHECK(in_octagon(0.2, 0.05));
  CHECK_FALSE(in_octagon(0.3, 0.0));   // beyond the vertex at ~0.2929
  CHECK_FALSE(in_octagon(0.25, 0.25));
  const double zeta = 1.0 / kSqrt2 - 0.5;
  CHECK_FALSE(in_octagon(zeta, zeta));  // vertices are not interior
}

TEST_CASE("catalog flags agree with the symmetry predicate") {
  for (const auto& name : {"chsh", "chsh-asym", "i22dd-3", "is-2", "i3322c", "j42", "i9"}) {
    const auto e = catalog_lookup(name);
    CHECK(e.symmetric == is_symmetric_functional(e.functional));
    if (e.functional.known_local_bound) {
      CHECK(local_bound(e.functional).value == doctest::Approx(*e.functional.known_local_bound)
                                                   .epsilon(1e-12));
    }
  }
  const auto ir = catalog_lookup("ir-0.1-0.05");
  CHECK_FALSE(ir.symmetric);
  CHECK(std::abs(*ir.functional.known_local_bound - local_bound_g(0.1, 0.05)) < 1e-15);
  CHECK_THROWS_AS(catalog_lookup("nope"), std::invalid_argument);
}
