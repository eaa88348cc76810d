#include "bellforge/local.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>

namespace bellforge {

namespace {

constexpr std::uint64_t kEnumerationGuard = 10'000'000;

std::uint64_t assignment_count(int n, int m) {
  std::uint64_t c = 1;
  for (int i = 0; i < m; ++i) {
    c *= static_cast<std::uint64_t>(n);
    if (c > kEnumerationGuard) return c;
  }
  return c;
}

std::vector<int> decode_assignment(std::uint64_t idx, int n, int m) {
  std::vector<int> a(m);
  for (int x = 0; x < m; ++x) {
    a[x] = static_cast<int>(idx % n);
    idx /= n;
  }
  return a;
}

// Best value over Bob's replies for a fixed Alice table (and the greedy
// witness when requested).
double best_response(const BellFunctional& f, const std::vector<int>& alice,
                     std::vector<int>* bob_out) {
  const Scenario& s = f.scenario();
  double total = 0.0;
  for (int y = 0; y < s.settings_b; ++y) {
    double best = -std::numeric_limits<double>::infinity();
    int best_b = 0;
    for (int b = 0; b < s.outcomes; ++b) {
      double v = 0.0;
      for (int x = 0; x < s.settings_a; ++x) v += f(alice[x], b, x, y);
      if (v > best) {
        best = v;
        best_b = b;
      }
    }
    total += best;
    if (bob_out) (*bob_out)[y] = best_b;
  }
  return total;
}

double symmetric_value(const BellFunctional& f, const std::vector<int>& alice) {
  const Scenario& s = f.scenario();
  double total = 0.0;
  for (int x = 0; x < s.settings_a; ++x)
    for (int y = 0; y < s.settings_b; ++y) total += f(alice[x], alice[y], x, y);
  return total;
}

struct BlockBest {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t index = 0;
};

// Enumerate Alice assignments in parallel blocks; merge by max with the
// smallest assignment index winning ties.
template <typename ValueFn>
BlockBest enumerate_best(std::uint64_t count, ValueFn value_of) {
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("BELLFORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) hw = static_cast<unsigned>(v);
  }
  const unsigned workers =
      std::max(1u, std::min<unsigned>(hw ? hw : 1, count > 4096 ? 32 : 1));
  std::vector<BlockBest> partial(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(count, lo + chunk);
      BlockBest local;
      for (std::uint64_t i = lo; i < hi; ++i) {
        const double v = value_of(i);
        if (v > local.value) {
          local.value = v;
          local.index = i;
        }
      }
      partial[w] = local;
    });
  }
  for (auto& t : pool) t.join();
  BlockBest best;
  for (const auto& p : partial)
    if (p.value > best.value || (p.value == best.value && p.index < best.index)) best = p;
  return best;
}

}  // namespace

LocalBoundResult local_bound(const BellFunctional& f) {
  const Scenario& s = f.scenario();
  const std::uint64_t count = assignment_count(s.outcomes, s.settings_a);
  if (count > kEnumerationGuard)
    throw std::domain_error("local_bound: n^m exceeds enumeration guard of 1e7");

  const BlockBest best = enumerate_best(count, [&](std::uint64_t i) {
    return best_response(f, decode_assignment(i, s.outcomes, s.settings_a), nullptr);
  });

  LocalBoundResult r;
  r.witness.alice_outputs = decode_assignment(best.index, s.outcomes, s.settings_a);
  r.witness.bob_outputs.assign(s.settings_b, 0);
  r.value = best_response(f, r.witness.alice_outputs, &r.witness.bob_outputs) + f.constant_offset;
  return r;
}

LocalBoundResult symmetric_local_bound(const BellFunctional& f) {
  const Scenario& s = f.scenario();
  if (s.settings_a != s.settings_b)
    throw ShapeError("symmetric_local_bound requires equal setting counts");
  const std::uint64_t count = assignment_count(s.outcomes, s.settings_a);
  if (count > kEnumerationGuard)
    throw std::domain_error("symmetric_local_bound: n^m exceeds enumeration guard of 1e7");

  const BlockBest best = enumerate_best(count, [&](std::uint64_t i) {
    return symmetric_value(f, decode_assignment(i, s.outcomes, s.settings_a));
  });

  LocalBoundResult r;
  r.witness.alice_outputs = decode_assignment(best.index, s.outcomes, s.settings_a);
  r.witness.bob_outputs = r.witness.alice_outputs;
  r.value = symmetric_value(f, r.witness.alice_outputs) + f.constant_offset;
  return r;
}

Correlation deterministic_correlation(const DeterministicStrategy& s, const Scenario& scenario) {
  if (static_cast<int>(s.alice_outputs.size()) != scenario.settings_a ||
      static_cast<int>(s.bob_outputs.size()) != scenario.settings_b)
    throw ShapeError("deterministic strategy: output table sizes do not match scenario");
  Correlation p(scenario);
  for (int x = 0; x < scenario.settings_a; ++x)
    for (int y = 0; y < scenario.settings_b; ++y) {
      const int a = s.alice_outputs[x];
      const int b = s.bob_outputs[y];
      if (a < 0 || a >= scenario.outcomes || b < 0 || b >= scenario.outcomes)
        throw ShapeError("deterministic strategy: output out of range");
      p.at(a, b, x, y) = 1.0;
    }
  return p;
}

}  // namespace bellforge
