#pragma once

#include "bellforge/bell.hpp"

namespace bellforge {

// One local deterministic point: output tables x -> a and y -> b.
struct DeterministicStrategy {
  std::vector<int> alice_outputs;
  std::vector<int> bob_outputs;
};

struct LocalBoundResult {
  double value = 0.0;
  DeterministicStrategy witness;
};

// Exact local bound by enumerating Alice's n^m output tables in base-n
// counter order; Bob's reply is the per-setting argmax with ties broken
// toward the smallest outcome. Witnesses are reproducible across runs.
// Throws if n^m exceeds the enumeration guard (1e7).
LocalBoundResult local_bound(const BellFunctional& f);

// Restricted to alice_outputs == bob_outputs; always <= local_bound.
LocalBoundResult symmetric_local_bound(const BellFunctional& f);

// P(a,b|x,y) = [a = alice(x)][b = bob(y)].
Correlation deterministic_correlation(const DeterministicStrategy& s, const Scenario& scenario);

}  // namespace bellforge
