#pragma once

#include "bellforge/bell.hpp"

namespace bellforge {

struct CatalogEntry {
  BellFunctional functional;
  bool symmetric = false;
  std::optional<double> known_quantum_value;
  std::optional<double> known_sqs_qubit_value;
  std::string source;
};

// CHSH in its party-permutation-invariant form, beta = (-1)^(xy+a+b).
CatalogEntry chsh();
// Correlator form <A0B0>+<A0B1>-<A1B0>+<A1B1>; not symmetric in any
// printed form.
CatalogEntry chsh_asymmetric();

// The manifestly symmetric two-setting d-outcome inequality (local bound 0).
CatalogEntry i22dd(int d);
// Affine map to the CGLMP value: I_d = 2d/(d-1) * I_22dd + 2.
double cglmp_value_from_i22dd(int d, double i22dd_value);

// Symmetric three-setting correlator family, local bound 2 alpha + 5.
// Claims hold for alpha in [1.5, 3]; outside values are accepted but flagged
// through the entry's source note.
CatalogEntry i_s(double alpha);

// Correlation part of the three-setting inequality, local bound 4.
CatalogEntry i3322c();

// Four-setting probability-form inequality, local bound 0; the printed
// nonsymmetric terms are completed with their party-swapped images.
CatalogEntry j42();

// Nine-setting correlator inequality built from two CHSH triples plus the
// diagonal correlators. Settings are 0-based here (source counts from 1).
CatalogEntry i9();

// Two-parameter asymmetric family maximized by the Tsirelson correlation.
CatalogEntry i_r0r1(double r0, double r1);
// Closed-form local bound: max over the eight printed sign combinations.
double local_bound_g(double r0, double r1);
// Strict interior of the octagon spanned by the eight printed vertices.
bool in_octagon(double r0, double r1);

// Lookup by CLI name: chsh, chsh-asym, i22dd-<d>, is-<alpha>, i3322c, j42,
// i9, ir-<r0>-<r1>. Throws std::invalid_argument for unknown names.
CatalogEntry catalog_lookup(const std::string& name);
std::vector<std::string> catalog_names();

}  // namespace bellforge
