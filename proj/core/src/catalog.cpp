#include "bellforge/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>

namespace bellforge {

namespace {
const double kSqrt2 = std::sqrt(2.0);

CatalogEntry make_entry(BellFunctional f, double local_bound, std::string source) {
  CatalogEntry e{std::move(f), false, std::nullopt, std::nullopt, std::move(source)};
  e.functional.known_local_bound = local_bound;
  e.symmetric = is_symmetric_functional(e.functional);
  return e;
}

std::string compact(double v) {
  std::string s = std::to_string(v);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  return s;
}
}  // namespace

CatalogEntry chsh() {
  BellFunctional f(Scenario::square(2, 2), "chsh");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) f.at(a, b, x, y) = ((x * y + a + b) % 2) ? -1.0 : 1.0;
  auto e = make_entry(std::move(f), 2.0, "Clauser-Horne-Shimony-Holt, PPI form");
  e.known_quantum_value = 2.0 * kSqrt2;
  e.known_sqs_qubit_value = 2.0 * kSqrt2;
  return e;
}

CatalogEntry chsh_asymmetric() {
  CorrelatorWeights w = CorrelatorWeights::zero(2);
  w.joints << 1, 1, -1, 1;  // <A0B0>+<A0B1>-<A1B0>+<A1B1>
  auto e = make_entry(functional_from_correlator_form(w, "chsh-asym"), 2.0,
                      "CHSH after the relabeling B0 <-> B1");
  e.known_quantum_value = 2.0 * kSqrt2;
  return e;
}

CatalogEntry i22dd(int d) {
  if (d < 2) throw std::domain_error("i22dd: d >= 2 required");
  BellFunctional f(Scenario::square(2, d), "i22dd-" + std::to_string(d));
  for (int a = 0; a <= d - 2; ++a)
    for (int b = 0; b <= d - 2; ++b) {
      if (a + b <= d - 2) f.at(a, b, 0, 0) += 1.0;
      if (a + b >= d - 2) {
        f.at(a, b, 1, 1) -= 1.0;
        f.at(a, b, 0, 1) += 1.0;
        f.at(a, b, 1, 0) += 1.0;
      }
    }
  // marginal terms -sum_{a<=d-2} P_A(a|0) and -sum_{b<=d-2} P_B(b|0),
  // attached to the (0,0) setting pair
  for (int a = 0; a <= d - 2; ++a)
    for (int b = 0; b < d; ++b) f.at(a, b, 0, 0) -= 1.0;
  for (int b = 0; b <= d - 2; ++b)
    for (int a = 0; a < d; ++a) f.at(a, b, 0, 0) -= 1.0;
  return make_entry(std::move(f), 0.0, "symmetric form of the CGLMP inequality");
}

double cglmp_value_from_i22dd(int d, double i22dd_value) {
  if (d < 2) throw std::domain_error("cglmp_value_from_i22dd: d >= 2 required");
  return 2.0 * d / (d - 1.0) * i22dd_value + 2.0;
}

CatalogEntry i_s(double alpha) {
  CorrelatorWeights w = CorrelatorWeights::zero(3);
  w.singles_a << 1, 1, alpha;
  w.singles_b << 1, 1, alpha;
  w.joints << 0, -2, 1,
             -2, -2, -1,
              1, -1, -1;
  std::string note = "symmetric three-setting family";
  if (alpha < 1.5 || alpha > 3.0) note += " (alpha outside the studied interval [1.5, 3])";
  auto e = make_entry(functional_from_correlator_form(w, "is-" + compact(alpha)),
                      2.0 * alpha + 5.0, note);
  if (alpha == 1.5) e.known_quantum_value = 25.0 / 3.0;
  if (alpha == 2.0) e.known_quantum_value = (13.0 + 4.0 * std::sqrt(13.0)) / 3.0;
  return e;
}

CatalogEntry i3322c() {
  CorrelatorWeights w = CorrelatorWeights::zero(3);
  w.joints << 1, 1, 1,
              1, 1, -1,
              1, -1, 0;
  auto e = make_entry(functional_from_correlator_form(w, "i3322c"), 4.0,
                      "correlation part of the three-setting inequality");
  e.known_quantum_value = 5.0;
  e.known_sqs_qubit_value = 5.0;
  return e;
}

CatalogEntry j42() {
  // printed joint coefficients on P(0,0|x,y)
  Eigen::Matrix4d joint = Eigen::Matrix4d::Zero();
  joint(0, 0) = -3;
  joint(1, 1) = 1;
  joint(2, 3) = 1;
  for (int y : {0, 2, 3}) joint(1, y) += 2;
  for (int y : {2, 3}) joint(0, y) += 1;
  joint(2, 2) -= 2;
  joint(3, 3) -= 2;
  const std::array<double, 4> marginal = {-1.0, -4.0, 0.0, -1.0};
  // completion: add the swapped images of the off-diagonal joints and the
  // matching Bob marginals so the functional is PPI
  Eigen::Matrix4d full = Eigen::Matrix4d::Zero();
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      full(x, y) += joint(x, y);
      if (x != y) full(y, x) += joint(x, y);
    }
  BellFunctional f(Scenario::square(4, 2), "j42");
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) f.at(0, 0, x, y) += full(x, y);
  for (int x = 0; x < 4; ++x)
    for (int b = 0; b < 2; ++b) f.at(0, b, x, x) += marginal[x];
  for (int y = 0; y < 4; ++y)
    for (int a = 0; a < 2; ++a) f.at(a, 0, y, y) += marginal[y];
  auto e = make_entry(std::move(f), 0.0, "four-setting facet, PPI completion of the printed terms");
  e.known_quantum_value = 0.6722;
  e.known_sqs_qubit_value = 0.5682;
  return e;
}

CatalogEntry i9() {
  Eigen::MatrixXd joints = Eigen::MatrixXd::Zero(9, 9);
  auto chsh_block = [&](int x1, int x2, int y1, int y2) {
    joints(x1, y1) += 1;
    joints(x1, y2) += 1;
    joints(x2, y1) += 1;
    joints(x2, y2) -= 1;
  };
  // blocks printed with 1-based settings: (1,2;4,5), (1,3;6,7), (2,3;8,9)
  const int blocks[3][4] = {{0, 1, 3, 4}, {0, 2, 5, 6}, {1, 2, 7, 8}};
  for (const auto& blk : blocks) {
    chsh_block(blk[0], blk[1], blk[2], blk[3]);
    chsh_block(blk[2], blk[3], blk[0], blk[1]);  // role-swapped copy
  }
  for (int k = 0; k < 3; ++k) joints(k, k) += 1;
  CorrelatorWeights w = CorrelatorWeights::zero(9);
  w.joints = joints;
  auto e = make_entry(functional_from_correlator_form(w, "i9"), 15.0,
                      "two CHSH triples plus diagonal correlators (settings renumbered to 0-based)");
  e.known_quantum_value = 12.0 * kSqrt2 + 3.0;
  e.known_sqs_qubit_value = 6.0 * std::sqrt(3.0) + 9.0;
  return e;
}

CatalogEntry i_r0r1(double r0, double r1) {
  CorrelatorWeights w = CorrelatorWeights::zero(2);
  w.singles_a << (r0 + r1) / kSqrt2, (r0 - r1) / kSqrt2;
  w.singles_b << -r0, -r1;
  const double c = 1.0 / (2.0 * kSqrt2);
  w.joints << c, c, c, -c;
  std::string note = "Tsirelson-maximized two-parameter family";
  if (!in_octagon(r0, r1)) note += " (outside the octagon domain)";
  if (std::abs(r1 + (kSqrt2 + 1.0) * r0) < 1e-12) note += " (on the excluded line r1 = -(sqrt2+1) r0)";
  auto e = make_entry(functional_from_correlator_form(w, "ir-" + compact(r0) + "-" + compact(r1)),
                      local_bound_g(r0, r1),
                      std::move(note));
  e.known_quantum_value = 1.0;
  return e;
}

double local_bound_g(double r0, double r1) {
  double best = -std::numeric_limits<double>::infinity();
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      best = std::max(best, 1.0 / kSqrt2 + s1 * r0 + s2 * (kSqrt2 - 1.0) * r1);
      best = std::max(best, 1.0 / kSqrt2 + s1 * r1 + s2 * (kSqrt2 - 1.0) * r0);
    }
  return best;
}

bool in_octagon(double r0, double r1) {
  const double zeta = 1.0 / kSqrt2 - 0.5;
  const double edge = 0.5 - zeta;
  const std::array<std::array<double, 2>, 8> v = {{{edge, 0},
                                                   {zeta, zeta},
                                                   {0, edge},
                                                   {-zeta, zeta},
                                                   {-edge, 0},
                                                   {-zeta, -zeta},
                                                   {0, -edge},
                                                   {zeta, -zeta}}};
  // strict interior: positive cross product against every directed edge
  for (int i = 0; i < 8; ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % 8];
    const double cross = (q[0] - p[0]) * (r1 - p[1]) - (q[1] - p[1]) * (r0 - p[0]);
    if (cross <= 0) return false;
  }
  return true;
}

namespace {
double parse_number(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("catalog: cannot parse number in ") + what);
  }
}
}  // namespace

CatalogEntry catalog_lookup(const std::string& raw_name) {
  std::string name = raw_name;
  name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
  if (name == "chsh") return chsh();
  if (name == "chsh-asym") return chsh_asymmetric();
  if (name == "i3322c") return i3322c();
  if (name == "j42") return j42();
  if (name == "i9") return i9();
  if (name.rfind("i22dd-", 0) == 0) {
    const int d = static_cast<int>(parse_number(name.substr(6), "i22dd-<d>"));
    return i22dd(d);
  }
  if (name.rfind("is-", 0) == 0) return i_s(parse_number(name.substr(3), "is-<alpha>"));
  if (name.rfind("ir-", 0) == 0) {
    const auto rest = name.substr(3);
    const auto sep = rest.find('-', rest.empty() || rest[0] != '-' ? 0 : 1);
    if (sep == std::string::npos) throw std::invalid_argument("catalog: ir-<r0>-<r1> expected");
    return i_r0r1(parse_number(rest.substr(0, sep), "ir-<r0>"),
                  parse_number(rest.substr(sep + 1), "ir-<r1>"));
  }
  throw std::invalid_argument("catalog: unknown inequality '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"chsh", "chsh-asym", "i22dd-<d>", "is-<alpha>", "i3322c", "j42", "i9", "ir-<r0>-<r1>"};
}

}  // namespace bellforge
