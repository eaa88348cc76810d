#include "bellforge/optimize.hpp"

#include <cmath>
#include <numbers>

#include "bellforge/bfgs.hpp"
#include "bellforge/local.hpp"
#include "bellforge/parallel.hpp"
#include "bellforge/rng.hpp"
#include "bellforge/sdp.hpp"

namespace bellforge {

const char* to_string(SeesawMode m) {
  switch (m) {
    case SeesawMode::unrestricted: return "free";
    case SeesawMode::symmetric_correlation: return "symcorr";
    case SeesawMode::shared_povm: return "shared";
  }
  return "unknown";
}

SeesawMode seesaw_mode_from_string(const std::string& s) {
  if (s == "free" || s == "unrestricted") return SeesawMode::unrestricted;
  if (s == "symcorr" || s == "symmetric-correlation") return SeesawMode::symmetric_correlation;
  if (s == "shared" || s == "shared-povm") return SeesawMode::shared_povm;
  throw std::invalid_argument("seesaw mode: expected free, symcorr or shared");
}

const char* to_string(StateSubspace s) {
  switch (s) {
    case StateSubspace::symmetric: return "symmetric";
    case StateSubspace::antisymmetric: return "antisymmetric";
    case StateSubspace::both: return "both";
    case StateSubspace::full: return "full";
  }
  return "unknown";
}

Measurement dichotomic_observable_update(const Matrix& effective_operator) {
  const int d = static_cast<int>(effective_operator.rows());
  const Matrix f = 0.5 * (effective_operator + effective_operator.adjoint());
  Measurement m;
  if (f.cwiseAbs().maxCoeff() == 0.0) {
    // tie rule: computational basis
    Matrix p0 = Matrix::Zero(d, d);
    for (int k = 0; k < (d + 1) / 2; ++k) p0(k, k) = 1.0;
    m.effects = {p0, Matrix::Identity(d, d) - p0};
    return m;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(f);
  Matrix p0 = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    if (es.eigenvalues()(k) >= 0.0)
      p0 += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  m.effects = {p0, Matrix::Identity(d, d) - p0};
  return m;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// tr_B[rho (I (x) H)]: Alice-side effective operator.
Matrix effective_a(const Matrix& rho, const Matrix& h, int da, int db) {
  Matrix g = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) s += rho(i * db + k, j * db + l) * h(l, k);
      g(i, j) = s;
    }
  return g;
}

// tr_A[rho (H (x) I)]: Bob-side effective operator.
Matrix effective_b(const Matrix& rho, const Matrix& h, int da, int db) {
  Matrix g = Matrix::Zero(db, db);
  for (int k = 0; k < db; ++k)
    for (int l = 0; l < db; ++l) {
      Complex s = 0.0;
      for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) s += rho(i * db + k, j * db + l) * h(j, i);
      g(k, l) = s;
    }
  return g;
}

Matrix random_unitary(int d, SplitMix& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  return q;
}

Measurement random_projective(int d, int n, SplitMix& rng) {
  const Matrix u = random_unitary(d, rng);
  // random outcome ranks: balanced base plus a shuffled remainder
  std::vector<int> ranks(n, d / n);
  int rem = d % n;
  while (rem > 0) {
    ranks[rng.next_u64() % n] += 1;
    --rem;
  }
  Measurement m;
  int lo = 0;
  for (int a = 0; a < n; ++a) {
    const int r = ranks[a];
    Matrix e = Matrix::Zero(d, d);
    if (r > 0) e = u.middleCols(lo, r) * u.middleCols(lo, r).adjoint();
    m.effects.push_back(e);
    lo += r;
  }
  return m;
}

// Clamp to the PSD cone and restore exact completeness via S^{-1/2}.
void sanitize_povm(std::vector<Matrix>& effects) {
  const int d = static_cast<int>(effects.front().rows());
  Matrix sum = Matrix::Zero(d, d);
  for (auto& e : effects) {
    e = (0.5 * (e + e.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(e);
    e = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
        es.eigenvectors().adjoint();
    sum += e;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
  const Matrix isqrt = es.eigenvectors() *
                       es.eigenvalues().cwiseMax(1e-14).cwiseInverse().cwiseSqrt().asDiagonal() *
                       es.eigenvectors().adjoint();
  for (auto& e : effects) e = isqrt * e * isqrt;
}

// Swap-invariant subspace bases as orthonormal columns in C^{d^2}.
Matrix symmetric_basis(int d) {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix b = Matrix::Zero(d * d, d * (d + 1) / 2);
  int c = 0;
  for (int i = 0; i < d; ++i) b(i * d + i, c++) = 1.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      b(i * d + j, c) = r;
      b(j * d + i, c) = r;
      ++c;
    }
  return b;
}

Matrix antisymmetric_basis(int d) {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix b = Matrix::Zero(d * d, d * (d - 1) / 2);
  int c = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      b(i * d + j, c) = r;
      b(j * d + i, c) = -r;
      ++c;
    }
  return b;
}

struct BetaTerm {
  int a, b, x, y;
  double c;
};

std::vector<BetaTerm> nonzero_terms(const BellFunctional& f) {
  std::vector<BetaTerm> t;
  const Scenario& s = f.scenario();
  for (int x = 0; x < s.settings_a; ++x)
    for (int y = 0; y < s.settings_b; ++y)
      for (int a = 0; a < s.outcomes; ++a)
        for (int b = 0; b < s.outcomes; ++b)
          if (f(a, b, x, y) != 0.0) t.push_back({a, b, x, y, f(a, b, x, y)});
  return t;
}

// sum_t beta_t <psi| E_{a|x} (x) E_{b|y} |psi> through the D x D reshape.
double strategy_value(const std::vector<BetaTerm>& terms, const Matrix& psi_mat,
                      const std::vector<std::vector<Matrix>>& ae,
                      const std::vector<std::vector<Matrix>>& be) {
  double v = 0.0;
  for (const auto& t : terms) {
    const Matrix prod = be[t.y][t.b] * psi_mat * ae[t.x][t.a].transpose();
    v += t.c * psi_mat.conjugate().cwiseProduct(prod).sum().real();
  }
  return v;
}

// ---- SDP-backed POVM update (n > 2 or symmetric-correlation mode) ----

// Inner see-saw steps tolerate modestly converged solves; the final value is
// recomputed through born_correlation + evaluate anyway.
bool usable_solution(const SdpSolution& s) {
  return s.status == SdpStatus::optimal ||
         std::max({s.gap, s.primal_residual, s.dual_residual}) <= 1e-6;
}

void add_embedded_block(std::vector<SdpEntry>& out, const Matrix& h, int offset, double scale) {
  const Eigen::MatrixXd e = embed_hermitian(h);
  for (int r = 0; r < e.rows(); ++r)
    for (int c = r; c < e.cols(); ++c)
      if (e(r, c) != 0.0) out.push_back({offset + r, offset + c, scale * e(r, c)});
}

// max sum_a tr(M_a G_a) over a single POVM; block-diagonal real embedding.
std::vector<Matrix> povm_update_sdp(const std::vector<Matrix>& gs, bool& ok) {
  const int n = static_cast<int>(gs.size());
  const int d = static_cast<int>(gs.front().rows());
  const int blk = 2 * d;
  SdpProblem p;
  p.dim = n * blk;
  for (int a = 0; a < n; ++a) add_embedded_block(p.objective, gs[a], a * blk, 0.5);
  for (int r = 0; r < blk; ++r)
    for (int c = r; c < blk; ++c) {
      SdpConstraint con;
      for (int a = 0; a < n; ++a) con.entries.push_back({a * blk + r, a * blk + c, 1.0});
      con.rhs = (r == c) ? 1.0 : 0.0;
      p.constraints.push_back(std::move(con));
    }
  const SdpSolution sol = solve_sdp(p);
  ok = usable_solution(sol);
  std::vector<Matrix> effects;
  for (int a = 0; a < n; ++a)
    effects.push_back(extract_hermitian(sol.X.block(a * blk, a * blk, blk, blk)));
  sanitize_povm(effects);
  return effects;
}

struct SymcorrContext {
  const BellFunctional* f;
  int da, db;
  std::vector<BetaTerm> terms;
};

// Joint update of one party's POVMs subject to P(a,b|x,y) = P(b,a|y,x).
// `alice_side` selects which party is variable.
bool symcorr_povm_update(const SymcorrContext& ctx, const Matrix& rho,
                         std::vector<Measurement>& var_party,
                         const std::vector<Measurement>& fixed_party, bool alice_side) {
  const Scenario& sc = ctx.f->scenario();
  const int m = alice_side ? sc.settings_a : sc.settings_b;
  const int n = sc.outcomes;
  const int d = alice_side ? ctx.da : ctx.db;
  const int blk = 2 * d;
  auto block_of = [&](int x, int a) { return (x * n + a) * blk; };

  // fixed-party effective operators seen from the variable side
  std::vector<std::vector<Matrix>> geff(m, std::vector<Matrix>(n));
  for (int y = 0; y < m; ++y)
    for (int b = 0; b < n; ++b)
      geff[y][b] = alice_side ? effective_a(rho, fixed_party[y].effects[b], ctx.da, ctx.db)
                              : effective_b(rho, fixed_party[y].effects[b], ctx.da, ctx.db);

  SdpProblem p;
  p.dim = m * n * blk;
  // objective sum beta tr(M_{a|x} Geff[y][b]) grouped per (x,a)
  for (int x = 0; x < m; ++x)
    for (int a = 0; a < n; ++a) {
      Matrix fxa = Matrix::Zero(d, d);
      for (const auto& t : ctx.terms) {
        if (alice_side && t.x == x && t.a == a) fxa += t.c * geff[t.y][t.b];
        if (!alice_side && t.y == x && t.b == a) fxa += t.c * geff[t.x][t.a];
      }
      add_embedded_block(p.objective, fxa, block_of(x, a), 0.5);
    }
  // completeness per setting
  for (int x = 0; x < m; ++x)
    for (int r = 0; r < blk; ++r)
      for (int c = r; c < blk; ++c) {
        SdpConstraint con;
        for (int a = 0; a < n; ++a) con.entries.push_back({block_of(x, a) + r, block_of(x, a) + c, 1.0});
        con.rhs = (r == c) ? 1.0 : 0.0;
        p.constraints.push_back(std::move(con));
      }
  // symmetry of the joint distribution: the variable party's effects pair
  // against the fixed party's effective operators on both sides
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (std::tie(x, y, a, b) >= std::tie(y, x, b, a)) continue;
          SdpConstraint con;
          add_embedded_block(con.entries, geff[y][b], block_of(x, a), 0.5);
          add_embedded_block(con.entries, -geff[x][a], block_of(y, b), 0.5);
          con.rhs = 0.0;
          double weight = 0.0;
          for (const auto& en : con.entries) weight = std::max(weight, std::abs(en.value));
          if (weight > 1e-12) p.constraints.push_back(std::move(con));
        }
  const SdpSolution sol = solve_sdp(p);
  if (!usable_solution(sol)) return false;
  for (int x = 0; x < m; ++x) {
    std::vector<Matrix> effects;
    for (int a = 0; a < n; ++a)
      effects.push_back(extract_hermitian(sol.X.block(block_of(x, a), block_of(x, a), blk, blk)));
    sanitize_povm(effects);
    var_party[x].effects = effects;
  }
  return true;
}

// State update under the symmetry constraint: max tr(rho B) over density
// operators with a symmetric Born distribution.
bool symcorr_state_update(const SymcorrContext& ctx, const std::vector<Measurement>& alice,
                          const std::vector<Measurement>& bob, Matrix& rho) {
  const Scenario& sc = ctx.f->scenario();
  const int dd = ctx.da * ctx.db;
  const Matrix bell = bell_operator(*ctx.f, alice, bob);
  SdpProblem p;
  p.dim = 2 * dd;
  add_embedded_block(p.objective, bell, 0, 0.5);
  {
    SdpConstraint tr;
    for (int r = 0; r < 2 * dd; ++r) tr.entries.push_back({r, r, 1.0});
    tr.rhs = 2.0;  // embedded trace doubles
    p.constraints.push_back(std::move(tr));
  }
  for (int x = 0; x < sc.settings_a; ++x)
    for (int y = 0; y < sc.settings_b; ++y)
      for (int a = 0; a < sc.outcomes; ++a)
        for (int b = 0; b < sc.outcomes; ++b) {
          if (std::tie(x, y, a, b) >= std::tie(y, x, b, a)) continue;
          const Matrix k = kron(alice[x].effects[a], bob[y].effects[b]) -
                           kron(alice[y].effects[b], bob[x].effects[a]);
          if (k.cwiseAbs().maxCoeff() < 1e-12) continue;
          SdpConstraint con;
          add_embedded_block(con.entries, k, 0, 0.5);
          con.rhs = 0.0;
          p.constraints.push_back(std::move(con));
        }
  const SdpSolution sol = solve_sdp(p);
  if (!usable_solution(sol)) return false;
  Matrix r = extract_hermitian(sol.X);
  // clean tiny negative eigenvalues from the solver tolerance
  Eigen::SelfAdjointEigenSolver<Matrix> es(r);
  r = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
  rho = r / r.trace().real();
  return true;
}

struct RestartOutcome {
  double value = kNegInf;
  QuantumStrategy strategy;
  bool converged = false;
  std::vector<double> trace;
  bool valid = false;
};

RestartOutcome run_seesaw_restart(const BellFunctional& f, const SeesawConfig& cfg,
                                  std::uint64_t stream_seed, int restart_index) {
  const Scenario& sc = f.scenario();
  const int d = cfg.local_dim;
  const int dd = d * d;
  const int n = sc.outcomes;
  SplitMix rng(stream_seed);

  SymcorrContext ctx{&f, d, d, nonzero_terms(f)};

  std::vector<Measurement> alice, bob;
  for (int x = 0; x < sc.settings_a; ++x) alice.push_back(random_projective(d, n, rng));

  Matrix rho;
  Vector psi;
  const bool symcorr = cfg.mode == SeesawMode::symmetric_correlation;
  if (symcorr) {
    // default start is an SQS-compatible point: shared measurements on a
    // random swap-invariant pure state. Restarts cycle through mirror and
    // warm-started variants below; each produces a symmetric correlation.
    bob = alice;
    const Matrix swap = swap_operator(d);
    psi = Vector(dd);
    for (int k = 0; k < dd; ++k) psi(k) = Complex(rng.normal(), rng.normal());
    psi = (psi + swap * psi).eval();
    if (psi.norm() < 1e-9) psi = Vector::Ones(dd);
    psi /= psi.norm();
    rho = psi * psi.adjoint();
    if (restart_index % 3 == 2) {
      // mirror start: conjugated effects on a state with S|psi> = |psi*>
      for (size_t x = 0; x < alice.size(); ++x) {
        Measurement mb;
        for (const auto& e : alice[x].effects) mb.effects.push_back(e.conjugate());
        bob[x] = mb;
      }
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const double re = rng.normal(), im = rng.normal();
          if (i <= j) {
            psi(i * d + j) = Complex(re, im);
            psi(j * d + i) = Complex(re, -im);
          }
        }
      psi /= psi.norm();
      rho = psi * psi.adjoint();
    }
  } else {
    for (int y = 0; y < sc.settings_b; ++y) bob.push_back(random_projective(d, n, rng));
    psi = Vector(dd);
    for (int k = 0; k < dd; ++k) psi(k) = Complex(rng.normal(), rng.normal());
    psi /= psi.norm();
    rho = psi * psi.adjoint();
  }

  const Matrix sym_b = symmetric_basis(d);
  const Matrix asym_b = antisymmetric_basis(d);

  auto update_party = [&](bool alice_side) {
    auto& var = alice_side ? alice : bob;
    const auto& fixed = alice_side ? bob : alice;
    const int settings = alice_side ? sc.settings_a : sc.settings_b;
    for (int x = 0; x < settings; ++x) {
      std::vector<Matrix> gs(n, Matrix::Zero(d, d));
      for (int out = 0; out < n; ++out) {
        Matrix h = Matrix::Zero(d, d);
        for (const auto& t : ctx.terms) {
          if (alice_side && t.x == x && t.a == out) h += t.c * fixed[t.y].effects[t.b];
          if (!alice_side && t.y == x && t.b == out) h += t.c * fixed[t.x].effects[t.a];
        }
        gs[out] = alice_side ? effective_a(rho, h, d, d) : effective_b(rho, h, d, d);
      }
      if (n == 2) {
        var[x] = dichotomic_observable_update(gs[0] - gs[1]);
      } else {
        bool ok = false;
        var[x].effects = povm_update_sdp(gs, ok);
        if (!ok) return false;
      }
    }
    return true;
  };

  auto state_update_eig = [&]() {
    const Matrix bell = bell_operator(f, alice, bob);
    Eigen::SelfAdjointEigenSolver<Matrix> es(bell);
    const int top = dd - 1;
    psi = es.eigenvectors().col(top);
    const auto& ev = es.eigenvalues();
    if (top > 0 && ev(top) - ev(top - 1) < 1e-8 * std::max(1.0, std::abs(ev(top)))) {
      // degenerate top eigenspace: re-solve with a small random rotation
      // inside it so restarts do not stall on a flat direction
      Vector mix = psi;
      for (int k = top - 1; k >= 0 && ev(top) - ev(k) < 1e-8; --k)
        mix += 1e-3 * Complex(rng.normal(), rng.normal()) * es.eigenvectors().col(k);
      psi = mix / mix.norm();
    }
    rho = psi * psi.adjoint();
    return ev(top);
  };

  auto state_update_swap_invariant = [&]() {
    const Matrix bell = bell_operator(f, alice, bob);
    double best = kNegInf;
    for (const Matrix* basis : {&sym_b, &asym_b}) {
      if (basis->cols() == 0) continue;
      const Matrix blk = basis->adjoint() * bell * (*basis);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (blk + blk.adjoint()));
      const int top = static_cast<int>(es.eigenvalues().size()) - 1;
      if (es.eigenvalues()(top) > best) {
        best = es.eigenvalues()(top);
        psi = (*basis) * es.eigenvectors().col(top);
      }
    }
    rho = psi * psi.adjoint();
    return best;
  };

  RestartOutcome out;
  double last = kNegInf;
  double best_visited = kNegInf;
  int hops_left = 6;
  int stall = 0;

  if (symcorr && restart_index % 3 == 0) {
    // warm start: a short unrestricted phase finds high-value measurements;
    // the constrained state SDP then projects back onto symmetric
    // correlations. When that entry point is infeasible the tied shared-
    // measurement start above remains in effect.
    auto walice = alice;
    auto wbob = alice;
    for (auto& mref : wbob) (void)mref;
    wbob.clear();
    for (int y = 0; y < sc.settings_b; ++y) wbob.push_back(random_projective(d, n, rng));
    Matrix wrho = rho;
    {
      Vector wpsi(dd);
      for (int k = 0; k < dd; ++k) wpsi(k) = Complex(rng.normal(), rng.normal());
      wpsi /= wpsi.norm();
      wrho = wpsi * wpsi.adjoint();
    }
    auto warm_update = [&](bool alice_side, std::vector<Measurement>& var,
                           const std::vector<Measurement>& fixed) {
      const int settings = alice_side ? sc.settings_a : sc.settings_b;
      for (int x = 0; x < settings; ++x) {
        std::vector<Matrix> gs(n, Matrix::Zero(d, d));
        for (int o = 0; o < n; ++o) {
          Matrix hmat = Matrix::Zero(d, d);
          for (const auto& t : ctx.terms) {
            if (alice_side && t.x == x && t.a == o) hmat += t.c * fixed[t.y].effects[t.b];
            if (!alice_side && t.y == x && t.b == o) hmat += t.c * fixed[t.x].effects[t.a];
          }
          gs[o] = alice_side ? effective_a(wrho, hmat, d, d) : effective_b(wrho, hmat, d, d);
        }
        if (n == 2) var[x] = dichotomic_observable_update(gs[0] - gs[1]);
      }
    };
    if (n == 2) {
      for (int sweep = 0; sweep < 8; ++sweep) {
        warm_update(true, walice, wbob);
        warm_update(false, wbob, walice);
        const Matrix bell = bell_operator(f, walice, wbob);
        Eigen::SelfAdjointEigenSolver<Matrix> es(bell);
        const Vector top = es.eigenvectors().col(dd - 1);
        wrho = top * top.adjoint();
      }
      Matrix projected = wrho;
      if (symcorr_state_update(ctx, walice, wbob, projected)) {
        alice = walice;
        bob = wbob;
        rho = projected;
      }
    }
  }
  Vector best_psi;
  Matrix best_rho;
  std::vector<Measurement> best_alice, best_bob;

  auto salvage = [&]() {  // keep the best visited point of a failed restart
    if (best_visited == kNegInf) return out;
    out.value = best_visited;
    out.strategy.alice = best_alice;
    out.strategy.bob = best_bob;
    if (symcorr)
      out.strategy.state = DensityOperator{best_rho, d, d};
    else
      out.strategy.state = Ket{best_psi, d, d};
    out.valid = true;
    return out;
  };

  for (int it = 0; it < cfg.max_iters; ++it) {
    double value = kNegInf;
    switch (cfg.mode) {
      case SeesawMode::unrestricted: {
        if (!update_party(true) || !update_party(false)) return salvage();
        value = state_update_eig() + f.constant_offset;
        break;
      }
      case SeesawMode::shared_povm: {
        if (!update_party(true)) return salvage();
        bob = alice;
        value = state_update_swap_invariant() + f.constant_offset;
        break;
      }
      case SeesawMode::symmetric_correlation: {
        if (!symcorr_povm_update(ctx, rho, alice, bob, true)) return salvage();
        if (!symcorr_povm_update(ctx, rho, alice, bob, false)) return salvage();
        if (!symcorr_state_update(ctx, alice, bob, rho)) return salvage();
        value = (bell_operator(f, alice, bob) * rho).trace().real() + f.constant_offset;
        break;
      }
    }
    out.trace.push_back(value);
    if (value > best_visited + 1e-7 * (1.0 + std::abs(best_visited))) {
      stall = 0;
    } else {
      ++stall;
    }
    if (value > best_visited) {
      best_visited = value;
      best_alice = alice;
      best_bob = bob;
      if (symcorr)
        best_rho = rho;
      else
        best_psi = psi;
    }
    const bool settled = symcorr ? stall >= 4
                                 : it > 0 && std::abs(value - last) < cfg.convergence_tol;
    if (settled) {
      out.converged = true;
      // the symmetric-correlation alternation is prone to shallow fixed
      // points (single-party moves are pinned by the symmetry constraint);
      // hop by mixing a fresh swap-invariant state into rho and continue
      if (symcorr && hops_left > 0) {
        --hops_left;
        out.converged = false;
        stall = 0;
        Vector fresh(dd);
        for (int k = 0; k < dd; ++k) fresh(k) = Complex(rng.normal(), rng.normal());
        const Matrix swap = swap_operator(d);
        fresh = (fresh + swap * fresh).eval();
        fresh /= fresh.norm();
        rho = (0.6 * rho + 0.4 * fresh * fresh.adjoint()).eval();
        last = kNegInf;
        continue;
      }
      break;
    }
    last = value;
  }

  out.value = best_visited;
  out.strategy.alice = std::move(best_alice);
  out.strategy.bob = std::move(best_bob);
  if (symcorr)
    out.strategy.state = DensityOperator{best_rho, d, d};
  else
    out.strategy.state = Ket{best_psi, d, d};
  out.valid = true;
  return out;
}

}  // namespace

OptimizationReport seesaw(const BellFunctional& f, const SeesawConfig& cfg) {
  if (cfg.local_dim < 2) throw std::invalid_argument("seesaw: local_dim >= 2 required");
  if (cfg.restarts < 1) throw std::invalid_argument("seesaw: restarts >= 1 required");

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  parallel_for(cfg.restarts, [&](int r) {
    outcomes[r] = run_seesaw_restart(f, cfg, SplitMix::derive(cfg.seed, r), r);
  });

  OptimizationReport rep;
  rep.mode = std::string("seesaw ") + to_string(cfg.mode) + " D=" + std::to_string(cfg.local_dim);
  rep.per_restart.reserve(cfg.restarts);
  int best = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    rep.per_restart.push_back(outcomes[r].value);
    if (outcomes[r].valid && (best < 0 || outcomes[r].value > outcomes[best].value)) best = r;
  }
  if (best < 0) throw std::runtime_error("seesaw: every restart failed numerically");
  rep.best_restart = best;
  rep.best_strategy = outcomes[best].strategy;
  rep.converged = outcomes[best].converged;
  rep.best_value_trace = outcomes[best].trace;
  // report the value through the public evaluation path
  rep.best_value = evaluate(f, born_correlation(rep.best_strategy));
  return rep;
}

namespace {

struct SqsSetup {
  Matrix basis;  // empty in full mode
  std::vector<std::vector<int>> ranks;
  StateSubspace subspace;
};

int su_param_count(int d) { return d * d - 1; }

std::vector<std::vector<std::vector<int>>> default_partitions(int d, int n, int m) {
  std::vector<int> balanced(n, d / n);
  for (int a = 0; a < d % n; ++a) balanced[a] += 1;
  std::vector<int> degenerate(n, 0);
  degenerate[0] = d;
  std::vector<std::vector<std::vector<int>>> combos;
  combos.push_back(std::vector<std::vector<int>>(m, balanced));
  for (int s = 0; s < m; ++s) {
    auto combo = std::vector<std::vector<int>>(m, balanced);
    combo[s] = degenerate;
    combos.push_back(std::move(combo));
  }
  return combos;
}

struct SqsObjective {
  const std::vector<BetaTerm>* terms;
  int d, m, n, state_dim;
  const Matrix* basis;  // nullptr in full mode
  const std::vector<std::vector<int>>* ranks;

  int param_count() const { return 2 * state_dim + m * su_param_count(d); }

  Vector state_of(const Eigen::VectorXd& p) const {
    Vector c(state_dim);
    for (int k = 0; k < state_dim; ++k) c(k) = Complex(p(k), p(state_dim + k));
    const double nrm = c.norm();
    if (nrm < 1e-12) return Vector::Zero(basis ? basis->rows() : state_dim);
    c /= nrm;
    return basis ? Vector((*basis) * c) : c;
  }

  std::vector<std::vector<Matrix>> effects_of(const Eigen::VectorXd& p) const {
    std::vector<std::vector<Matrix>> eff(m);
    const int k = su_param_count(d);
    for (int x = 0; x < m; ++x) {
      const Matrix u = su_unitary(d, p.segment(2 * state_dim + x * k, k));
      int lo = 0;
      for (int a = 0; a < n; ++a) {
        const int r = (*ranks)[x][a];
        Matrix e = Matrix::Zero(d, d);
        if (r > 0) e = u.middleCols(lo, r) * u.middleCols(lo, r).adjoint();
        eff[x].push_back(std::move(e));
        lo += r;
      }
    }
    return eff;
  }

  double value(const Eigen::VectorXd& p) const {
    const Vector psi = state_of(p);
    if (psi.norm() < 0.5) return -1e6;
    const auto eff = effects_of(p);
    Eigen::Map<const Matrix> psi_mat(psi.data(), d, d);  // (j, i) layout
    return strategy_value(*terms, psi_mat, eff, eff);
  }
};

}  // namespace

Matrix su_unitary(int dim, const Eigen::VectorXd& params) {
  if (params.size() != dim * dim - 1)
    throw std::invalid_argument("su_unitary: expected dim^2 - 1 parameters");
  Matrix u = Matrix::Identity(dim, dim);
  int idx = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double th = params(idx++);
      const double ph = params(idx++);
      Matrix g = Matrix::Identity(dim, dim);
      const double c = std::cos(th), s = std::sin(th);
      g(i, i) = c;
      g(j, j) = c;
      g(i, j) = s * std::exp(Complex(0, ph));
      g(j, i) = -s * std::exp(Complex(0, -ph));
      u = u * g;
    }
  double total = 0.0;
  for (int k = 0; k + 1 < dim; ++k) {
    const double a = params(idx++);
    total += a;
    u.col(k) *= std::exp(Complex(0, a));
  }
  u.col(dim - 1) *= std::exp(Complex(0, -total));
  return u;
}

OptimizationReport sqs_lower_bound(const BellFunctional& f, const ParamOptConfig& cfg) {
  const Scenario& sc = f.scenario();
  if (sc.settings_a != sc.settings_b)
    throw ShapeError("sqs_lower_bound: equal setting counts required");
  if (cfg.local_dim < 2) throw std::invalid_argument("sqs_lower_bound: local_dim >= 2 required");
  if (cfg.restarts < 1) throw std::invalid_argument("sqs_lower_bound: restarts >= 1 required");
  if (cfg.rank_partitions) {
    if (static_cast<int>(cfg.rank_partitions->size()) != sc.settings_a)
      throw std::invalid_argument("sqs_lower_bound: one rank partition per setting required");
    for (const auto& pr : *cfg.rank_partitions) {
      int sum = 0;
      if (static_cast<int>(pr.size()) != sc.outcomes)
        throw std::invalid_argument("sqs_lower_bound: one rank per outcome required");
      for (int r : pr) sum += r;
      if (sum != cfg.local_dim)
        throw std::invalid_argument("sqs_lower_bound: ranks must sum to local_dim");
    }
  }

  const int d = cfg.local_dim;
  const int m = sc.settings_a;
  const int n = sc.outcomes;
  const auto terms = nonzero_terms(f);

  const Matrix sym_b = symmetric_basis(d);
  const Matrix asym_b = antisymmetric_basis(d);

  std::vector<std::vector<std::vector<int>>> partitions;
  if (cfg.rank_partitions)
    partitions.push_back(*cfg.rank_partitions);
  else
    partitions = default_partitions(d, n, m);

  std::vector<StateSubspace> subspaces;
  if (cfg.subspace == StateSubspace::both) {
    subspaces = {StateSubspace::symmetric, StateSubspace::antisymmetric};
    if (asym_b.cols() == 0) subspaces = {StateSubspace::symmetric};
  } else {
    subspaces = {cfg.subspace};
  }

  struct Variant {
    const std::vector<std::vector<int>>* ranks;
    StateSubspace sub;
  };
  std::vector<Variant> variants;
  for (const auto& pr : partitions)
    for (auto sub : subspaces) variants.push_back({&pr, sub});

  struct Outcome {
    double value = kNegInf;
    Eigen::VectorXd params;
    int variant = 0;
    bool converged = false;
  };
  std::vector<Outcome> outcomes(cfg.restarts);

  parallel_for(cfg.restarts, [&](int r) {
    const Variant& var = variants[r % variants.size()];
    const Matrix* basis = nullptr;
    int state_dim = d * d;
    switch (var.sub) {
      case StateSubspace::symmetric: basis = &sym_b; state_dim = static_cast<int>(sym_b.cols()); break;
      case StateSubspace::antisymmetric:
        basis = &asym_b;
        state_dim = static_cast<int>(asym_b.cols());
        break;
      default: break;  // full: no basis restriction
    }
    if (state_dim == 0) return;  // e.g. antisymmetric subspace of D = 1

    SqsObjective obj{&terms, d, m, n, state_dim, basis, var.ranks};
    SplitMix rng(SplitMix::derive(cfg.seed, r));
    Eigen::VectorXd x0(obj.param_count());
    for (int k = 0; k < x0.size(); ++k) x0(k) = rng.uniform(-std::numbers::pi, std::numbers::pi);

    BfgsOptions bo;
    bo.max_evaluations = cfg.max_evals;
    bo.gradient_tol = cfg.termination_tol;
    bo.finite_diff_step = cfg.grad_step;
    const BfgsResult res =
        bfgs_minimize([&](const Eigen::VectorXd& p) { return -obj.value(p); }, x0, bo);
    outcomes[r] = {-res.value, res.x, r % static_cast<int>(variants.size()), res.converged};
  });

  int best = 0;
  OptimizationReport rep;
  for (int r = 0; r < cfg.restarts; ++r) {
    rep.per_restart.push_back(outcomes[r].value);
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  const Variant& var = variants[outcomes[best].variant];
  const Matrix* basis = var.sub == StateSubspace::symmetric      ? &sym_b
                        : var.sub == StateSubspace::antisymmetric ? &asym_b
                                                                  : nullptr;
  SqsObjective obj{&terms, d, m, n, basis ? static_cast<int>(basis->cols()) : d * d, basis,
                   var.ranks};
  const auto eff = obj.effects_of(outcomes[best].params);

  rep.best_restart = best;
  rep.converged = outcomes[best].converged;
  rep.mode = std::string("sqs D=") + std::to_string(d) + " subspace=" + to_string(var.sub);
  if (!is_symmetric_functional(f)) rep.mode += " [warning: functional is not symmetric]";

  QuantumStrategy strat;
  strat.state = Ket{obj.state_of(outcomes[best].params), d, d};
  for (int x = 0; x < m; ++x) {
    Measurement mm;
    mm.effects = eff[x];
    strat.alice.push_back(mm);
  }
  strat.bob = strat.alice;
  rep.best_strategy = std::move(strat);
  rep.best_value = evaluate(f, born_correlation(rep.best_strategy));
  return rep;
}

std::vector<SweepRow> sweep(const std::function<BellFunctional(double)>& family,
                            const std::vector<double>& alphas, const SeesawConfig& seesaw_cfg,
                            const ParamOptConfig& sqs_cfg) {
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    const BellFunctional f = family(a);
    SweepRow row;
    row.alpha = a;
    row.local = local_bound(f).value;
    row.sqs_qubit = sqs_lower_bound(f, sqs_cfg).best_value;
    row.quantum = seesaw(f, seesaw_cfg).best_value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bellforge
