#include "bellforge/sdp.hpp"

#include <cmath>
#include <thread>

namespace bellforge {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd dense_of(const std::vector<SdpEntry>& entries, int n) {
  MatrixXd m = MatrixXd::Zero(n, n);
  for (const auto& e : entries) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

double sparse_inner(const std::vector<SdpEntry>& entries, const MatrixXd& m) {
  double s = 0.0;
  for (const auto& e : entries)
    s += e.value * (e.row == e.col ? m(e.row, e.row) : 2.0 * m(e.row, e.col));
  return s;
}

// W * A_i * W for a sparse A_i, as a sum of scaled outer products of W's
// columns. W must be symmetric.
void scaled_constraint(const MatrixXd& w, const std::vector<SdpEntry>& entries, MatrixXd& out) {
  out.setZero();
  for (const auto& e : entries) {
    const auto wr = w.col(e.row);
    const auto wc = w.col(e.col);
    if (e.row == e.col) {
      out.noalias() += e.value * wr * wr.transpose();
    } else {
      out.noalias() += e.value * wr * wc.transpose();
      out.noalias() += e.value * wc * wr.transpose();
    }
  }
}

struct StepInfo {
  bool ok = false;
  double alpha = 0.0;
};

// Largest alpha in (0, 1] with M + alpha dM psd, via lambda_min of
// L^{-1} dM L^{-T}.
double max_step(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& dm) {
  MatrixXd s = llt.matrixL().solve(dm);
  s = llt.matrixL().solve(s.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().minCoeff();
  if (lam >= -1e-12) return 1.0;
  return std::min(1.0, -1.0 / lam);
}

unsigned worker_count(size_t m) {
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("BELLFORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) hw = static_cast<unsigned>(v);
  }
  if (m < 64) return 1;
  return std::max(1u, std::min<unsigned>(hw ? hw : 1, 16));
}

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iterations: return "max_iterations";
    case SdpStatus::numerical_failure: return "numerical_failure";
    case SdpStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

SdpSolution solve_sdp(const SdpProblem& p, double tolerance, int max_iterations) {
  const int n = p.dim;
  const int m = static_cast<int>(p.constraints.size());
  if (n < 1) throw std::invalid_argument("solve_sdp: empty problem");
  if (n > 4096)
    throw std::invalid_argument("solve_sdp: dense solver is capped at dimension 4096");

  const MatrixXd c = dense_of(p.objective, n);
  VectorXd b(m);
  for (int i = 0; i < m; ++i) b(i) = p.constraints[i].rhs;

  const double scale =
      std::max({1.0, c.cwiseAbs().maxCoeff(), m ? b.cwiseAbs().maxCoeff() : 0.0});
  MatrixXd x = MatrixXd::Identity(n, n) * scale;
  MatrixXd z = MatrixXd::Identity(n, n) * scale;
  VectorXd y = VectorXd::Zero(m);

  SdpSolution sol;
  sol.X = x;
  sol.y = y;

  auto amap = [&](const MatrixXd& mat) {
    VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = sparse_inner(p.constraints[i].entries, mat);
    return v;
  };
  auto atmap = [&](const VectorXd& v) {
    MatrixXd mat = MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) {
      if (v(i) == 0.0) continue;
      for (const auto& e : p.constraints[i].entries) {
        mat(e.row, e.col) += v(i) * e.value;
        if (e.row != e.col) mat(e.col, e.row) += v(i) * e.value;
      }
    }
    return mat;
  };

  const unsigned workers = worker_count(m);
  const double bnorm = 1.0 + (m ? b.norm() : 0.0);
  const double cnorm = 1.0 + c.norm();

  double best_metric = std::numeric_limits<double>::infinity();
  auto finish = [&](SdpStatus fallback) {
    sol.status = std::max({sol.gap, sol.primal_residual, sol.dual_residual}) <= tolerance
                     ? SdpStatus::optimal
                     : fallback;
    return sol;
  };

  for (int it = 0; it < max_iterations; ++it) {
    const double mu = (x.cwiseProduct(z)).sum() / n;
    const VectorXd rp = b - amap(x);
    const MatrixXd rd = c - atmap(y) + z;
    const double pobj = (c.cwiseProduct(x)).sum();
    const double dobj = m ? b.dot(y) : 0.0;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pres = rp.norm() / bnorm;
    const double dres = rd.norm() / cnorm;

    if (std::max({gap, pres, dres}) < best_metric) {
      best_metric = std::max({gap, pres, dres});
      sol.primal_value = pobj;
      sol.dual_value = dobj;
      sol.gap = gap;
      sol.primal_residual = pres;
      sol.dual_residual = dres;
      sol.iterations = it;
      sol.X = x;
      sol.y = y;
    }

    if (gap < tolerance && pres < tolerance && dres < tolerance) {
      sol.status = SdpStatus::optimal;
      return sol;
    }
    // divergence: dual objective racing to -inf with an (almost) feasible
    // dual iterate signals primal infeasibility (and vice versa)
    if (y.size() && (y.cwiseAbs().maxCoeff() > 1e12 * scale || x.trace() > 1e12 * scale)) {
      sol.status = SdpStatus::infeasible;
      return sol;
    }

    Eigen::LLT<MatrixXd> lx(x);
    Eigen::LLT<MatrixXd> lz(z);
    if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return finish(SdpStatus::numerical_failure);

    // NT scaling point: W = Lx (Lx^T Z Lx)^{-1/2} Lx^T, so W Z W = X
    const MatrixXd lxm = lx.matrixL();
    MatrixXd mz = lxm.transpose() * z * lxm;
    mz = (0.5 * (mz + mz.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> esz(mz);
    if (esz.eigenvalues().minCoeff() <= 0.0) return finish(SdpStatus::numerical_failure);
    const MatrixXd misqrt = esz.eigenvectors() *
                            esz.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                            esz.eigenvectors().transpose();
    MatrixXd w = lxm * misqrt * lxm.transpose();
    w = (0.5 * (w + w.transpose())).eval();

    // Schur complement H_ij = tr(A_i W A_j W), SPD under NT scaling
    MatrixXd h = MatrixXd::Zero(m, m);
    {
      std::vector<std::thread> pool;
      std::atomic<int> next{0};
      auto body = [&] {
        MatrixXd wa(n, n);
        int i;
        while ((i = next.fetch_add(1)) < m) {
          scaled_constraint(w, p.constraints[i].entries, wa);
          for (int j = i; j < m; ++j) h(i, j) = sparse_inner(p.constraints[j].entries, wa);
        }
      };
      for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
      body();
      for (auto& t : pool) t.join();
      h.triangularView<Eigen::StrictlyLower>() = h.transpose();
    }
    Eigen::LLT<MatrixXd> hl;
    const double hscale = std::max(1.0, h.trace() / std::max(1, m));
    bool factored = false;
    for (double reg : {0.0, 1e-14, 1e-12, 1e-10, 1e-8, 1e-6}) {
      hl.compute(h + reg * hscale * MatrixXd::Identity(m, m));
      if (hl.info() == Eigen::Success) {
        factored = true;
        break;
      }
    }
    if (m > 0 && !factored) return finish(SdpStatus::numerical_failure);

    const MatrixXd zinv = lz.solve(MatrixXd::Identity(n, n));
    const MatrixXd wrdw = w * rd * w;

    // dX + W dZ W = Rc;  A(dX) = rp;  At(dy) - dZ = Rd
    auto solve_dir = [&](const MatrixXd& rc, MatrixXd& dx, VectorXd& dy, MatrixXd& dz) {
      const VectorXd rhs = amap(rc) - rp + amap(wrdw);
      dy = m ? VectorXd(hl.solve(rhs)) : VectorXd();
      dz = atmap(dy) - rd;
      dz = (0.5 * (dz + dz.transpose())).eval();
      dx = rc - w * dz * w;
      dx = (0.5 * (dx + dx.transpose())).eval();
    };

    MatrixXd dxa(n, n), dza(n, n);
    VectorXd dya;
    solve_dir(-x, dxa, dya, dza);
    const double apa = max_step(lx, dxa);
    const double ada = max_step(lz, dza);
    const double mu_aff =
        ((x + 0.98 * apa * dxa).cwiseProduct(z + 0.98 * ada * dza)).sum() / n;
    const double sigma =
        std::min(1.0, std::max(1e-6, std::pow(std::max(mu_aff, 0.0) / mu, 3.0)));

    MatrixXd rc = sigma * mu * zinv - x - 0.5 * (dxa * dza * zinv + zinv * dza * dxa);
    MatrixXd dx(n, n), dz(n, n);
    VectorXd dy;
    solve_dir(rc, dx, dy, dz);
    double ap = max_step(lx, dx);
    double ad = max_step(lz, dz);
    if (std::min(ap, ad) < 0.3 * std::min(apa, ada)) {
      // second-order term backfired; fall back to the plain centering step
      solve_dir(sigma * mu * zinv - x, dx, dy, dz);
      ap = max_step(lx, dx);
      ad = max_step(lz, dz);
    }

    const double tau = mu > 1e-5 * scale ? 0.9 : 0.98;
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);
    bool stepped = false;
    for (int back = 0; back < 8; ++back) {
      const MatrixXd xn = x + ap * dx;
      const MatrixXd zn = z + ad * dz;
      if (Eigen::LLT<MatrixXd>(xn).info() == Eigen::Success &&
          Eigen::LLT<MatrixXd>(zn).info() == Eigen::Success) {
        x = 0.5 * (xn + xn.transpose());
        z = 0.5 * (zn + zn.transpose());
        y += ad * dy;
        stepped = true;
        break;
      }
      ap *= 0.5;
      ad *= 0.5;
    }
    if (!stepped) return finish(SdpStatus::numerical_failure);
  }
  return finish(SdpStatus::max_iterations);
}

Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& h) {
  const int d = static_cast<int>(h.rows());
  Eigen::MatrixXd e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = h.real();
  e.bottomRightCorner(d, d) = h.real();
  e.topRightCorner(d, d) = -h.imag();
  e.bottomLeftCorner(d, d) = h.imag();
  return e;
}

Eigen::MatrixXcd extract_hermitian(const Eigen::MatrixXd& e) {
  const int d = static_cast<int>(e.rows()) / 2;
  Eigen::MatrixXcd h(d, d);
  h.real() = 0.5 * (e.topLeftCorner(d, d) + e.bottomRightCorner(d, d));
  h.imag() = 0.5 * (e.bottomLeftCorner(d, d) - e.topRightCorner(d, d));
  // Hermitize against embedding asymmetry
  return 0.5 * (h + h.adjoint());
}

}  // namespace bellforge
