#include "gramfiber/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gramfiber/dense.hpp"
#include "gramfiber/errors.hpp"

namespace gramfiber {

namespace {

// Slice problems are tiny (N <= 6 matrices, <= 6 variables, +1 in phase-I).
// Everything in the Newton loop runs on fixed-capacity stack arrays.
constexpr int kMaxN = 12;
constexpr int kMaxK = 14;

struct Cone {
  int n = 0;                         // matrix size
  int k = 0;                         // number of slice variables
  double f0[kMaxN * kMaxN];          // base point, dense row-major
  double f[kMaxK][kMaxN * kMaxN];    // basis matrices
  double c[kMaxK];                   // linear objective on y
};

void to_dense(const SymMat& m, double* out) {
  int n = m.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = m.at(i, j);
}

void build_m(const Cone& cone, const double* y, double* m) {
  int nn = cone.n * cone.n;
  std::memcpy(m, cone.f0, sizeof(double) * nn);
  for (int i = 0; i < cone.k; ++i) {
    double yi = y[i];
    if (yi == 0.0) continue;
    const double* fi = cone.f[i];
    for (int a = 0; a < nn; ++a) m[a] += yi * fi[a];
  }
}

// Lower Cholesky; false on a non-positive pivot. logdet = 2 sum log L_ii.
bool cholesky(int n, const double* a, double* l, double* logdet) {
  double ld = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (int p = 0; p < j; ++p) s -= l[i * n + p] * l[j * n + p];
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return false;
        l[i * n + i] = std::sqrt(s);
        ld += std::log(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
    for (int j = i + 1; j < n; ++j) l[i * n + j] = 0.0;
  }
  if (logdet) *logdet = ld;
  return true;
}

// gamma = L^-1 F L^-T for symmetric F.
void whiten(int n, const double* l, const double* fmat, double* gamma) {
  double z[kMaxN * kMaxN];
  // Z = L^-1 F: forward solve on each column of F.
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = fmat[i * n + col];
      for (int p = 0; p < i; ++p) s -= l[i * n + p] * z[p * n + col];
      z[i * n + col] = s / l[i * n + i];
    }
  }
  // gamma = Z L^-T: gamma^T = L^-1 Z^T, and gamma is symmetric.
  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < n; ++i) {
      double s = z[row * n + i];
      for (int p = 0; p < i; ++p) s -= l[i * n + p] * gamma[row * n + p];
      gamma[row * n + i] = s / l[i * n + i];
    }
  }
}

bool solve_spd(int k, double* h, const double* rhs, double* out) {
  double mx = 0;
  for (int i = 0; i < k; ++i) mx = std::max(mx, h[i * k + i]);
  double ridge = std::max(mx, 1.0) * 1e-13;
  for (int i = 0; i < k; ++i) h[i * k + i] += ridge;
  double l[kMaxK * kMaxK];
  if (!cholesky(k, h, l, nullptr)) return false;
  double tmp[kMaxK];
  for (int i = 0; i < k; ++i) {
    double s = rhs[i];
    for (int p = 0; p < i; ++p) s -= l[i * k + p] * tmp[p];
    tmp[i] = s / l[i * k + i];
  }
  for (int i = k - 1; i >= 0; --i) {
    double s = tmp[i];
    for (int p = i + 1; p < k; ++p) s -= l[p * k + i] * out[p];
    out[i] = s / l[i * k + i];
  }
  return true;
}

struct PathState {
  double y[kMaxK];
  double t = 1.0;
  double gap = 0.0;        // nu / t at the last centered point
  double objective = 0.0;  // c . y
  int newton_used = 0;
  bool stalled = false;
  bool budget_exhausted = false;
};

// Newton centering for phi(y) = t c.y - logdet M(y) down to decrement <=
// dec_tol. Returns false when the line search stalls.
bool center(const Cone& cone, PathState& st, double dec_tol, int budget_cap) {
  const int n = cone.n, k = cone.k;
  double m[kMaxN * kMaxN], l[kMaxN * kMaxN], gamma[kMaxK][kMaxN * kMaxN];
  double logdet;

  for (int it = 0; it < 200; ++it) {
    if (st.newton_used >= budget_cap) {
      st.budget_exhausted = true;
      return false;
    }
    build_m(cone, st.y, m);
    if (!cholesky(n, m, l, &logdet)) return false;  // should stay interior

    double g[kMaxK], h[kMaxK * kMaxK];
    for (int i = 0; i < k; ++i) {
      whiten(n, l, cone.f[i], gamma[i]);
      double tr = 0;
      for (int a = 0; a < n; ++a) tr += gamma[i][a * n + a];
      g[i] = st.t * cone.c[i] - tr;
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j <= i; ++j) {
        double s = 0;
        for (int a = 0; a < n * n; ++a) s += gamma[i][a] * gamma[j][a];
        h[i * k + j] = h[j * k + i] = s;
      }

    double d[kMaxK], negg[kMaxK];
    for (int i = 0; i < k; ++i) negg[i] = -g[i];
    if (!solve_spd(k, h, negg, d)) return false;
    ++st.newton_used;

    double gd = 0;
    for (int i = 0; i < k; ++i) gd += g[i] * d[i];
    double dec = std::sqrt(std::max(0.0, -gd));
    if (dec <= dec_tol) return true;

    double phi0 = 0;
    for (int i = 0; i < k; ++i) phi0 += cone.c[i] * st.y[i];
    phi0 = st.t * phi0 - logdet;

    double alpha = (dec > 1.0) ? 1.0 / (1.0 + dec) : 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      double ytrial[kMaxK];
      for (int i = 0; i < k; ++i) ytrial[i] = st.y[i] + alpha * d[i];
      build_m(cone, ytrial, m);
      double ld2;
      if (cholesky(n, m, l, &ld2)) {
        double phi1 = 0;
        for (int i = 0; i < k; ++i) phi1 += cone.c[i] * ytrial[i];
        phi1 = st.t * phi1 - ld2;
        if (phi1 <= phi0 + 0.25 * alpha * gd) {
          std::memcpy(st.y, ytrial, sizeof(double) * k);
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
      if (alpha < 1e-15) break;
    }
    if (!accepted) {
      // No descent left at this t: treat the point as centered.
      return true;
    }
  }
  st.stalled = true;
  return true;
}

// Follows the central path until stop(objective, gap) holds.
template <typename StopFn>
PathState path_follow(const Cone& cone, const double* y0, double t0,
                      StopFn stop, int budget) {
  PathState st;
  std::memcpy(st.y, y0, sizeof(double) * cone.k);
  st.t = t0;
  const double nu = cone.n;
  for (int stage = 0; stage < 400; ++stage) {
    if (!center(cone, st, 0.25, budget)) break;
    st.gap = nu / st.t;
    st.objective = 0;
    for (int i = 0; i < cone.k; ++i) st.objective += cone.c[i] * st.y[i];
    if (stop(st.objective, st.gap)) {
      // Tight final centering so the iterate is the analytic center of the
      // t-level set, not just within the short-step neighbourhood.
      center(cone, st, 1e-8, budget);
      return st;
    }
    if (st.budget_exhausted) return st;
    st.t *= 1.5;  // fixed barrier schedule
  }
  st.budget_exhausted = true;
  return st;
}

double problem_scale(const SymMat& g0, const std::vector<SymMat>& basis) {
  double s = g0.frobenius();
  for (const SymMat& b : basis) s = std::max(s, b.frobenius());
  return std::max(s, 1e-300);
}

struct PhaseOne {
  bool ran = false;
  double margin = 0.0;  // best attained min-eigenvalue
  double gap = 0.0;     // sup margin <= margin + gap
  std::vector<double> lambda;
  bool budget_exhausted = false;
};

// maximize s with g0 + sum lambda_i basis_i - s I >= 0.
PhaseOne phase_one(const SymMat& g0, const std::vector<SymMat>& basis,
                   double stop_abs_gap, double early_exit_margin, int budget) {
  int n = g0.size();
  int kb = static_cast<int>(basis.size());
  if (kb + 1 > kMaxK || n > kMaxN)
    throw DimensionError("sdp: slice exceeds supported size");

  Cone cone;
  cone.n = n;
  cone.k = kb + 1;
  to_dense(g0, cone.f0);
  for (int i = 0; i < kb; ++i) {
    if (basis[i].size() != n) throw DimensionError("sdp: basis size mismatch");
    to_dense(basis[i], cone.f[i]);
    cone.c[i] = 0.0;
  }
  // Last variable is s with matrix -I; minimize -s.
  for (int a = 0; a < n * n; ++a) cone.f[kb][a] = 0.0;
  for (int i = 0; i < n; ++i) cone.f[kb][i * n + i] = -1.0;
  cone.c[kb] = -1.0;

  double y0[kMaxK] = {0};
  y0[kb] = min_eigenvalue(g0) - problem_scale(g0, basis);

  PathState st = path_follow(
      cone, y0, 1.0,
      [&](double obj, double gap) {
        double s = -obj;
        if (s - gap > early_exit_margin) return true;  // certified feasible
        return gap <= stop_abs_gap;
      },
      budget);

  PhaseOne out;
  out.ran = true;
  out.margin = st.y[kb];
  out.gap = st.gap;
  out.lambda.assign(st.y, st.y + kb);
  out.budget_exhausted = st.budget_exhausted;
  return out;
}

}  // namespace

double feasibility_margin(const SymMat& g0, const std::vector<SymMat>& basis) {
  double scale = problem_scale(g0, basis);
  PhaseOne p1 = phase_one(g0, basis, 1e-11 * scale, 1e300, 40000);
  if (p1.budget_exhausted)
    throw ConvergenceError("sdp: phase-I exhausted its Newton budget");
  return p1.margin;
}

bool feasible(const SymMat& g0, const std::vector<SymMat>& basis) {
  // Interior base point certifies feasibility without any solve.
  if (min_eigenvalue(g0) > 0) return true;
  double scale = problem_scale(g0, basis);
  PhaseOne p1 = phase_one(g0, basis, 1e-11 * scale, 1e-8 * scale, 40000);
  if (p1.budget_exhausted)
    throw ConvergenceError("sdp: phase-I exhausted its Newton budget");
  return p1.margin + p1.gap > -1e-9;
}

SdpSolution solve(const SliceProblem& p) {
  const int n = p.g0.size();
  const int kb = static_cast<int>(p.basis.size());
  if (n > kMaxN || kb + 1 > kMaxK)
    throw DimensionError("sdp: slice exceeds supported size");
  if (p.objective.size() != n)
    throw DimensionError("sdp: objective size mismatch");
  for (const SymMat& b : p.basis)
    if (b.size() != n) throw DimensionError("sdp: basis size mismatch");

  const double scale = problem_scale(p.g0, p.basis);
  SdpSolution sol;
  sol.lambda.assign(kb, 0.0);

  auto finish_with = [&](const double* y) {
    sol.lambda.assign(y, y + kb);
    sol.x = p.g0;
    for (int i = 0; i < kb; ++i) sol.x += sol.lambda[i] * p.basis[i];
    sol.objective_value = SymMat::trace_pair(p.objective, sol.x);
    sol.min_eigenvalue = min_eigenvalue(sol.x);
  };

  // Phase-I: strictly feasible start, or an infeasibility certificate.
  PhaseOne p1 = phase_one(p.g0, p.basis, 1e-11 * scale, 0.0, p.params.max_newton);
  if (p1.budget_exhausted && p1.margin <= 0) {
    sol.status = SdpStatus::NumericalFailure;
    sol.message = "phase-I exhausted Newton budget";
    std::vector<double> y(p1.lambda);
    finish_with(y.data());
    return sol;
  }
  if (p1.margin + p1.gap <= -1e-9) {
    sol.status = SdpStatus::Infeasible;
    sol.message = "slice does not meet the psd cone (phase-I value " +
                  std::to_string(p1.margin + p1.gap) + ")";
    finish_with(p1.lambda.data());
    return sol;
  }
  if (p1.margin <= 1e-12 * scale) {
    sol.status = SdpStatus::NumericalFailure;
    sol.message = "slice has empty interior within tolerance";
    finish_with(p1.lambda.data());
    return sol;
  }

  // Main path following on the normalized objective.
  Cone cone;
  cone.n = n;
  cone.k = kb;
  to_dense(p.g0, cone.f0);
  double cnorm = 0;
  for (int i = 0; i < kb; ++i) {
    to_dense(p.basis[i], cone.f[i]);
    cone.c[i] = SymMat::trace_pair(p.objective, p.basis[i]);
    cnorm += cone.c[i] * cone.c[i];
  }
  cnorm = std::sqrt(cnorm);

  if (cnorm == 0.0) {
    // Degenerate objective: analytic center of the whole slice.
    PathState st;
    std::memcpy(st.y, p1.lambda.data(), sizeof(double) * kb);
    st.t = 1.0;
    if (!center(cone, st, 1e-9, p.params.max_newton) && st.budget_exhausted) {
      sol.status = SdpStatus::NumericalFailure;
      sol.message = "analytic centering exhausted Newton budget";
      finish_with(st.y);
      return sol;
    }
    finish_with(st.y);
    sol.status = SdpStatus::Optimal;
    sol.gap = 0.0;
    return sol;
  }
  for (int i = 0; i < kb; ++i) cone.c[i] /= cnorm;

  PathState st = path_follow(
      cone, p1.lambda.data(), 1.0,
      [&](double obj, double gap) {
        return gap <= p.params.gap_tol * (1.0 + std::abs(obj));
      },
      p.params.max_newton);
  if (st.budget_exhausted) {
    sol.status = SdpStatus::NumericalFailure;
    sol.message = "path following exhausted Newton budget";
    finish_with(st.y);
    return sol;
  }

  finish_with(st.y);
  sol.gap = st.gap * cnorm;

  // Vertex polish: when the optimal face is a single point, the kernel of X
  // pins lambda exactly; the path iterate only needs to identify the face.
  if (p.params.polish) {
    EighResult ex = eigh(sol.x);
    double lmax = std::max(ex.eigenvalues.front(), 0.0);
    std::vector<int> kernel;
    for (int i = 0; i < n; ++i)
      if (ex.eigenvalues[i] <= 1e-5 * lmax) kernel.push_back(i);
    if (!kernel.empty()) {
      int rows = static_cast<int>(kernel.size()) * n;
      std::vector<std::vector<double>> a(rows, std::vector<double>(kb));
      std::vector<double> rhs(rows);
      int r = 0;
      for (int kv : kernel) {
        const std::vector<double>& v = ex.vectors[kv];
        for (int row = 0; row < n; ++row, ++r) {
          for (int i = 0; i < kb; ++i) a[r][i] = p.basis[i].mul(v)[row];
          rhs[r] = -p.g0.mul(v)[row];
        }
      }
      // Normal equations; polish only when lambda is pinned uniquely.
      SymMat h(kb);
      std::vector<double> g(kb, 0.0);
      for (int i = 0; i < kb; ++i) {
        for (int j = 0; j <= i; ++j) {
          double s = 0;
          for (int rr = 0; rr < rows; ++rr) s += a[rr][i] * a[rr][j];
          h.at(i, j) = s;
        }
        for (int rr = 0; rr < rows; ++rr) g[i] += a[rr][i] * rhs[rr];
      }
      EighResult eh = eigh(h);
      double hmax = std::max(eh.eigenvalues.front(), 0.0);
      if (hmax > 0 && eh.eigenvalues.back() > 1e-10 * hmax) {
        std::vector<double> lam(kb, 0.0);
        for (int m = 0; m < kb; ++m) {
          double comp = dot(g, eh.vectors[m]) / eh.eigenvalues[m];
          for (int i = 0; i < kb; ++i) lam[i] += comp * eh.vectors[m][i];
        }
        SymMat xp = p.g0;
        for (int i = 0; i < kb; ++i) xp += lam[i] * p.basis[i];
        double resid = 0;
        for (int kv : kernel) {
          std::vector<double> xv = xp.mul(ex.vectors[kv]);
          resid += dot(xv, xv);
        }
        resid = std::sqrt(resid);
        double obj_p = SymMat::trace_pair(p.objective, xp);
        double xscale = xp.frobenius() + scale;
        if (resid <= 1e-6 * xscale && min_eigenvalue(xp) >= -1e-9 * xscale &&
            obj_p <= sol.objective_value + 2.0 * sol.gap + 1e-12 * cnorm * xscale) {
          sol.lambda = lam;
          sol.x = xp;
          sol.objective_value = obj_p;
          sol.min_eigenvalue = min_eigenvalue(xp);
          sol.polished = true;
        }
      }
    }
  }

  if (sol.min_eigenvalue < -1e-8 * sol.x.frobenius()) {
    sol.status = SdpStatus::NumericalFailure;
    sol.message = "final iterate left the cone";
    return sol;
  }
  sol.status = SdpStatus::Optimal;
  return sol;
}

}  // namespace gramfiber
