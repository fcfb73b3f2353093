#include "gramfiber/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gramfiber/errors.hpp"

namespace gramfiber {

SymMat SymMat::identity(int n) {
  SymMat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

SymMat SymMat::from_rows(const std::vector<std::vector<double>>& rows) {
  int n = static_cast<int>(rows.size());
  SymMat m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw DimensionError("SymMat::from_rows: ragged rows");
    for (int j = 0; j <= i; ++j) {
      if (rows[i][j] != rows[j][i])
        throw DimensionError("SymMat::from_rows: input is not symmetric");
      m.at(i, j) = rows[i][j];
    }
  }
  return m;
}

SymMat SymMat::outer(const std::vector<double>& c) {
  int n = static_cast<int>(c.size());
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.at(i, j) = c[i] * c[j];
  return m;
}

SymMat SymMat::sym_outer(const std::vector<double>& c,
                         const std::vector<double>& e) {
  int n = static_cast<int>(c.size());
  if (static_cast<int>(e.size()) != n)
    throw DimensionError("SymMat::sym_outer: size mismatch");
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.at(i, j) = 0.5 * (c[i] * e[j] + c[j] * e[i]);
  return m;
}

SymMat& SymMat::operator+=(const SymMat& other) {
  if (n_ != other.n_) throw DimensionError("SymMat: size mismatch in +=");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] += other.a_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

std::vector<double> SymMat::mul(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) y[i] += at(i, j) * x[j];
  return y;
}

double SymMat::trace() const {
  double t = 0;
  for (int i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

double SymMat::frobenius() const {
  double s = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += at(i, j) * at(i, j);
  return std::sqrt(s);
}

double SymMat::max_abs() const {
  double m = 0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SymMat::trace_pair(const SymMat& a, const SymMat& b) {
  if (a.n_ != b.n_) throw DimensionError("trace_pair: size mismatch");
  double s = 0;
  for (int i = 0; i < a.n_; ++i) {
    s += a.at(i, i) * b.at(i, i);
    for (int j = 0; j < i; ++j) s += 2.0 * a.at(i, j) * b.at(i, j);
  }
  return s;
}

std::vector<double> SymMat::dense() const {
  std::vector<double> d(static_cast<size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) d[static_cast<size_t>(i) * n_ + j] = at(i, j);
  return d;
}

EighResult eigh(const SymMat& a) {
  const int n = a.size();
  EighResult r;
  if (n == 0) return r;

  // Work on a dense copy; V accumulates the rotations.
  std::vector<double> m = a.dense();
  std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
  auto M = [&](int i, int j) -> double& { return m[static_cast<size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> double& { return v[static_cast<size_t>(i) * n + j]; };

  const double scale = a.frobenius();
  const double tol = (scale == 0.0) ? 0.0 : 1e-15 * scale;

  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += M(i, j) * M(i, j);
    if (std::sqrt(2.0 * off) <= tol) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = M(p, q);
        if (std::abs(apq) <= tol / (4.0 * n)) continue;
        double app = M(p, p), aqq = M(q, q);
        double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0) t = -t;
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        double tau = s / (1.0 + c);

        M(p, p) = app - t * apq;
        M(q, q) = aqq + t * apq;
        M(p, q) = M(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = M(k, p), akq = M(k, q);
          M(k, p) = M(p, k) = akp - s * (akq + tau * akp);
          M(k, q) = M(q, k) = akq + s * (akp - tau * akq);
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = vkp - s * (vkq + tau * vkp);
          V(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
  }
  if (sweep >= 100)
    throw ConvergenceError("eigh: Jacobi did not converge within 100 sweeps");

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return M(i, i) > M(j, j); });

  r.eigenvalues.resize(n);
  r.vectors.assign(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    r.eigenvalues[k] = M(idx[k], idx[k]);
    for (int i = 0; i < n; ++i) r.vectors[k][i] = V(i, idx[k]);
  }
  return r;
}

int rank_tol(const SymMat& a, double tol) {
  if (tol <= 0) throw DimensionError("rank_tol: tol must be positive");
  EighResult e = eigh(a);
  double mx = 0;
  for (double l : e.eigenvalues) mx = std::max(mx, std::abs(l));
  if (mx == 0.0) return 0;
  int r = 0;
  for (double l : e.eigenvalues)
    if (std::abs(l) > tol * mx) ++r;
  return r;
}

double min_eigenvalue(const SymMat& a) {
  EighResult e = eigh(a);
  return e.eigenvalues.back();
}

SymMat adjugate3(const SymMat& a) {
  if (a.size() != 3) throw DimensionError("adjugate3: size must be 3");
  SymMat r(3);
  r.at(0, 0) = a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1);
  r.at(1, 1) = a.at(0, 0) * a.at(2, 2) - a.at(0, 2) * a.at(2, 0);
  r.at(2, 2) = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
  r.at(0, 1) = -(a.at(0, 1) * a.at(2, 2) - a.at(0, 2) * a.at(2, 1));
  r.at(0, 2) = a.at(0, 1) * a.at(1, 2) - a.at(0, 2) * a.at(1, 1);
  r.at(1, 2) = -(a.at(0, 0) * a.at(1, 2) - a.at(0, 2) * a.at(1, 0));
  return r;
}

double det3(const SymMat& a) {
  if (a.size() != 3) throw DimensionError("det3: size must be 3");
  return a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(1, 2)) -
         a.at(0, 1) * (a.at(0, 1) * a.at(2, 2) - a.at(1, 2) * a.at(0, 2)) +
         a.at(0, 2) * (a.at(0, 1) * a.at(1, 2) - a.at(1, 1) * a.at(0, 2));
}

}  // namespace gramfiber
