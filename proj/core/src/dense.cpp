#include "gramfiber/dense.hpp"

#include <algorithm>
#include <cmath>

#include "gramfiber/errors.hpp"
#include "gramfiber/symmat.hpp"

namespace gramfiber {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

namespace {

// Eigen-decomposition of the Gram matrix G = R R^T. Singular values of the
// row stack are sqrt(max(lambda, 0)).
EighResult gram_eigh(const std::vector<std::vector<double>>& rows) {
  int m = static_cast<int>(rows.size());
  SymMat g(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) g.at(i, j) = dot(rows[i], rows[j]);
  return eigh(g);
}

}  // namespace

int row_rank(const std::vector<std::vector<double>>& rows, double tol) {
  if (rows.empty()) return 0;
  EighResult e = gram_eigh(rows);
  double mx = std::max(e.eigenvalues.front(), 0.0);
  if (mx == 0.0) return 0;
  int r = 0;
  for (double l : e.eigenvalues)
    if (l > tol * tol * mx) ++r;
  return r;
}

std::vector<std::vector<double>> row_orthonormal(
    const std::vector<std::vector<double>>& rows, double tol) {
  std::vector<std::vector<double>> basis;
  if (rows.empty()) return basis;
  size_t dim = rows[0].size();
  EighResult e = gram_eigh(rows);
  double mx = std::max(e.eigenvalues.front(), 0.0);
  if (mx == 0.0) return basis;
  int m = static_cast<int>(rows.size());
  for (int k = 0; k < m; ++k) {
    if (e.eigenvalues[k] <= tol * tol * mx) continue;
    std::vector<double> v(dim, 0.0);
    for (int i = 0; i < m; ++i)
      for (size_t c = 0; c < dim; ++c) v[c] += e.vectors[k][i] * rows[i][c];
    double s = 1.0 / std::sqrt(e.eigenvalues[k]);
    for (double& x : v) x *= s;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<double>> nullspace(
    const std::vector<std::vector<double>>& rows, int ambient_dim, double tol) {
  // Kernel of R = eigenvectors of R^T R with near-zero eigenvalue.
  SymMat g(ambient_dim);
  for (int i = 0; i < ambient_dim; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0;
      for (const auto& r : rows) s += r[i] * r[j];
      g.at(i, j) = s;
    }
  EighResult e = eigh(g);
  double mx = std::max(e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front(), 0.0);
  std::vector<std::vector<double>> basis;
  for (int k = 0; k < ambient_dim; ++k)
    if (e.eigenvalues[k] <= tol * tol * std::max(mx, 1e-300))
      basis.push_back(e.vectors[k]);
  return basis;
}

std::vector<std::vector<double>> intersect_spans(
    const std::vector<std::vector<double>>& a,
    const std::vector<std::vector<double>>& b, int ambient_dim, double tol) {
  auto pa = row_orthonormal(a, tol);
  auto pb = row_orthonormal(b, tol);
  if (pa.empty() || pb.empty()) return {};
  // x in both spans: x = Pa^T u = Pb^T v. Solve [Pa^T, -Pb^T] w = 0.
  int na = static_cast<int>(pa.size()), nb = static_cast<int>(pb.size());
  std::vector<std::vector<double>> stacked(ambient_dim,
                                           std::vector<double>(na + nb, 0.0));
  for (int c = 0; c < na; ++c)
    for (int i = 0; i < ambient_dim; ++i) stacked[i][c] = pa[c][i];
  for (int c = 0; c < nb; ++c)
    for (int i = 0; i < ambient_dim; ++i) stacked[i][na + c] = -pb[c][i];
  auto ker = nullspace(stacked, na + nb, tol);
  std::vector<std::vector<double>> inter;
  for (const auto& w : ker) {
    std::vector<double> x(ambient_dim, 0.0);
    for (int c = 0; c < na; ++c)
      for (int i = 0; i < ambient_dim; ++i) x[i] += w[c] * pa[c][i];
    double nn = norm2(x);
    if (nn < 0.5) continue;  // exact kernel vectors have norm 1/sqrt(2)
    for (double& v : x) v /= nn;
    inter.push_back(std::move(x));
  }
  return row_orthonormal(inter, tol);
}

double max_principal_angle(const std::vector<std::vector<double>>& a,
                           const std::vector<std::vector<double>>& b,
                           double tol) {
  auto pa = row_orthonormal(a, tol);
  auto pb = row_orthonormal(b, tol);
  if (pa.size() != pb.size())
    throw DimensionError("max_principal_angle: spans have different dimensions");
  if (pa.empty()) return 0.0;
  int k = static_cast<int>(pa.size());
  // Smallest singular value of Pa Pb^T = cos of the largest angle.
  SymMat g(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0;
      for (int l = 0; l < k; ++l) s += dot(pa[i], pb[l]) * dot(pa[j], pb[l]);
      g.at(i, j) = s;
    }
  EighResult e = eigh(g);
  double c2 = std::clamp(e.eigenvalues.back(), 0.0, 1.0);
  return std::acos(std::sqrt(c2));
}

}  // namespace gramfiber
