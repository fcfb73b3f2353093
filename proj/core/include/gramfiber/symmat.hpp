#pragma once

#include <vector>

namespace gramfiber {

/// Dense symmetric matrix with single-triangle storage, so
/// entries(i,j) == entries(j,i) holds structurally. Sized for N <= 36.
class SymMat {
 public:
  SymMat() : n_(0) {}
  explicit SymMat(int n) : n_(n), a_(static_cast<size_t>(n) * (n + 1) / 2, 0.0) {}
  static SymMat identity(int n);
  static SymMat from_rows(const std::vector<std::vector<double>>& rows);
  /// Rank-1 matrix c*c^T.
  static SymMat outer(const std::vector<double>& c);
  /// Symmetrized outer product (c*e^T + e*c^T) / 2.
  static SymMat sym_outer(const std::vector<double>& c,
                          const std::vector<double>& e);

  int size() const { return n_; }

  double& at(int i, int j) { return a_[tri_index(i, j)]; }
  double at(int i, int j) const { return a_[tri_index(i, j)]; }

  SymMat& operator+=(const SymMat& other);
  SymMat& operator*=(double s);
  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }

  std::vector<double> mul(const std::vector<double>& x) const;

  double trace() const;
  double frobenius() const;
  double max_abs() const;

  /// Trace pairing tr(A*B).
  static double trace_pair(const SymMat& a, const SymMat& b);

  /// Row-major dense copy (n*n values).
  std::vector<double> dense() const;

 private:
  size_t tri_index(int i, int j) const {
    if (i < j) std::swap(i, j);
    return static_cast<size_t>(i) * (i + 1) / 2 + j;
  }
  int n_;
  std::vector<double> a_;
};

struct EighResult {
  std::vector<double> eigenvalues;          // descending
  std::vector<std::vector<double>> vectors; // vectors[k] is the k-th eigenvector
};

/// Cyclic Jacobi sweeps. Caps at 100 sweeps and throws ConvergenceError
/// beyond that; symmetric input always converges much earlier.
EighResult eigh(const SymMat& a);

/// Number of eigenvalues with |lambda| > tol * max|lambda|; 0 for the zero
/// matrix.
int rank_tol(const SymMat& a, double tol);

/// Smallest eigenvalue, via eigh.
double min_eigenvalue(const SymMat& a);

/// Adjugate of a 3x3 symmetric matrix: A * adj(A) = det(A) * I, defined
/// for singular A as well.
SymMat adjugate3(const SymMat& a);

double det3(const SymMat& a);

}  // namespace gramfiber
