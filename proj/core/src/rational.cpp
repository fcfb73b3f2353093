#include "gramfiber/rational.hpp"

#include <algorithm>

#include "gramfiber/errors.hpp"

namespace gramfiber {

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(s);
    using Int = boost::multiprecision::cpp_int;
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw DimensionError("rational_from_string: zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw DimensionError("rational_from_string: cannot parse '" + s + "'");
  }
}

std::string rational_to_string(const Rational& r) { return r.str(); }

RationalMat RationalMat::identity(int n) {
  RationalMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMat RationalMat::transpose() const {
  RationalMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RationalMat RationalMat::mul(const RationalMat& other) const {
  if (cols_ != other.rows_) throw DimensionError("RationalMat::mul: shape mismatch");
  RationalMat r(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (int j = 0; j < other.cols_; ++j)
        r.at(i, j) += at(i, k) * other.at(k, j);
    }
  return r;
}

std::vector<Rational> RationalMat::mul(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw DimensionError("RationalMat::mul: vector length mismatch");
  std::vector<Rational> y(rows_, Rational(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != 0) y[i] += at(i, j) * x[j];
  return y;
}

bool RationalMat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < i; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

RationalSolveResult rational_solve(const RationalMat& a,
                                   const std::vector<Rational>& b) {
  if (static_cast<int>(b.size()) != a.rows())
    throw DimensionError("rational_solve: rhs length mismatch");
  int m = a.rows(), n = a.cols();

  // Reduced row echelon form of [A | b].
  RationalMat w(m, n + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) w.at(i, j) = a.at(i, j);
    w.at(i, n) = b[i];
  }

  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (w.at(i, col) != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j <= n; ++j) std::swap(w.at(p, j), w.at(row, j));
    Rational inv = Rational(1) / w.at(row, col);
    for (int j = col; j <= n; ++j) w.at(row, j) *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || w.at(i, col) == 0) continue;
      Rational f = w.at(i, col);
      for (int j = col; j <= n; ++j) w.at(i, j) -= f * w.at(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }

  RationalSolveResult out;
  for (int i = row; i < m; ++i)
    if (w.at(i, n) != 0) return out;  // 0 = nonzero: inconsistent
  out.consistent = true;

  std::vector<int> col_pivot_row(n, -1);
  for (size_t k = 0; k < pivot_col.size(); ++k) col_pivot_row[pivot_col[k]] = static_cast<int>(k);

  out.particular.assign(n, Rational(0));
  for (size_t k = 0; k < pivot_col.size(); ++k)
    out.particular[pivot_col[k]] = w.at(static_cast<int>(k), n);

  for (int col = 0; col < n; ++col) {
    if (col_pivot_row[col] >= 0) continue;
    std::vector<Rational> v(n, Rational(0));
    v[col] = 1;
    for (size_t k = 0; k < pivot_col.size(); ++k)
      v[pivot_col[k]] = -w.at(static_cast<int>(k), col);
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

RationalLdlResult rational_ldl(const RationalMat& a) {
  if (!a.is_symmetric()) throw DimensionError("rational_ldl: input not symmetric");
  int n = a.rows();

  RationalMat work = a;
  RationalLdlResult out;
  out.perm.resize(n);
  for (int i = 0; i < n; ++i) out.perm[i] = i;
  out.l = RationalMat::identity(n);
  out.d.assign(n, Rational(0));

  auto swap_rows_cols = [&](int i, int j, int done_cols) {
    if (i == j) return;
    for (int k = 0; k < n; ++k) std::swap(work.at(i, k), work.at(j, k));
    for (int k = 0; k < n; ++k) std::swap(work.at(k, i), work.at(k, j));
    // Only the already-computed part of L moves with the permutation.
    for (int k = 0; k < done_cols; ++k) std::swap(out.l.at(i, k), out.l.at(j, k));
    std::swap(out.perm[i], out.perm[j]);
  };

  for (int k = 0; k < n; ++k) {
    // Symmetric pivoting: take the first nonzero remaining diagonal.
    int p = -1;
    for (int i = k; i < n; ++i)
      if (work.at(i, i) != 0) { p = i; break; }
    if (p < 0) {
      // All remaining diagonals vanish; psd forces the whole block to vanish.
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j)
          if (work.at(i, j) != 0)
            throw NotPsdError(
                "rational_ldl: zero diagonal with nonzero residual block");
      break;
    }
    swap_rows_cols(k, p, k);
    Rational piv = work.at(k, k);
    if (piv < 0) throw NotPsdError("rational_ldl: negative pivot");
    out.d[k] = piv;
    ++out.positive_pivots;
    for (int i = k + 1; i < n; ++i) {
      Rational lik = work.at(i, k) / piv;
      out.l.at(i, k) = lik;
      for (int j = k + 1; j <= i; ++j) {
        Rational upd = work.at(i, j) - lik * work.at(k, j);
        work.at(i, j) = upd;
        work.at(j, i) = upd;
      }
    }
    for (int i = k + 1; i < n; ++i) work.at(i, k) = work.at(k, i) = 0;
  }
  return out;
}

Rational rational_det3(const RationalMat& a) {
  if (a.rows() != 3 || a.cols() != 3) throw DimensionError("rational_det3: need 3x3");
  return a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1)) -
         a.at(0, 1) * (a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0)) +
         a.at(0, 2) * (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0));
}

RationalMat rational_adjugate3(const RationalMat& a) {
  if (a.rows() != 3 || a.cols() != 3)
    throw DimensionError("rational_adjugate3: need 3x3");
  RationalMat r(3, 3);
  r.at(0, 0) = a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1);
  r.at(0, 1) = -(a.at(0, 1) * a.at(2, 2) - a.at(0, 2) * a.at(2, 1));
  r.at(0, 2) = a.at(0, 1) * a.at(1, 2) - a.at(0, 2) * a.at(1, 1);
  r.at(1, 0) = -(a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0));
  r.at(1, 1) = a.at(0, 0) * a.at(2, 2) - a.at(0, 2) * a.at(2, 0);
  r.at(1, 2) = -(a.at(0, 0) * a.at(1, 2) - a.at(0, 2) * a.at(1, 0));
  r.at(2, 0) = a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0);
  r.at(2, 1) = -(a.at(0, 0) * a.at(2, 1) - a.at(0, 1) * a.at(2, 0));
  r.at(2, 2) = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
  return r;
}

}  // namespace gramfiber
