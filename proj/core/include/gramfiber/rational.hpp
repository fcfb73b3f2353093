#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gramfiber {

/// Arbitrary-precision rational scalar. Everything in this header computes
/// exactly; no rounding anywhere.
using Rational = boost::multiprecision::cpp_rational;

Rational rational_from_string(const std::string& s);  // "p/q" or "p"
std::string rational_to_string(const Rational& r);

/// Dense matrix over Rational.
class RationalMat {
 public:
  RationalMat() : rows_(0), cols_(0) {}
  RationalMat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Rational(0)) {}
  static RationalMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rational& at(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  RationalMat transpose() const;
  RationalMat mul(const RationalMat& other) const;
  std::vector<Rational> mul(const std::vector<Rational>& x) const;

  bool is_symmetric() const;

 private:
  int rows_, cols_;
  std::vector<Rational> a_;
};

struct RationalSolveResult {
  bool consistent = false;
  std::vector<Rational> particular;               // one solution (free vars 0)
  std::vector<std::vector<Rational>> nullspace;   // exact kernel basis
};

/// Exact Gaussian elimination for A x = b. Inconsistency is reported in the
/// result, not thrown.
RationalSolveResult rational_solve(const RationalMat& a,
                                   const std::vector<Rational>& b);

struct RationalLdlResult {
  std::vector<int> perm;     // P A P^T = L D L^T, perm[k] = original index
  RationalMat l;             // unit lower triangular
  std::vector<Rational> d;   // diagonal, nonnegative
  int positive_pivots = 0;
};

/// Exact LDL^T of a symmetric psd matrix with symmetric (diagonal)
/// pivoting. A negative pivot, or a zero diagonal with a nonzero residual
/// row, certifies the input is not psd -> NotPsdError.
RationalLdlResult rational_ldl(const RationalMat& a);

Rational rational_det3(const RationalMat& a);
RationalMat rational_adjugate3(const RationalMat& a);

}  // namespace gramfiber
