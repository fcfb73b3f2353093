#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gramfiber {

using Exponent = std::vector<int>;

/// Fixed graded order of the monomials of degree d in n variables.
///
/// The order is graded-lexicographic (x > y > z > ...) except for
/// (n=3, d=2), which uses the pure-powers-first order
/// [x^2, y^2, z^2, xy, xz, yz].
class MonomialOrder {
 public:
  MonomialOrder(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  const Exponent& exponent(int i) const { return exponents_[i]; }
  const std::vector<Exponent>& exponents() const { return exponents_; }

  /// Index of an exponent vector, or -1 if it does not belong to the order.
  int index_of(const Exponent& e) const;

  /// Human-readable monomial like "x^2*y" (variables x,y,z,x4,...).
  std::string monomial_name(int i) const;

  bool operator==(const MonomialOrder& other) const {
    return n_ == other.n_ && d_ == other.d_;
  }

 private:
  int n_;
  int d_;
  std::vector<Exponent> exponents_;
};

/// Dense coefficient vector of a homogeneous polynomial over a
/// MonomialOrder.
struct Form {
  MonomialOrder order;
  std::vector<double> coeffs;

  Form(MonomialOrder o, std::vector<double> c);
  explicit Form(MonomialOrder o);

  double& operator[](int i) { return coeffs[i]; }
  double operator[](int i) const { return coeffs[i]; }

  double norm() const;

  /// Evaluates at a point (size n).
  double eval(const std::vector<double>& x) const;
};

/// The two orders fixed by the build: (2,3) -> [x^3,x^2y,xy^2,y^3] and
/// (3,2) -> [x^2,y^2,z^2,xy,xz,yz]; graded lex elsewhere.
MonomialOrder monomial_basis(int n, int d);

/// Product of homogeneous forms; result lives in order (n, d1+d2).
Form multiply(const Form& f, const Form& g);

/// Coefficient vectors of f*g for raw coefficient input (shared by the
/// rational pipeline which cannot use Form).
template <typename Scalar>
std::vector<Scalar> multiply_coeffs(const MonomialOrder& oa,
                                    const std::vector<Scalar>& a,
                                    const MonomialOrder& ob,
                                    const std::vector<Scalar>& b,
                                    const MonomialOrder& oout) {
  std::vector<Scalar> out(oout.size(), Scalar(0));
  for (int i = 0; i < oa.size(); ++i) {
    if (a[i] == Scalar(0)) continue;
    for (int j = 0; j < ob.size(); ++j) {
      if (b[j] == Scalar(0)) continue;
      Exponent e = oa.exponent(i);
      const Exponent& f = ob.exponent(j);
      for (size_t k = 0; k < e.size(); ++k) e[k] += f[k];
      out[oout.index_of(e)] += a[i] * b[j];
    }
  }
  return out;
}

/// Form JSON: {"n":3,"d":4,"coeffs":{"400":1.0,"220":2.5}} with
/// exponent-string keys; missing keys are zero.
Form form_from_json(const std::string& json_text);
std::string form_to_json(const Form& f);

}  // namespace gramfiber
