#include "gramfiber/apolarity.hpp"

#include <cmath>

#include "gramfiber/dense.hpp"
#include "gramfiber/errors.hpp"

namespace gramfiber {

namespace {

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

constexpr double kRankTol = 1e-8;

}  // namespace

std::vector<double> apolarity_weights(const MonomialOrder& order) {
  std::vector<double> w(order.size());
  double dfac = factorial(order.d());
  for (int i = 0; i < order.size(); ++i) {
    double num = 1;
    for (int e : order.exponent(i)) num *= factorial(e);
    w[i] = num / dfac;
  }
  return w;
}

double apolarity(const Form& f, const Form& g) {
  if (!(f.order == g.order))
    throw DimensionError("apolarity: forms use different monomial orders");
  std::vector<double> w = apolarity_weights(f.order);
  double s = 0;
  // Fixed summation order, so <f,g> and <g,f> agree bit for bit.
  for (int i = 0; i < f.order.size(); ++i) s += w[i] * f.coeffs[i] * g.coeffs[i];
  return s;
}

double sym2_pair(const SymMat& a, const SymMat& b, const MonomialOrder& order) {
  if (a.size() != order.size() || b.size() != order.size())
    throw DimensionError("sym2_pair: tensor size does not match order");
  std::vector<double> w = apolarity_weights(order);
  double s = 0;
  for (int i = 0; i < a.size(); ++i) {
    s += w[i] * w[i] * a.at(i, i) * b.at(i, i);
    for (int j = 0; j < i; ++j)
      s += 2.0 * w[i] * w[j] * a.at(i, j) * b.at(i, j);
  }
  return s;
}

ProdSpaceDims prod_space_dims(const std::vector<Form>& u_basis) {
  if (u_basis.empty()) throw DimensionError("prod_space_dims: empty basis");
  const MonomialOrder& od = u_basis[0].order;
  for (const Form& q : u_basis)
    if (!(q.order == od))
      throw DimensionError("prod_space_dims: mixed monomial orders");

  int r = static_cast<int>(u_basis.size());
  {
    std::vector<std::vector<double>> rows;
    rows.reserve(r);
    for (const Form& q : u_basis) rows.push_back(q.coeffs);
    int rk = row_rank(rows, kRankTol);
    if (rk < r)
      throw DependentBasisError("prod_space_dims: basis is dependent", rk);
  }

  MonomialOrder o2(od.n(), 2 * od.d());

  std::vector<std::vector<double>> prods;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      prods.push_back(multiply(u_basis[i], u_basis[j]).coeffs);
  int dim_u2 = row_rank(prods, kRankTol);

  // dphi(U): (p_1,...,p_r) -> 2 sum p_i q_i, columns indexed by (i, monomial).
  std::vector<std::vector<double>> dphi;
  Form mono(od);
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < od.size(); ++k) {
      std::fill(mono.coeffs.begin(), mono.coeffs.end(), 0.0);
      mono.coeffs[k] = 1.0;
      Form img = multiply(u_basis[i], mono);
      for (double& c : img.coeffs) c *= 2.0;
      dphi.push_back(std::move(img.coeffs));
    }
  }
  int dim_uv = row_rank(dphi, kRankTol);

  ProdSpaceDims out;
  out.dim_u2 = dim_u2;
  out.dim_uv = dim_uv;
  out.nullity = r * od.size() - dim_uv;
  return out;
}

}  // namespace gramfiber
