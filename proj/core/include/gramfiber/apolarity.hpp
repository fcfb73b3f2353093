#pragma once

#include <vector>

#include "gramfiber/monomial.hpp"
#include "gramfiber/symmat.hpp"

namespace gramfiber {

/// Apolarity pairing <f,g> = (1/d!) f(del)(g) on forms of equal degree.
/// Symmetric and positive definite; monomials are orthogonal with
/// <x^a, x^a> = a! / d!.
double apolarity(const Form& f, const Form& g);

/// Diagonal of the apolarity Gram matrix of a monomial order.
std::vector<double> apolarity_weights(const MonomialOrder& order);

/// Induced scalar product on Sym^2 R[x]_d: <p(x)p, q(x)q> = <p,q>^2 on
/// rank-1 tensors, i.e. tr(M*A*M*B) with M the apolarity Gram matrix.
/// Tensor convention: a form with coefficient vector c is the rank-1
/// tensor c*c^T.
double sym2_pair(const SymMat& a, const SymMat& b, const MonomialOrder& order);

struct ProdSpaceDims {
  int dim_u2;   // dim span{q_i q_j}
  int dim_uv;   // rank of (p_1,...,p_r) -> 2 sum p_i q_i
  int nullity;  // r * dim R[x]_d - dim_uv
};

/// Dimensions of U^2 and U*R[x]_d for U = span(U_basis), together with the
/// kernel dimension of the multiplication map. Throws DependentBasisError
/// (carrying the numeric rank) when the basis is dependent.
ProdSpaceDims prod_space_dims(const std::vector<Form>& u_basis);

}  // namespace gramfiber
