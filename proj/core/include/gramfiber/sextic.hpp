#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "gramfiber/gram.hpp"
#include "gramfiber/monomial.hpp"
#include "gramfiber/symmat.hpp"

namespace gramfiber::sextic {

/// The four rank-2 Gram tensors of a smooth positive binary sextic, one per
/// conjugation-inequivalent grouping of its zeros into a cubic factor.
struct Rank2Set {
  std::vector<SymMat> points;  // 4 psd rank-2 tensors with mu(point) = f
  /// Index of theta_f: the grouping whose selected zeros all have positive
  /// imaginary part.
  int distinguished = 0;
  /// Selected zeros per grouping (3 per point, the factor's zeros).
  std::vector<std::vector<std::complex<double>>> groupings;
};

/// Coordinates of w in ker(mu) as the raw trace pairings
/// lambda_i = tr(w R_i). The completion equations and the membership test
/// below are exact in these coordinates (cross-validated by the sampling
/// oracle in the tests).
struct SCoords {
  double l1 = 0, l2 = 0, l3 = 0;
};

SCoords s_coords(const GramContext& ctx, const SymMat& w);
/// W-matrix with s_coords(result) == s.
SymMat s_matrix(const GramContext& ctx, const SCoords& s);

/// Monic positive sextic with zeros {z, conj(z)} for the three upper
/// half-plane zeros given.
Form sextic_from_zeros(const std::vector<std::complex<double>>& upper_zeros);

/// The two fixed verification sextics, zeros {1+6i, 2+5i, 3+4i} and
/// {-4+2i, -2+2i, -1+2i}.
Form lemma_sextic_first();
Form lemma_sextic_second();

/// Factorization points: f = g * conj(g) gives the Gram tensor of
/// ((g+conj g)/2)^2 + ((g-conj g)/2i)^2, one per root grouping.
Rank2Set rank2_points(const Form& f);

/// Membership in S = {l2^2 <= 4 l1 l3, l1 >= 0, l3 >= 0}: the directions
/// that admit no rank-1 completion, i.e. the normal cone of the vertex.
bool in_s(const SCoords& s);
bool in_s(const GramContext& ctx, const SymMat& w);

/// Real cubic q with s_coords(q x q) equal to the coordinates of w, when
/// one exists; empty exactly on S.
std::optional<Form> rank1_complete(const SCoords& s);
std::optional<Form> rank1_complete(const GramContext& ctx, const SymMat& w);

struct NcQuadric {
  SymMat taylor2;    // quadratic lambda-part of det(theta + sum lambda_i R_i)
  SymMat dual_form;  // its inverse: the normal-cone boundary quadric
};

/// Second-order contact data of the spectrahedron boundary at a rank-2
/// point, extracted by exact truncated expansion of the 4x4 determinant.
NcQuadric nc_quadric(const GramContext& ctx, const Form& f, const SymMat& theta);

/// True iff the double cones of the three non-distinguished rank-2 points
/// pairwise meet only at the origin.
bool cones_disjoint(const GramContext& ctx, const Form& f);

}  // namespace gramfiber::sextic
