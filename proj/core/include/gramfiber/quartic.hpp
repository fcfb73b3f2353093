#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gramfiber/gram.hpp"
#include "gramfiber/monomial.hpp"
#include "gramfiber/rational.hpp"
#include "gramfiber/symmat.hpp"

namespace gramfiber::quartic {

/// Fiber-body face type of a kernel direction, decided by the rank and
/// determinant of Q(w).
enum class DirectionTag {
  ThreeDimFace,       // rank Q = 1
  ExtremeByRank1,     // det Q > 0: rank-1 completion exists
  ExtremeBySplit,     // det Q < 0 or rank Q = 2: psd pair splitting
  ExtremeBorderline,  // numerically ambiguous eigenvalues
};

std::string to_string(DirectionTag tag);

struct DirectionClass {
  DirectionTag tag = DirectionTag::ExtremeBorderline;
  SymMat q;          // Q(w)
  double det_q = 0;
  int rank_q = 0;
};

/// Q(w) = [[l3,-l6,-l5],[-l6,l2,-l4],[-l5,-l4,l1]] from the lambda
/// coordinates of w.
SymMat q_of_lambda(const std::vector<double>& lambda);
std::vector<double> lambda_of_q(const SymMat& q);
SymMat q_of_w(const GramContext& ctx, const SymMat& w);
SymMat w_of_q(const GramContext& ctx, const SymMat& q);

DirectionClass classify(const GramContext& ctx, const SymMat& w);
DirectionClass classify_lambda(const std::vector<double>& lambda);

/// For det Q(w) > 0: the quadric of adj(Q(w)), whose rank-1 tensor projects
/// back to det(Q(w)) * w. Throws WrongClassError below the det threshold.
Form rank1_complete(const GramContext& ctx, const SymMat& w);
Form rank1_complete_lambda(const std::vector<double>& lambda);

/// For the split class: Q(w) = Q1 + Q2 with det Q1 > 0, det Q2 > 0, by the
/// eigenvalue-sign diagonal recipes conjugated back. The sum is exact by
/// construction (Q2 = Q(w) - Q1).
std::pair<SymMat, SymMat> split_psd_pair(const SymMat& qw);

/// For rank Q(w) = 1, Q = e*v*v^T: the three-dimensional direction space of
/// the fiber-body face, {w' : Q(w') v = 0}. For w = R_1 this is
/// span(R_2, R_3, R_6).
std::vector<SymMat> face_direction_subspace(const GramContext& ctx,
                                            const SymMat& w);
std::vector<SymMat> face_direction_subspace_lambda(
    const GramContext& ctx, const std::vector<double>& lambda);

struct RationalCertificate {
  RationalMat theta;  // exact rank-5 psd Gram tensor of f
  std::vector<std::pair<Rational, std::vector<Rational>>> sos;  // weight, form
  bool f_check = false;  // sum w_i f_i^2 == f verified exactly
};

struct RationalCertificateResult {
  bool ok = false;
  std::string reason;  // set when the precondition fails
  RationalCertificate cert;
};

/// Exact pipeline for rational f and rational lambda with det Q > 0:
/// rational U = span(q)^perp, exact solve of mu(theta) = f with
/// im(theta) in U, psd verification via LDL^T, and the induced exact
/// weighted sum-of-squares representation. A non-psd or rank != 5 solution
/// is reported, not thrown.
RationalCertificateResult rational_certificate(
    const GramContext& ctx, const std::vector<Rational>& f_coeffs,
    const std::vector<Rational>& lambda);

}  // namespace gramfiber::quartic
