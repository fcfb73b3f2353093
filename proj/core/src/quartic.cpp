#include "gramfiber/quartic.hpp"

#include <algorithm>
#include <cmath>

#include "gramfiber/dense.hpp"
#include "gramfiber/errors.hpp"

namespace gramfiber::quartic {

namespace {

void check_quartic_context(const GramContext& ctx) {
  if (ctx.n() != 3 || ctx.d() != 2)
    throw DimensionError("quartic: context must be (n,d) = (3,2)");
}

// Zero-eigenvalue band of the classification: values below the lower edge
// count as zero, above the upper edge as nonzero, in between as borderline.
constexpr double kZeroLo = 1e-10;
constexpr double kZeroHi = 1e-8;

}  // namespace

std::string to_string(DirectionTag tag) {
  switch (tag) {
    case DirectionTag::ThreeDimFace: return "ThreeDimFace";
    case DirectionTag::ExtremeByRank1: return "ExtremeByRank1";
    case DirectionTag::ExtremeBySplit: return "ExtremeBySplit";
    case DirectionTag::ExtremeBorderline: return "ExtremeBorderline";
  }
  return "?";
}

SymMat q_of_lambda(const std::vector<double>& lambda) {
  if (lambda.size() != 6) throw DimensionError("q_of_lambda: need 6 coordinates");
  SymMat q(3);
  q.at(0, 0) = lambda[2];
  q.at(1, 1) = lambda[1];
  q.at(2, 2) = lambda[0];
  q.at(0, 1) = -lambda[5];
  q.at(0, 2) = -lambda[4];
  q.at(1, 2) = -lambda[3];
  return q;
}

std::vector<double> lambda_of_q(const SymMat& q) {
  if (q.size() != 3) throw DimensionError("lambda_of_q: need a 3x3 matrix");
  return {q.at(2, 2), q.at(1, 1), q.at(0, 0),
          -q.at(1, 2), -q.at(0, 2), -q.at(0, 1)};
}

SymMat q_of_w(const GramContext& ctx, const SymMat& w) {
  check_quartic_context(ctx);
  return q_of_lambda(ctx.lambda_of(w));
}

SymMat w_of_q(const GramContext& ctx, const SymMat& q) {
  check_quartic_context(ctx);
  return ctx.from_lambda(lambda_of_q(q));
}

DirectionClass classify_lambda(const std::vector<double>& lambda) {
  DirectionClass out;
  out.q = q_of_lambda(lambda);
  out.det_q = det3(out.q);

  EighResult e = eigh(out.q);
  double mx = 0;
  for (double l : e.eigenvalues) mx = std::max(mx, std::abs(l));
  if (mx == 0.0) throw DimensionError("classify: direction has no W-component");

  bool borderline = false;
  int nonzero = 0;
  for (double l : e.eigenvalues) {
    double rel = std::abs(l) / mx;
    if (rel > kZeroHi) ++nonzero;
    else if (rel > kZeroLo) borderline = true;
  }
  out.rank_q = nonzero;
  if (borderline) {
    out.tag = DirectionTag::ExtremeBorderline;
    return out;
  }
  if (nonzero == 1) {
    out.tag = DirectionTag::ThreeDimFace;
  } else if (nonzero == 2) {
    out.tag = DirectionTag::ExtremeBySplit;
  } else {
    out.tag = (out.det_q > 0) ? DirectionTag::ExtremeByRank1
                              : DirectionTag::ExtremeBySplit;
  }
  return out;
}

DirectionClass classify(const GramContext& ctx, const SymMat& w) {
  check_quartic_context(ctx);
  return classify_lambda(ctx.lambda_of(w));
}

Form rank1_complete_lambda(const std::vector<double>& lambda) {
  SymMat q = q_of_lambda(lambda);
  double d = det3(q);
  double qn = q.frobenius();
  if (d <= 1e-10 * qn * qn * qn)
    throw WrongClassError("rank1_complete: det Q(w) is not positive");
  SymMat a = adjugate3(q);
  MonomialOrder o(3, 2);
  Form out(o, {a.at(0, 0), a.at(1, 1), a.at(2, 2),
               2.0 * a.at(0, 1), 2.0 * a.at(0, 2), 2.0 * a.at(1, 2)});

  // Projection identity: lambda(q x q) = det(Q) * lambda(w).
  static const GramContext ctx = GramContext::make(3, 2);
  std::vector<double> proj = ctx.lambda_of(SymMat::outer(out.coeffs));
  double err = 0, scale = 0;
  for (int i = 0; i < 6; ++i) {
    err = std::max(err, std::abs(proj[i] - d * lambda[i]));
    scale = std::max(scale, std::abs(d * lambda[i]));
  }
  if (err > 1e-8 * scale)
    throw ConvergenceError("rank1_complete: projection identity failed");
  return out;
}

Form rank1_complete(const GramContext& ctx, const SymMat& w) {
  check_quartic_context(ctx);
  return rank1_complete_lambda(ctx.lambda_of(w));
}

std::pair<SymMat, SymMat> split_psd_pair(const SymMat& qw) {
  if (qw.size() != 3) throw DimensionError("split_psd_pair: need a 3x3 matrix");
  EighResult e = eigh(qw);
  double mx = std::max(std::abs(e.eigenvalues.front()),
                       std::abs(e.eigenvalues.back()));
  if (mx == 0.0) throw WrongClassError("split_psd_pair: zero matrix");
  const double tol = 1e-9 * mx;

  // Indices of nonzero eigenvalues, descending, zeros last.
  std::vector<int> nz, zero;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(e.eigenvalues[i]) > tol) nz.push_back(i);
    else zero.push_back(i);
  }

  // First summand of the diagonal recipe per eigenvalue-sign case; the
  // complementary diagonal (d - r1) then also has positive determinant:
  //   (+,+,-): (d1/2, 2 d2, -d3) + (d1/2, -d2, 2 d3)
  //   (-,-,-): (2 d1, -d2, d3/2) + (-d1, 2 d2, d3/2)
  //   rank 2 : (d1/2, 2 d2, 1) + (d1/2, -d2, -1), middle entries swapped
  //            when the signs are (+,-).
  double r1[3];
  if (nz.size() == 3) {
    double d1 = e.eigenvalues[nz[0]], d2 = e.eigenvalues[nz[1]],
           d3 = e.eigenvalues[nz[2]];
    int negs = (d1 < 0) + (d2 < 0) + (d3 < 0);
    if (negs == 1) {
      r1[0] = d1 / 2; r1[1] = 2 * d2; r1[2] = -d3;
    } else if (negs == 3) {
      r1[0] = 2 * d1; r1[1] = -d2; r1[2] = d3 / 2;
    } else {
      throw WrongClassError("split_psd_pair: det Q > 0 is not the split class");
    }
  } else if (nz.size() == 2) {
    double d1 = e.eigenvalues[nz[0]], d2 = e.eigenvalues[nz[1]];
    if (d1 > 0 && d2 < 0) {
      r1[0] = d1 / 2; r1[1] = -d2; r1[2] = 1;
    } else {
      // (+,+) and (-,-) share the same recipe.
      r1[0] = d1 / 2; r1[1] = 2 * d2; r1[2] = 1;
    }
  } else {
    throw WrongClassError("split_psd_pair: rank Q <= 1 cannot be split");
  }

  std::vector<int> order = nz;
  for (int z : zero) order.push_back(z);
  SymMat q1(3);
  for (int k = 0; k < 3; ++k) {
    const std::vector<double>& v = e.vectors[order[k]];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) q1.at(i, j) += r1[k] * v[i] * v[j];
  }
  // Exact sum: the second summand absorbs all conjugation round-off.
  SymMat q2 = qw;
  q2 += -1.0 * q1;

  double det1 = det3(q1), det2 = det3(q2);
  if (det1 <= 0 || det2 <= 0)
    throw ConvergenceError("split_psd_pair: recipe produced nonpositive determinant");
  return {q1, q2};
}

std::vector<SymMat> face_direction_subspace_lambda(
    const GramContext& ctx, const std::vector<double>& lambda) {
  check_quartic_context(ctx);
  SymMat q = q_of_lambda(lambda);
  if (rank_tol(q, 1e-8) != 1)
    throw WrongClassError("face_direction_subspace: rank Q(w) must be 1");

  EighResult e = eigh(q);
  int top = (std::abs(e.eigenvalues.front()) >= std::abs(e.eigenvalues.back()))
                ? 0 : 2;
  std::vector<double> v = e.vectors[top];
  // Deterministic normalization: first nonzero entry 1.
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > 1e-9) {
      double s = 1.0 / v[i];
      for (double& x : v) x *= s;
      break;
    }
  }

  // {w' : Q(w') v = 0}: three linear conditions on the six coordinates.
  // Rows follow Q(w')v with Q = [[l3,-l6,-l5],[-l6,l2,-l4],[-l5,-l4,l1]].
  std::vector<std::vector<double>> rows(3, std::vector<double>(6, 0.0));
  rows[0][2] = v[0]; rows[0][5] = -v[1]; rows[0][4] = -v[2];
  rows[1][5] = -v[0]; rows[1][1] = v[1]; rows[1][3] = -v[2];
  rows[2][4] = -v[0]; rows[2][3] = -v[1]; rows[2][0] = v[2];
  auto ker = nullspace(rows, 6, 1e-10);

  std::vector<SymMat> out;
  out.reserve(ker.size());
  for (const auto& lam : ker) out.push_back(ctx.from_lambda(lam));
  return out;
}

std::vector<SymMat> face_direction_subspace(const GramContext& ctx,
                                            const SymMat& w) {
  return face_direction_subspace_lambda(ctx, ctx.lambda_of(w));
}

RationalCertificateResult rational_certificate(
    const GramContext& ctx, const std::vector<Rational>& f_coeffs,
    const std::vector<Rational>& lambda) {
  check_quartic_context(ctx);
  if (lambda.size() != 6)
    throw DimensionError("rational_certificate: need 6 lambda coordinates");
  if (static_cast<int>(f_coeffs.size()) != ctx.dim_2d())
    throw DimensionError("rational_certificate: f needs 15 coefficients");

  RationalCertificateResult out;

  RationalMat q(3, 3);
  q.at(0, 0) = lambda[2]; q.at(1, 1) = lambda[1]; q.at(2, 2) = lambda[0];
  q.at(0, 1) = q.at(1, 0) = -lambda[5];
  q.at(0, 2) = q.at(2, 0) = -lambda[4];
  q.at(1, 2) = q.at(2, 1) = -lambda[3];
  if (rational_det3(q) <= 0)
    throw WrongClassError("rational_certificate: det Q(w) must be positive");

  RationalMat a = rational_adjugate3(q);
  // Quadric of adj(Q) over [x^2, y^2, z^2, xy, xz, yz].
  std::vector<Rational> qc = {a.at(0, 0), a.at(1, 1), a.at(2, 2),
                              2 * a.at(0, 1), 2 * a.at(0, 2), 2 * a.at(1, 2)};

  // U = span(q)^perp under the apolarity pairing (weights 1,1,1,1/2,1/2,1/2).
  RationalMat row(1, 6);
  const Rational half(1, 2);
  for (int i = 0; i < 6; ++i) row.at(0, i) = (i < 3 ? Rational(1) : half) * qc[i];
  RationalSolveResult perp = rational_solve(row, {Rational(0)});
  if (perp.nullspace.size() != 5) {
    out.reason = "orthogonal complement does not have dimension 5";
    return out;
  }
  const auto& u = perp.nullspace;

  // Solve mu(theta) = f over theta in Sym^2(U): 15 cell unknowns.
  const MonomialOrder& od = ctx.order_d();
  const MonomialOrder& o2 = ctx.order_2d();
  RationalMat sys(15, 15);
  int col = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j, ++col) {
      std::vector<Rational> prod = multiply_coeffs(od, u[i], od, u[j], o2);
      for (int r = 0; r < 15; ++r) sys.at(r, col) = prod[r];
    }
  RationalSolveResult sol = rational_solve(sys, f_coeffs);
  if (!sol.consistent) {
    out.reason = "f is not a sum of squares from the orthogonal complement";
    return out;
  }
  if (!sol.nullspace.empty()) {
    out.reason = "Gram tensor with the prescribed image is not unique";
    return out;
  }

  RationalMat theta(6, 6);
  col = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j, ++col) {
      const Rational& y = sol.particular[col];
      if (y == 0) continue;
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) {
          Rational add = y * (u[i][r] * u[j][c] + u[j][r] * u[i][c]) / 2;
          theta.at(r, c) += add;
        }
    }

  // Exactness guard: mu(theta) must reproduce f bit for bit.
  std::vector<Rational> back = ctx.apply_mu_rational(theta);
  for (int r = 0; r < 15; ++r)
    if (back[r] != f_coeffs[r]) {
      out.reason = "internal: mu(theta) != f";
      return out;
    }

  RationalLdlResult ldl;
  try {
    ldl = rational_ldl(theta);
  } catch (const NotPsdError&) {
    out.reason = "Gram tensor is not psd: f is outside the required interior";
    return out;
  }
  if (ldl.positive_pivots != 5) {
    out.reason = "Gram tensor has rank " + std::to_string(ldl.positive_pivots) +
                 ", not 5: f is outside the required interior";
    return out;
  }

  // theta = sum_k d_k g_k x g_k with g_k[perm[i]] = L(i,k).
  RationalCertificate cert;
  cert.theta = theta;
  std::vector<Rational> acc(15, Rational(0));
  for (int k = 0; k < 6; ++k) {
    if (ldl.d[k] == 0) continue;
    std::vector<Rational> g(6, Rational(0));
    for (int i = 0; i < 6; ++i) g[ldl.perm[i]] = ldl.l.at(i, k);
    std::vector<Rational> sq = multiply_coeffs(od, g, od, g, o2);
    for (int r = 0; r < 15; ++r) acc[r] += ldl.d[k] * sq[r];
    cert.sos.emplace_back(ldl.d[k], std::move(g));
  }
  cert.f_check = (acc == f_coeffs);
  if (!cert.f_check) {
    out.reason = "internal: sum of squares does not reproduce f";
    return out;
  }
  out.ok = true;
  out.cert = std::move(cert);
  return out;
}

}  // namespace gramfiber::quartic
