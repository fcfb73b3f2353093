#include "gramfiber/sextic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gramfiber/dense.hpp"
#include "gramfiber/errors.hpp"
#include "gramfiber/roots.hpp"

namespace gramfiber::sextic {

namespace {

using cplx = std::complex<double>;

// Quadratic truncation of polynomials in (l1, l2, l3): enough to read off
// the degree-2 Taylor part of the 4x4 determinant with affine entries.
struct Poly2 {
  double c0 = 0;
  std::array<double, 3> c1{};
  std::array<double, 6> c2{};  // l1^2, l1l2, l1l3, l2^2, l2l3, l3^2

  static int quad_index(int i, int j) {
    if (i > j) std::swap(i, j);
    if (i == 0) return j;          // 0,1,2
    if (i == 1) return 2 + j;      // 3,4
    return 5;                      // 5
  }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r;
    r.c0 = c0 + o.c0;
    for (int i = 0; i < 3; ++i) r.c1[i] = c1[i] + o.c1[i];
    for (int i = 0; i < 6; ++i) r.c2[i] = c2[i] + o.c2[i];
    return r;
  }
  Poly2 operator-(const Poly2& o) const {
    Poly2 r;
    r.c0 = c0 - o.c0;
    for (int i = 0; i < 3; ++i) r.c1[i] = c1[i] - o.c1[i];
    for (int i = 0; i < 6; ++i) r.c2[i] = c2[i] - o.c2[i];
    return r;
  }
  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    r.c0 = c0 * o.c0;
    for (int i = 0; i < 3; ++i) r.c1[i] = c0 * o.c1[i] + o.c0 * c1[i];
    for (int i = 0; i < 6; ++i) r.c2[i] = c0 * o.c2[i] + o.c0 * c2[i];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.c2[quad_index(i, j)] += c1[i] * o.c1[j];
    return r;
  }
};

Poly2 det3_poly(const std::array<std::array<Poly2, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Poly2 det4_poly(const std::array<std::array<Poly2, 4>, 4>& m) {
  Poly2 acc;
  for (int col = 0; col < 4; ++col) {
    std::array<std::array<Poly2, 3>, 3> minor;
    for (int i = 1; i < 4; ++i) {
      int cc = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == col) continue;
        minor[i - 1][cc++] = m[i][j];
      }
    }
    Poly2 term = m[0][col] * det3_poly(minor);
    if (col % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  }
  return acc;
}

void check_sextic_context(const GramContext& ctx) {
  if (ctx.n() != 2 || ctx.d() != 3)
    throw DimensionError("sextic: context must be (n,d) = (2,3)");
}

// Newton polish of the completion equations at fixed a2; the candidates from
// the quadratic reduction are already close.
bool polish_candidate(std::array<double, 4>& a, const SCoords& s) {
  for (int it = 0; it < 40; ++it) {
    double f1 = 2.0 * (a[0] * a[2] - a[1] * a[1]) - s.l1;
    double f2 = 2.0 * (a[0] * a[3] - a[1] * a[2]) - s.l2;
    double f3 = 2.0 * (a[1] * a[3] - a[2] * a[2]) - s.l3;
    double r2 = f1 * f1 + f2 * f2 + f3 * f3;
    if (r2 < 1e-26 * (1 + s.l1 * s.l1 + s.l2 * s.l2 + s.l3 * s.l3)) return true;
    // Jacobian in (a1, a3, a4) with a2 fixed.
    double j[3][3] = {{2 * a[2], 2 * a[0], 0},
                      {2 * a[3], -2 * a[1], 2 * a[0]},
                      {0, -4 * a[2], 2 * a[1]}};
    double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                 j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                 j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    if (std::abs(det) < 1e-14) return false;
    auto solve = [&](int k) {
      double jj[3][3];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) jj[r][c] = j[r][c];
      jj[0][k] = f1; jj[1][k] = f2; jj[2][k] = f3;
      return (jj[0][0] * (jj[1][1] * jj[2][2] - jj[1][2] * jj[2][1]) -
              jj[0][1] * (jj[1][0] * jj[2][2] - jj[1][2] * jj[2][0]) +
              jj[0][2] * (jj[1][0] * jj[2][1] - jj[1][1] * jj[2][0])) / det;
    };
    double d0 = solve(0), d1 = solve(1), d2 = solve(2);
    a[0] -= d0; a[2] -= d1; a[3] -= d2;
  }
  return false;
}

bool verify_candidate(const std::array<double, 4>& a, const SCoords& s) {
  double scale = std::max({std::abs(s.l1), std::abs(s.l2), std::abs(s.l3)});
  double f1 = 2.0 * (a[0] * a[2] - a[1] * a[1]) - s.l1;
  double f2 = 2.0 * (a[0] * a[3] - a[1] * a[2]) - s.l2;
  double f3 = 2.0 * (a[1] * a[3] - a[2] * a[2]) - s.l3;
  return std::sqrt(f1 * f1 + f2 * f2 + f3 * f3) <= 1e-9 * scale;
}

}  // namespace

SCoords s_coords(const GramContext& ctx, const SymMat& w) {
  check_sextic_context(ctx);
  std::vector<double> lam = ctx.lambda_of(w);
  return {lam[0], lam[1], lam[2]};
}

SymMat s_matrix(const GramContext& ctx, const SCoords& s) {
  check_sextic_context(ctx);
  return ctx.from_lambda({s.l1, s.l2, s.l3});
}

Form sextic_from_zeros(const std::vector<std::complex<double>>& upper_zeros) {
  if (upper_zeros.size() != 3)
    throw DimensionError("sextic_from_zeros: need exactly 3 zeros");
  // prod (t - z_i)(t - conj z_i), expanded over the reals.
  std::vector<cplx> p{1.0};
  for (const cplx& z : upper_zeros) {
    for (const cplx& r : {z, std::conj(z)}) {
      std::vector<cplx> q(p.size() + 1, 0.0);
      for (size_t i = 0; i < p.size(); ++i) {
        q[i + 1] += p[i];
        q[i] -= r * p[i];
      }
      p = std::move(q);
    }
  }
  MonomialOrder o(2, 6);
  Form f(o);
  // p[k] multiplies t^k; homogenize with x^k y^(6-k).
  for (int k = 0; k <= 6; ++k) f.coeffs[o.index_of({k, 6 - k})] = p[k].real();
  return f;
}

Form lemma_sextic_first() {
  return sextic_from_zeros({{1, 6}, {2, 5}, {3, 4}});
}

Form lemma_sextic_second() {
  return sextic_from_zeros({{-4, 2}, {-2, 2}, {-1, 2}});
}

Rank2Set rank2_points(const Form& f) {
  MonomialOrder o(2, 6);
  if (!(f.order == o)) throw DimensionError("rank2_points: need a binary sextic");
  double lead = f.coeffs[o.index_of({6, 0})];
  double fscale = f.norm();
  if (lead <= 1e-12 * fscale)
    throw DegenerateFormError(
        "rank2_points: leading coefficient must be positive (zero at [1:0])");

  std::vector<cplx> pc(7);
  for (int k = 0; k <= 6; ++k) pc[k] = f.coeffs[o.index_of({k, 6 - k})];
  std::vector<cplx> roots = poly_roots(pc);

  double rscale = 0;
  for (const cplx& z : roots) rscale = std::max(rscale, std::abs(z));
  double tol = 1e-7 * (1.0 + rscale);

  std::vector<cplx> upper;
  for (const cplx& z : roots) {
    if (std::abs(z.imag()) <= tol)
      throw DegenerateFormError("rank2_points: real zero detected");
    if (z.imag() > 0) upper.push_back(z);
  }
  if (upper.size() != 3)
    throw DegenerateFormError("rank2_points: zeros do not split into 3 conjugate pairs");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(upper[i] - upper[j]) <= tol)
        throw DegenerateFormError("rank2_points: repeated zeros detected");
  std::sort(upper.begin(), upper.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  GramContext ctx = GramContext::make(2, 3);
  double sq = std::sqrt(lead);

  Rank2Set out;
  out.distinguished = 0;
  for (int g = 0; g < 4; ++g) {
    std::vector<cplx> sel = upper;
    if (g > 0) sel[g - 1] = std::conj(sel[g - 1]);  // flip one pair
    // Monic cubic with the selected zeros.
    cplx s1 = sel[0] + sel[1] + sel[2];
    cplx s2 = sel[0] * sel[1] + sel[0] * sel[2] + sel[1] * sel[2];
    cplx s3 = sel[0] * sel[1] * sel[2];
    // g(x,y) = sq * (x^3 - s1 x^2 y + s2 x y^2 - s3 y^3).
    std::vector<double> c1 = {sq, -sq * s1.real(), sq * s2.real(), -sq * s3.real()};
    std::vector<double> c2 = {0.0, -sq * s1.imag(), sq * s2.imag(), -sq * s3.imag()};
    SymMat point = SymMat::outer(c1) + SymMat::outer(c2);

    Form back = ctx.apply_mu(point);
    double err = 0;
    for (int k = 0; k < o.size(); ++k)
      err += std::pow(back.coeffs[k] - f.coeffs[k], 2);
    if (std::sqrt(err) > 1e-9 * fscale)
      throw ConvergenceError("rank2_points: factorization residual too large");

    out.points.push_back(std::move(point));
    out.groupings.push_back(std::move(sel));
  }
  return out;
}

bool in_s(const SCoords& s) {
  return s.l1 >= 0 && s.l3 >= 0 && s.l2 * s.l2 <= 4.0 * s.l1 * s.l3;
}

bool in_s(const GramContext& ctx, const SymMat& w) {
  return in_s(s_coords(ctx, w));
}

std::optional<Form> rank1_complete(const SCoords& s) {
  double scale = std::max({std::abs(s.l1), std::abs(s.l2), std::abs(s.l3)});
  if (scale == 0.0) throw DimensionError("rank1_complete: w must be nonzero");

  std::vector<std::array<double, 4>> candidates;
  auto push = [&](double a1, double a2, double a3, double a4) {
    candidates.push_back({a1, a2, a3, a4});
  };

  // Branch a1 != 0: substituting a3, a4 leaves a quadratic in t = a1 with
  // a2 = s free: (l3/2) t^2 - (s l2 / 2) t + (l1/2)(l1/2 + s^2) = 0.
  double sg = std::sqrt(scale);
  for (int k = -24; k <= 24; ++k) {
    double a2 = sg * static_cast<double>(k) / 8.0;
    double qa = 0.5 * s.l3;
    double qb = -0.5 * a2 * s.l2;
    double qc = 0.5 * s.l1 * (0.5 * s.l1 + a2 * a2);
    std::vector<double> ts;
    if (std::abs(qa) > 1e-14 * scale) {
      double disc = qb * qb - 4 * qa * qc;
      if (disc >= 0) {
        double r = std::sqrt(disc);
        ts.push_back((-qb + r) / (2 * qa));
        ts.push_back((-qb - r) / (2 * qa));
      }
    } else if (std::abs(qb) > 1e-14 * scale * sg) {
      ts.push_back(-qc / qb);
    } else if (std::abs(qc) <= 1e-13 * scale * scale) {
      ts.push_back(sg);  // equation degenerates; any t works at this a2
      ts.push_back(-sg);
    }
    for (double t : ts) {
      if (std::abs(t) < 1e-9 * sg) continue;
      double a3 = (0.5 * s.l1 + a2 * a2) / t;
      double a4 = (0.5 * s.l2 + a2 * a3) / t;
      push(t, a2, a3, a4);
    }
  }
  // Branch a1 = 0: -2 a2^2 = l1 requires l1 <= 0.
  if (s.l1 <= 0) {
    double a2m = std::sqrt(-0.5 * s.l1);
    for (double a2 : {a2m, -a2m}) {
      if (std::abs(a2) > 1e-12 * sg) {
        double a3 = -0.5 * s.l2 / a2;
        double a4 = (0.5 * s.l3 + a3 * a3) / a2;
        push(0.0, a2, a3, a4);
      } else if (std::abs(s.l2) <= 1e-12 * scale && s.l3 <= 0) {
        push(0.0, 0.0, std::sqrt(-0.5 * s.l3), 0.0);
        push(0.0, 0.0, std::sqrt(-0.5 * s.l3), 1.0);
      }
    }
  }

  for (auto& a : candidates) {
    polish_candidate(a, s);
    if (!verify_candidate(a, s)) continue;
    MonomialOrder o(2, 3);
    return Form(o, {a[0], a[1], a[2], a[3]});
  }
  return std::nullopt;
}

std::optional<Form> rank1_complete(const GramContext& ctx, const SymMat& w) {
  return rank1_complete(s_coords(ctx, w));
}

NcQuadric nc_quadric(const GramContext& ctx, const Form& f, const SymMat& theta) {
  check_sextic_context(ctx);
  Form back = ctx.apply_mu(theta);
  double err = 0;
  for (int k = 0; k < f.order.size(); ++k)
    err += std::pow(back.coeffs[k] - f.coeffs[k], 2);
  if (std::sqrt(err) > 1e-8 * f.norm())
    throw WrongClassError("nc_quadric: theta is not a Gram tensor of f");
  if (rank_tol(theta, 1e-6) != 2)
    throw WrongClassError("nc_quadric: theta must have rank 2");

  const auto& kb = ctx.kernel_basis();
  std::array<std::array<Poly2, 4>, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      m[i][j].c0 = theta.at(i, j);
      for (int k = 0; k < 3; ++k) m[i][j].c1[k] = kb[k].at(i, j);
    }
  Poly2 det = det4_poly(m);

  // At a rank-2 point the constant and linear parts of the expansion vanish.
  double qscale = 0;
  for (double c : det.c2) qscale = std::max(qscale, std::abs(c));
  double low = std::abs(det.c0);
  for (double c : det.c1) low = std::max(low, std::abs(c));
  if (low > 1e-7 * std::max(qscale, 1e-300) * theta.frobenius())
    throw WrongClassError("nc_quadric: lower-order determinant terms do not vanish");

  NcQuadric out;
  out.taylor2 = SymMat(3);
  out.taylor2.at(0, 0) = det.c2[Poly2::quad_index(0, 0)];
  out.taylor2.at(1, 1) = det.c2[Poly2::quad_index(1, 1)];
  out.taylor2.at(2, 2) = det.c2[Poly2::quad_index(2, 2)];
  out.taylor2.at(0, 1) = 0.5 * det.c2[Poly2::quad_index(0, 1)];
  out.taylor2.at(0, 2) = 0.5 * det.c2[Poly2::quad_index(0, 2)];
  out.taylor2.at(1, 2) = 0.5 * det.c2[Poly2::quad_index(1, 2)];

  double d = det3(out.taylor2);
  double hn = out.taylor2.frobenius();
  if (std::abs(d) <= 1e-10 * hn * hn * hn)
    throw DegenerateContactError("nc_quadric: contact quadric is singular");
  out.dual_form = (1.0 / d) * adjugate3(out.taylor2);
  return out;
}

namespace {

// Sign-normalize a contact quadric to signature (1,2) so {x^T A x >= 0} is
// the double cone around its positive eigenvector.
SymMat normalize_cone_matrix(const SymMat& a) {
  EighResult e = eigh(a);
  int pos = 0, neg = 0;
  double mx = std::max(std::abs(e.eigenvalues.front()),
                       std::abs(e.eigenvalues.back()));
  for (double l : e.eigenvalues) {
    if (l > 1e-12 * mx) ++pos;
    if (l < -1e-12 * mx) --neg;
  }
  neg = -neg;
  if (pos == 1 && neg == 2) return a;
  if (pos == 2 && neg == 1) return -1.0 * a;
  throw DegenerateContactError("cones_disjoint: contact quadric is not a cone");
}

// min over mu in [0,1] of lambda_max((1-mu) A + mu B). The joint numerical
// range of two quadratic forms in dimension >= 3 is convex, so a negative
// minimum is equivalent to the double cones meeting only at 0.
double min_pencil_lambda_max(const SymMat& a, const SymMat& b) {
  auto lmax = [&](double mu) {
    SymMat c = (1.0 - mu) * a;
    c += mu * b;
    return eigh(c).eigenvalues.front();
  };
  double best = 1e300, best_mu = 0;
  for (int i = 0; i <= 64; ++i) {
    double mu = static_cast<double>(i) / 64.0;
    double v = lmax(mu);
    if (v < best) { best = v; best_mu = mu; }
  }
  double lo = std::max(0.0, best_mu - 1.0 / 64.0);
  double hi = std::min(1.0, best_mu + 1.0 / 64.0);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = lmax(x1), f2 = lmax(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = lmax(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = lmax(x2);
    }
  }
  return std::min({best, f1, f2});
}

}  // namespace

bool cones_disjoint(const GramContext& ctx, const Form& f) {
  Rank2Set r2 = rank2_points(f);
  std::vector<SymMat> cones;
  for (int g = 0; g < 4; ++g) {
    if (g == r2.distinguished) continue;
    NcQuadric q = nc_quadric(ctx, f, r2.points[g]);
    cones.push_back(normalize_cone_matrix(q.dual_form));
  }

  for (size_t i = 0; i < cones.size(); ++i) {
    for (size_t j = i + 1; j < cones.size(); ++j) {
      double scale = std::max(cones[i].frobenius(), cones[j].frobenius());
      // Certificate search.
      double pencil = min_pencil_lambda_max(cones[i], cones[j]);
      // Sphere sampling cross-check (Fibonacci points).
      bool sampled_common = false;
      const int ns = 100000;
      const double golden = M_PI * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < ns; ++k) {
        double zc = 1.0 - 2.0 * (k + 0.5) / ns;
        double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double ph = golden * k;
        std::vector<double> x = {r * std::cos(ph), r * std::sin(ph), zc};
        double qi = dot(x, cones[i].mul(x));
        double qj = dot(x, cones[j].mul(x));
        if (qi >= 1e-9 * scale && qj >= 1e-9 * scale) {
          sampled_common = true;
          break;
        }
      }
      bool disjoint = pencil < 0.0;
      if (disjoint && sampled_common)
        throw ConvergenceError("cones_disjoint: certificate contradicts sampling");
      if (!disjoint) return false;
    }
  }
  return true;
}

}  // namespace gramfiber::sextic
