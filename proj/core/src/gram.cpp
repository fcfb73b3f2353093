#include "gramfiber/gram.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "gramfiber/dense.hpp"
#include "gramfiber/errors.hpp"

namespace gramfiber {

namespace {

constexpr double kSpanTol = 1e-8;
constexpr double kFaceRankTol = 1e-6;

// Kernel bases as fixed in the two fully supported cases, over the orders
// [x^3, x^2 y, x y^2, y^3] and [x^2, y^2, z^2, xy, xz, yz].
std::vector<SymMat> sextic_kernel() {
  auto m = [](std::vector<std::vector<double>> rows) {
    return SymMat::from_rows(rows);
  };
  return {
      m({{0, 0, 1, 0}, {0, -2, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}}),
      m({{0, 0, 0, 1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}}),
      m({{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -2, 0}, {0, 1, 0, 0}}),
  };
}

std::vector<SymMat> quartic_kernel() {
  std::vector<SymMat> r(6, SymMat(6));
  r[0].at(0, 1) = 1; r[0].at(3, 3) = -2;
  r[1].at(0, 2) = 1; r[1].at(4, 4) = -2;
  r[2].at(1, 2) = 1; r[2].at(5, 5) = -2;
  r[3].at(0, 5) = 1; r[3].at(3, 4) = -1;
  r[4].at(1, 4) = 1; r[4].at(3, 5) = -1;
  r[5].at(2, 3) = 1; r[5].at(4, 5) = -1;
  return r;
}

}  // namespace

std::vector<double> svec(const SymMat& m) {
  const double rt2 = std::sqrt(2.0);
  int n = m.size();
  std::vector<double> v;
  v.reserve(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    v.push_back(m.at(i, i));
    for (int j = 0; j < i; ++j) v.push_back(rt2 * m.at(i, j));
  }
  return v;
}

SymMat unsvec(const std::vector<double>& v, int n) {
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  SymMat m(n);
  size_t k = 0;
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = v[k++];
    for (int j = 0; j < i; ++j) m.at(i, j) = inv_rt2 * v[k++];
  }
  return m;
}

GramContext::GramContext(MonomialOrder od, MonomialOrder o2d)
    : order_d_(std::move(od)), order_2d_(std::move(o2d)) {}

GramContext GramContext::make(int n, int d) {
  if (n < 1 || d < 1) throw DimensionError("make_context: need n, d >= 1");
  MonomialOrder od(n, d), o2d(n, 2 * d);
  if (od.size() > 36)
    throw DimensionError("make_context: dim R[x]_d exceeds the supported 36");

  GramContext ctx(od, o2d);
  const int N = ctx.dim_d(), M = ctx.dim_2d();

  // mu over cells (i <= j): coefficient of m_i m_j picks up the number of
  // ordered pairs realizing the cell.
  ctx.mu_.assign(M, std::vector<double>(N * (N + 1) / 2, 0.0));
  {
    int cell = 0;
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j, ++cell) {
        Exponent e = od.exponent(i);
        for (int v = 0; v < n; ++v) e[v] += od.exponent(j)[v];
        ctx.mu_[o2d.index_of(e)][cell] = (i == j) ? 1.0 : 2.0;
      }
    }
  }

  // Ordered-pair counts per cell, for the v_rep section.
  ctx.cell_pair_count_.assign(N * (N + 1) / 2, 0);
  {
    std::vector<int> count_by_gamma(M, 0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Exponent e = od.exponent(i);
        for (int v = 0; v < n; ++v) e[v] += od.exponent(j)[v];
        ++count_by_gamma[o2d.index_of(e)];
      }
    int cell = 0;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j, ++cell) {
        Exponent e = od.exponent(i);
        for (int v = 0; v < n; ++v) e[v] += od.exponent(j)[v];
        ctx.cell_pair_count_[cell] = count_by_gamma[o2d.index_of(e)];
      }
  }

  ctx.apol_weights_ = apolarity_weights(od);

  if (n == 2 && d == 3) {
    ctx.kernel_ = sextic_kernel();
    ctx.regime_ = PairingRegime::Trace;
  } else if (n == 3 && d == 2) {
    ctx.kernel_ = quartic_kernel();
    ctx.regime_ = PairingRegime::Apolar;
  } else {
    // Integer nullspace of mu via exact elimination.
    ctx.regime_ = PairingRegime::Trace;
    RationalMat mu_rat(M, N * (N + 1) / 2);
    for (int r = 0; r < M; ++r)
      for (int c = 0; c < N * (N + 1) / 2; ++c)
        mu_rat.at(r, c) = Rational(static_cast<int>(ctx.mu_[r][c]));
    RationalSolveResult ns =
        rational_solve(mu_rat, std::vector<Rational>(M, Rational(0)));
    // Exact Gram-Schmidt in the trace pairing; the lambda machinery needs an
    // orthogonal basis. Cell weights: 1 on the diagonal, 2 off it.
    std::vector<Rational> cell_weight;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) cell_weight.push_back(Rational(i == j ? 1 : 2));
    auto tr_pair = [&](const std::vector<Rational>& a,
                       const std::vector<Rational>& b) {
      Rational s = 0;
      for (size_t c = 0; c < a.size(); ++c) s += cell_weight[c] * a[c] * b[c];
      return s;
    };
    std::vector<std::vector<Rational>> ortho;
    for (auto vec : ns.nullspace) {
      for (const auto& prev : ortho) {
        Rational proj = tr_pair(vec, prev) / tr_pair(prev, prev);
        for (size_t c = 0; c < vec.size(); ++c) vec[c] -= proj * prev[c];
      }
      ortho.push_back(std::move(vec));
    }
    for (const auto& vec : ortho) {
      boost::multiprecision::cpp_int lcm_den = 1;
      for (const Rational& q : vec)
        lcm_den = boost::multiprecision::lcm(lcm_den,
                                             boost::multiprecision::denominator(q));
      SymMat k(N);
      int cell = 0;
      for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j, ++cell) {
          Rational scaled = vec[cell] * Rational(lcm_den);
          k.at(i, j) = static_cast<double>(
              boost::multiprecision::numerator(scaled).convert_to<double>());
        }
      ctx.kernel_.push_back(k);
    }
  }

  // Construction invariants: mu kills the kernel basis exactly, and the
  // basis is pairwise orthogonal in the regime pairing.
  for (const SymMat& k : ctx.kernel_) {
    Form img = ctx.apply_mu(k);
    for (double c : img.coeffs)
      if (c != 0.0)
        throw DimensionError("make_context: kernel basis fails mu = 0");
  }
  if (static_cast<int>(ctx.kernel_.size()) != ctx.dim_sym2() - M)
    throw DimensionError("make_context: kernel dimension mismatch");
  for (size_t i = 0; i < ctx.kernel_.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      double rel = std::sqrt(ctx.pair(ctx.kernel_[i], ctx.kernel_[i]) *
                             ctx.pair(ctx.kernel_[j], ctx.kernel_[j]));
      if (std::abs(ctx.pair(ctx.kernel_[i], ctx.kernel_[j])) > 1e-12 * rel)
        throw DimensionError("make_context: kernel basis not orthogonal");
    }

  for (const SymMat& k : ctx.kernel_) {
    ctx.pair_basis_.push_back(ctx.pair(k, k));
    std::vector<double> lam = ctx.lambda_of(k);
    ctx.lambda_basis_.push_back(lam[ctx.lambda_basis_.size()]);
  }
  return ctx;
}

RationalMat GramContext::mu_matrix_rational() const {
  int rows = dim_2d(), cols = dim_sym2();
  RationalMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m.at(r, c) = Rational(static_cast<int>(mu_[r][c]));
  return m;
}

Form GramContext::apply_mu(const SymMat& theta) const {
  if (theta.size() != dim_d())
    throw DimensionError("apply_mu: tensor size mismatch");
  Form out(order_2d_);
  int cell = 0;
  for (int i = 0; i < dim_d(); ++i)
    for (int j = i; j < dim_d(); ++j, ++cell) {
      double v = theta.at(i, j) * ((i == j) ? 1.0 : 2.0);
      if (v == 0.0) continue;
      Exponent e = order_d_.exponent(i);
      for (int k = 0; k < n(); ++k) e[k] += order_d_.exponent(j)[k];
      out.coeffs[order_2d_.index_of(e)] += v;
    }
  return out;
}

std::vector<Rational> GramContext::apply_mu_rational(const RationalMat& theta) const {
  if (theta.rows() != dim_d() || theta.cols() != dim_d())
    throw DimensionError("apply_mu_rational: tensor size mismatch");
  std::vector<Rational> out(dim_2d(), Rational(0));
  for (int i = 0; i < dim_d(); ++i)
    for (int j = 0; j < dim_d(); ++j) {
      if (theta.at(i, j) == 0) continue;
      Exponent e = order_d_.exponent(i);
      for (int k = 0; k < n(); ++k) e[k] += order_d_.exponent(j)[k];
      out[order_2d_.index_of(e)] += theta.at(i, j);
    }
  return out;
}

SymMat GramContext::v_rep(const Form& f) const {
  if (!(f.order == order_2d_))
    throw DimensionError("v_rep: form is not in R[x]_{2d}");
  SymMat g(dim_d());
  int cell = 0;
  for (int i = 0; i < dim_d(); ++i)
    for (int j = i; j < dim_d(); ++j, ++cell) {
      Exponent e = order_d_.exponent(i);
      for (int k = 0; k < n(); ++k) e[k] += order_d_.exponent(j)[k];
      g.at(i, j) = f.coeffs[order_2d_.index_of(e)] / cell_pair_count_[cell];
    }
  return g;
}

RationalMat GramContext::v_rep_rational(const std::vector<Rational>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != dim_2d())
    throw DimensionError("v_rep_rational: coefficient length mismatch");
  RationalMat g(dim_d(), dim_d());
  int cell = 0;
  for (int i = 0; i < dim_d(); ++i)
    for (int j = i; j < dim_d(); ++j, ++cell) {
      Exponent e = order_d_.exponent(i);
      for (int k = 0; k < n(); ++k) e[k] += order_d_.exponent(j)[k];
      Rational v = coeffs[order_2d_.index_of(e)] / cell_pair_count_[cell];
      g.at(i, j) = v;
      g.at(j, i) = v;
    }
  return g;
}

double GramContext::pair(const SymMat& a, const SymMat& b) const {
  if (regime_ == PairingRegime::Trace) return SymMat::trace_pair(a, b);
  return sym2_pair(a, b, order_d_);
}

std::vector<double> GramContext::lambda_of(const SymMat& theta) const {
  std::vector<double> lam(kernel_.size());
  for (size_t i = 0; i < kernel_.size(); ++i) {
    double p = pair(theta, kernel_[i]);
    lam[i] = (regime_ == PairingRegime::Apolar) ? 0.5 * p : p;
  }
  return lam;
}

std::vector<Rational> GramContext::lambda_of_rational(const RationalMat& theta) const {
  const int N = dim_d();
  if (theta.rows() != N || theta.cols() != N)
    throw DimensionError("lambda_of_rational: size mismatch");
  // Exact apolarity weights: a! / d! per monomial.
  std::vector<Rational> w(N);
  auto factorial = [](int k) {
    boost::multiprecision::cpp_int f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  for (int i = 0; i < N; ++i) {
    boost::multiprecision::cpp_int num = 1;
    for (int e : order_d_.exponent(i)) num *= factorial(e);
    w[i] = Rational(num, factorial(d()));
  }
  std::vector<Rational> lam(kernel_.size(), Rational(0));
  for (size_t k = 0; k < kernel_.size(); ++k) {
    Rational s = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double r = kernel_[k].at(i, j);
        if (r == 0.0) continue;
        Rational rij(static_cast<int>(r));
        if (regime_ == PairingRegime::Apolar)
          s += w[i] * w[j] * theta.at(i, j) * rij;
        else
          s += theta.at(i, j) * rij;
      }
    lam[k] = (regime_ == PairingRegime::Apolar) ? s / 2 : s;
  }
  return lam;
}

SymMat GramContext::from_lambda(const std::vector<double>& lambda) const {
  if (lambda.size() != kernel_.size())
    throw DimensionError("from_lambda: coordinate count mismatch");
  SymMat w(dim_d());
  for (size_t i = 0; i < kernel_.size(); ++i)
    w += (lambda[i] / lambda_basis_[i]) * kernel_[i];
  return w;
}

std::vector<double> GramContext::pr_w(const SymMat& theta) const {
  std::vector<double> lam = lambda_of(theta);
  for (size_t i = 0; i < lam.size(); ++i) lam[i] /= lambda_basis_[i];
  return lam;
}

SymMat GramContext::w_component(const SymMat& theta) const {
  std::vector<double> c = pr_w(theta);
  SymMat w(dim_d());
  for (size_t i = 0; i < kernel_.size(); ++i) w += c[i] * kernel_[i];
  return w;
}

SymMat GramContext::dir_to_objective(const SymMat& w) const {
  SymMat ww = w_component(w);
  if (regime_ == PairingRegime::Trace) return ww;
  SymMat c(dim_d());
  for (int i = 0; i < dim_d(); ++i)
    for (int j = 0; j <= i; ++j)
      c.at(i, j) = apol_weights_[i] * apol_weights_[j] * ww.at(i, j);
  return c;
}

std::string GramContext::dump_json() const {
  nlohmann::ordered_json j;
  j["n"] = n();
  j["d"] = d();
  j["dim_d"] = dim_d();
  j["dim_2d"] = dim_2d();
  j["dim_sym2"] = dim_sym2();
  j["dim_w"] = dim_w();
  j["regime"] = (regime_ == PairingRegime::Trace) ? "trace" : "apolar";
  j["monomials_d"] = nlohmann::ordered_json::array();
  for (int i = 0; i < dim_d(); ++i)
    j["monomials_d"].push_back(order_d_.monomial_name(i));
  j["mu"] = mu_;
  auto mats = nlohmann::ordered_json::array();
  for (const SymMat& k : kernel_) {
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < k.size(); ++i) {
      auto row = nlohmann::ordered_json::array();
      for (int jj = 0; jj < k.size(); ++jj) row.push_back(k.at(i, jj));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  j["kernel_basis"] = mats;
  return j.dump();
}

NcDims nc_dim(const std::vector<Form>& u_basis, const GramContext& ctx) {
  ProdSpaceDims pd = prod_space_dims(u_basis);
  int r = static_cast<int>(u_basis.size());
  NcDims out;
  out.ambient = ctx.dim_sym2() - pd.nullity + r * (r - 1) / 2;
  out.in_w = out.ambient - ctx.dim_2d();
  return out;
}

int nc_dim_oracle(const std::vector<Form>& u_basis, const GramContext& ctx) {
  const int N = ctx.dim_d();
  {
    std::vector<std::vector<double>> rows;
    for (const Form& q : u_basis) rows.push_back(q.coeffs);
    int rk = row_rank(rows, kSpanTol);
    if (rk < static_cast<int>(u_basis.size()))
      throw DependentBasisError("nc_dim_oracle: basis is dependent", rk);
  }
  // Sym(U x R[x]_d) spanned by the symmetrized products u_i o m_k.
  std::vector<std::vector<double>> span_rows;
  for (const Form& q : u_basis) {
    for (int k = 0; k < N; ++k) {
      std::vector<double> unit(N, 0.0);
      unit[k] = 1.0;
      span_rows.push_back(svec(SymMat::sym_outer(q.coeffs, unit)));
    }
  }
  std::vector<std::vector<double>> kernel_rows;
  for (const SymMat& k : ctx.kernel_basis()) kernel_rows.push_back(svec(k));
  auto inter = intersect_spans(span_rows, kernel_rows, ctx.dim_sym2(), kSpanTol);
  return ctx.dim_sym2() - static_cast<int>(inter.size());
}

std::vector<SymMat> face_subspace(const std::vector<Form>& u_basis,
                                  const GramContext& ctx) {
  const int N = ctx.dim_d();
  int r = static_cast<int>(u_basis.size());
  {
    std::vector<std::vector<double>> rows;
    for (const Form& q : u_basis) rows.push_back(q.coeffs);
    int rk = row_rank(rows, kSpanTol);
    if (rk < r) throw DependentBasisError("face_subspace: basis is dependent", rk);
  }
  std::vector<std::vector<double>> sym2u;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      sym2u.push_back(svec(SymMat::sym_outer(u_basis[i].coeffs, u_basis[j].coeffs)));
  std::vector<std::vector<double>> kernel_rows;
  for (const SymMat& k : ctx.kernel_basis()) kernel_rows.push_back(svec(k));
  auto inter = intersect_spans(sym2u, kernel_rows, ctx.dim_sym2(), kSpanTol);
  std::vector<SymMat> out;
  out.reserve(inter.size());
  for (const auto& v : inter) out.push_back(unsvec(v, N));
  return out;
}

FaceReport face(const Form& f, const std::vector<double>& lambda,
                const GramContext& ctx, const SdpParams& params) {
  double scale = 0;
  for (double l : lambda) scale = std::max(scale, std::abs(l));
  if (scale == 0.0) throw DimensionError("face: direction has no W-component");

  SliceProblem prob;
  prob.g0 = ctx.v_rep(f);
  prob.basis = ctx.kernel_basis();
  prob.objective = ctx.dir_to_objective(ctx.from_lambda(lambda));
  prob.params = params;

  SdpSolution sol = solve(prob);
  if (sol.status == SdpStatus::Infeasible)
    throw InfeasibleError("face: form is not a sum of squares (" + sol.message + ")");
  if (sol.status != SdpStatus::Optimal)
    throw ConvergenceError("face: SDP failed: " + sol.message);

  FaceReport rep;
  rep.optimizer = sol.x;
  rep.lambda = ctx.lambda_of(sol.x);
  rep.rank = rank_tol(sol.x, kFaceRankTol);

  EighResult e = eigh(sol.x);
  for (int k = 0; k < rep.rank; ++k)
    rep.u_basis.emplace_back(ctx.order_d(), e.vectors[k]);

  ProdSpaceDims pd = prod_space_dims(rep.u_basis);
  rep.face_dim = rep.rank * (rep.rank + 1) / 2 - pd.dim_u2;
  NcDims nc = nc_dim(rep.u_basis, ctx);
  rep.nc_dim_ambient = nc.ambient;
  rep.nc_dim_w = nc.in_w;
  return rep;
}

FaceReport face(const Form& f, const SymMat& w, const GramContext& ctx,
                const SdpParams& params) {
  return face(f, ctx.lambda_of(w), ctx, params);
}

}  // namespace gramfiber
