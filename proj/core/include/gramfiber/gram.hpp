#pragma once

#include <string>
#include <vector>

#include "gramfiber/apolarity.hpp"
#include "gramfiber/monomial.hpp"
#include "gramfiber/rational.hpp"
#include "gramfiber/sdp.hpp"
#include "gramfiber/symmat.hpp"

namespace gramfiber {

/// Pairing used to identify W with its dual. The binary-sextic setup works
/// with the trace scalar product on Gram matrices; the ternary-quartic setup
/// with the apolarity scalar product on Sym^2 (sym2_pair). The printed
/// verification targets of each case are stated in their own convention.
enum class PairingRegime { Trace, Apolar };

/// Precomputed Gram-map data for a fixed (n, 2d).
///
/// mu maps a symmetric N x N matrix G to the form sum_ij G_ij m_i m_j of
/// degree 2d. W = ker(mu) carries the fixed basis below; V denotes the
/// trace-orthogonal complement, in which v_rep lands.
class GramContext {
 public:
  /// (2,3) and (3,2) are fully supported with the fixed kernel bases;
  /// other small (n,d) get a computed integer kernel basis, best effort.
  static GramContext make(int n, int d);

  int n() const { return order_d_.n(); }
  int d() const { return order_d_.d(); }
  int dim_d() const { return order_d_.size(); }     // N
  int dim_2d() const { return order_2d_.size(); }   // M
  int dim_sym2() const { return dim_d() * (dim_d() + 1) / 2; }
  int dim_w() const { return static_cast<int>(kernel_.size()); }

  const MonomialOrder& order_d() const { return order_d_; }
  const MonomialOrder& order_2d() const { return order_2d_; }
  PairingRegime regime() const { return regime_; }

  /// Kernel basis of W; for (2,3) and (3,2) these are the fixed integer
  /// matrices R_1..R_k.
  const std::vector<SymMat>& kernel_basis() const { return kernel_; }

  /// mu as an integer M x (N(N+1)/2) matrix over cells (i <= j); the cell
  /// multiplicity is 1 on the diagonal and 2 off it.
  const std::vector<std::vector<double>>& mu_matrix() const { return mu_; }
  RationalMat mu_matrix_rational() const;

  Form apply_mu(const SymMat& theta) const;
  std::vector<Rational> apply_mu_rational(const RationalMat& theta) const;

  /// Right inverse of mu landing in the trace-orthogonal complement of W:
  /// entry (i,j) is c_{a_i + a_j} divided by the number of ordered monomial
  /// pairs with that exponent sum. For (3,2) this is the matrix A(c).
  SymMat v_rep(const Form& f) const;
  RationalMat v_rep_rational(const std::vector<Rational>& coeffs) const;

  /// The regime pairing on Sym^2 (trace or sym2_pair).
  double pair(const SymMat& a, const SymMat& b) const;

  /// Convention coordinates of the W-component of theta: the raw pairings
  /// in which the classification machinery of each case is stated.
  /// Sextic: lambda_i = tr(theta R_i). Quartic: lambda_i =
  /// sym2_pair(theta, R_i)/2, the values that assemble Q(w).
  std::vector<double> lambda_of(const SymMat& theta) const;
  std::vector<Rational> lambda_of_rational(const RationalMat& theta) const;

  /// W-matrix with lambda_of(result) == lambda.
  SymMat from_lambda(const std::vector<double>& lambda) const;

  /// Coordinates of theta over kernel_basis(); reconstruction
  /// sum coords_i R_i equals the W-component of theta.
  std::vector<double> pr_w(const SymMat& theta) const;
  SymMat w_component(const SymMat& theta) const;

  /// Objective matrix C with tr(C X) = pair(w, X) for all X.
  SymMat dir_to_objective(const SymMat& w) const;

  /// lambda_of applied to the i-th kernel basis element (diagonal by
  /// orthogonality); used to convert between lambda and basis coordinates.
  const std::vector<double>& lambda_of_basis() const { return lambda_basis_; }

  /// Context dump used by test fixtures: mu, kernel basis, dims.
  std::string dump_json() const;

 private:
  GramContext(MonomialOrder od, MonomialOrder o2d);

  MonomialOrder order_d_, order_2d_;
  PairingRegime regime_ = PairingRegime::Trace;
  std::vector<std::vector<double>> mu_;   // integer entries
  std::vector<SymMat> kernel_;
  std::vector<double> lambda_basis_;
  std::vector<double> pair_basis_;        // pair(R_i, R_i)
  std::vector<int> cell_pair_count_;      // ordered pairs per cell exponent
  std::vector<double> apol_weights_;      // apolarity weights of order_d
};

/// Face data in a fixed direction: optimizer, rank, face dimension and
/// normal-cone dimensions, with the spanning subspace U = im(optimizer).
struct FaceReport {
  SymMat optimizer;
  std::vector<double> lambda;   // lambda_of(optimizer)
  int rank = 0;
  int face_dim = 0;
  int nc_dim_ambient = 0;
  int nc_dim_w = 0;
  std::vector<Form> u_basis;
};

struct NcDims {
  int ambient = 0;
  int in_w = 0;
};

/// dim N = dim Sym^2 R[x]_d - nullity(dphi(U)) + binom(r,2); in_w subtracts
/// dim R[x]_{2d}.
NcDims nc_dim(const std::vector<Form>& u_basis, const GramContext& ctx);

/// Independent route: dim Sym^2 R[x]_d - dim(ker mu  ^  Sym(U x R[x]_d)),
/// with the intersection computed by numeric rank.
int nc_dim_oracle(const std::vector<Form>& u_basis, const GramContext& ctx);

/// Basis of {K : im K in U, mu(K) = 0}; its length is the face dimension of
/// any f with a Gram tensor of image exactly U.
std::vector<SymMat> face_subspace(const std::vector<Form>& u_basis,
                                  const GramContext& ctx);

/// Solves the slice SDP for f in direction w (ambient directions are
/// projected to W first; adding any trace-orthogonal V component to w leaves
/// the report unchanged). Throws InfeasibleError when f is not sos.
FaceReport face(const Form& f, const SymMat& w, const GramContext& ctx,
                const SdpParams& params = {});
FaceReport face(const Form& f, const std::vector<double>& lambda,
                const GramContext& ctx, const SdpParams& params = {});

/// svec isometry (off-diagonal entries scaled by sqrt(2)).
std::vector<double> svec(const SymMat& m);
SymMat unsvec(const std::vector<double>& v, int n);

}  // namespace gramfiber
