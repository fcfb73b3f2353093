#pragma once

#include <string>
#include <vector>

#include "gramfiber/symmat.hpp"

namespace gramfiber {

struct SdpParams {
  /// Duality gap target, relative to 1 + |objective|.
  double gap_tol = 1e-9;
  /// Total Newton-step budget across all barrier stages.
  int max_newton = 20000;
  /// Snap exact vertices (0-dimensional optimal faces) after path following.
  bool polish = true;
};

/// Linear optimization over an affine slice of the psd cone:
/// minimize tr(objective * X) over X = g0 + sum lambda_i basis[i] >= 0.
struct SliceProblem {
  SymMat g0;
  std::vector<SymMat> basis;
  SymMat objective;
  SdpParams params;
};

enum class SdpStatus { Optimal, Infeasible, NumericalFailure };

struct SdpSolution {
  std::vector<double> lambda;
  SymMat x;                  // g0 + sum lambda_i basis[i], bit-exact
  double objective_value = 0.0;
  SdpStatus status = SdpStatus::NumericalFailure;
  double min_eigenvalue = 0.0;
  double gap = 0.0;          // certified optimality bound on Optimal
  /// True when the kernel constraints pinned lambda uniquely and the vertex
  /// was snapped: the optimal face is a single point.
  bool polished = false;
  std::string message;
};

/// Short-step log-det barrier path following with Newton steps in lambda
/// only; barrier parameter schedule t <- 1.5 t. The returned X is the
/// analytic center of the optimal face (central-path limit), hence of
/// maximal rank on that face. A zero objective returns the analytic center
/// of the whole slice. Deterministic given identical inputs.
SdpSolution solve(const SliceProblem& p);

/// Largest attainable minimum eigenvalue over the slice (phase-I value),
/// certified to absolute accuracy ~1e-10 near zero.
double feasibility_margin(const SymMat& g0, const std::vector<SymMat>& basis);

/// True iff max over lambda of min-eigenvalue(g0 + sum lambda_i basis[i])
/// exceeds -1e-9.
bool feasible(const SymMat& g0, const std::vector<SymMat>& basis);

}  // namespace gramfiber
