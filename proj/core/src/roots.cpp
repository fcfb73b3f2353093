#include "gramfiber/roots.hpp"

#include <algorithm>
#include <cmath>

#include "gramfiber/errors.hpp"

namespace gramfiber {

namespace {

using cplx = std::complex<double>;

cplx horner(const std::vector<cplx>& c, cplx x, cplx* deriv) {
  cplx p = c.back(), dp = 0.0;
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    dp = dp * x + p;
    p = p * x + c[i];
  }
  if (deriv) *deriv = dp;
  return p;
}

}  // namespace

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
  if (coeffs.empty() || std::abs(coeffs.back()) == 0.0)
    throw DimensionError("poly_roots: leading coefficient must be nonzero");
  int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg > 8) throw DimensionError("poly_roots: degree must be <= 8");
  if (deg == 0) return {};

  double cnorm = 0;
  for (const cplx& c : coeffs) cnorm += std::norm(c);
  cnorm = std::sqrt(cnorm);
  const double resid_tol = 1e-10 * cnorm;

  // Cauchy-style radius for the initial circle.
  double radius = 0;
  for (int i = 0; i < deg; ++i)
    radius = std::max(radius, std::abs(coeffs[i] / coeffs[deg]));
  radius = 1.0 + radius;

  std::vector<cplx> z(deg);
  auto place_initial = [&](double phase) {
    for (int k = 0; k < deg; ++k) {
      double ang = 2.0 * M_PI * (k + 0.35) / deg + phase;
      z[k] = radius * cplx(std::cos(ang), std::sin(ang));
    }
  };
  place_initial(0.4);

  std::vector<cplx> w(deg);
  int stall = 0;
  double prev_move = 1e300;
  for (int iter = 0; iter < 500; ++iter) {
    double move = 0;
    for (int k = 0; k < deg; ++k) {
      cplx dp;
      cplx p = horner(coeffs, z[k], &dp);
      cplx newton = (std::abs(dp) == 0.0) ? cplx(0.1, 0.1) : p / dp;
      cplx sum = 0.0;
      for (int j = 0; j < deg; ++j) {
        if (j == k) continue;
        cplx diff = z[k] - z[j];
        if (std::abs(diff) < 1e-300) diff = cplx(1e-300, 0);
        sum += 1.0 / diff;
      }
      w[k] = newton / (1.0 - newton * sum);
      move = std::max(move, std::abs(w[k]));
    }
    for (int k = 0; k < deg; ++k) z[k] -= w[k];

    bool done = true;
    for (int k = 0; k < deg; ++k) {
      if (std::abs(horner(coeffs, z[k], nullptr)) > resid_tol) {
        done = false;
        break;
      }
    }
    if (done) {
      std::sort(z.begin(), z.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
      });
      return z;
    }

    // Deterministic perturbation restart when the iteration stalls.
    if (move >= prev_move * 0.999) {
      if (++stall > 40) {
        place_initial(0.4 + 0.77 * iter);
        stall = 0;
      }
    } else {
      stall = 0;
    }
    prev_move = move;
  }
  throw ConvergenceError("poly_roots: no convergence after 500 iterations");
}

}  // namespace gramfiber
