#pragma once

#include <complex>
#include <vector>

namespace gramfiber {

/// All complex roots (with multiplicity) of a polynomial given by
/// coefficients in ascending order, c[0] + c[1] x + ... + c[n] x^n.
///
/// Aberth-Ehrlich simultaneous iteration with deterministic perturbation
/// restarts; degree <= 8. Throws ConvergenceError after 500 iterations.
std::vector<std::complex<double>> poly_roots(
    const std::vector<std::complex<double>>& coeffs);

}  // namespace gramfiber
