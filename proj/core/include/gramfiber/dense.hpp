#pragma once

#include <vector>

namespace gramfiber {

/// Row-stack utilities used for span / rank / intersection computations on
/// the small coefficient spaces (dimensions <= ~40).

/// Numeric rank of a stack of row vectors: number of singular values above
/// tol * sigma_max, computed through the Gram matrix.
int row_rank(const std::vector<std::vector<double>>& rows, double tol);

/// Orthonormal basis of the row span (Gram eigenvectors above tol).
std::vector<std::vector<double>> row_orthonormal(
    const std::vector<std::vector<double>>& rows, double tol);

/// Orthonormal basis of {x : rows * x = 0}.
std::vector<std::vector<double>> nullspace(
    const std::vector<std::vector<double>>& rows, int ambient_dim, double tol);

/// Orthonormal basis of span(a) intersected with span(b); inputs need not be
/// orthonormal.
std::vector<std::vector<double>> intersect_spans(
    const std::vector<std::vector<double>>& a,
    const std::vector<std::vector<double>>& b, int ambient_dim, double tol);

/// Largest principal angle (radians) between two spans of equal dimension.
double max_principal_angle(const std::vector<std::vector<double>>& a,
                           const std::vector<std::vector<double>>& b,
                           double tol);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace gramfiber
