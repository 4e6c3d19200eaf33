#pragma once

#include <Eigen/Dense>

namespace pcornet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

bool is_symmetric(const Matrix& m, double tol = 1e-10);

/// (m + m^T) / 2.
Matrix symmetrized(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& sym);

/// True if a Cholesky factorization succeeds.
bool is_positive_definite(const Matrix& sym);

/// log det of a symmetric positive-definite matrix via Cholesky.
/// Throws Error(NotPositiveDefinite) when the factorization fails.
double logdet_spd(const Matrix& sym);

/// Inverse of a symmetric positive-definite matrix via Cholesky.
Matrix inverse_spd(const Matrix& sym);

/// Rescales a covariance matrix to a correlation matrix (unit diagonal).
Matrix cov2cor(const Matrix& cov);

}  // namespace pcornet
