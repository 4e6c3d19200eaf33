#include "pcornet/linalg.hpp"

#include <cmath>

#include "pcornet/errors.hpp"

namespace pcornet {

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > tol) return false;
    }
  }
  return true;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_positive_definite(const Matrix& sym) {
  Eigen::LLT<Matrix> llt(sym);
  return llt.info() == Eigen::Success;
}

double logdet_spd(const Matrix& sym) {
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "matrix is not positive definite");
  }
  double ld = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < sym.rows(); ++i) ld += std::log(l(i, i));
  return 2.0 * ld;
}

Matrix inverse_spd(const Matrix& sym) {
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "matrix is not positive definite");
  }
  return llt.solve(Matrix::Identity(sym.rows(), sym.cols()));
}

Matrix cov2cor(const Matrix& cov) {
  const Eigen::Index p = cov.rows();
  Vector d(p);
  for (Eigen::Index i = 0; i < p; ++i) d(i) = 1.0 / std::sqrt(cov(i, i));
  Matrix out(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) out(i, j) = cov(i, j) * d(i) * d(j);
    out(i, i) = 1.0;
  }
  return out;
}

}  // namespace pcornet
