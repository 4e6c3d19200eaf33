#pragma once

#include <string>
#include <vector>

#include "pcornet/correlation.hpp"
#include "pcornet/data.hpp"
#include "pcornet/linalg.hpp"

namespace pcornet {

/// L1-penalized precision matrix estimate at a given lambda, together with
/// the implied covariance W = K^-1 tracked by the solver.
struct PrecisionMatrix {
  Matrix k;
  Matrix implied_cov;
  double lambda = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Weighted undirected network of partial correlations: symmetric, zero
/// diagonal, entries in [-1, 1]. An edge exists iff its weight is nonzero.
struct PcorNetwork {
  Matrix weights;
  std::vector<std::string> labels;

  Eigen::Index p() const { return weights.rows(); }
  int edge_count() const;
};

/// Per-node least-squares fits used by the regression route to partial
/// correlations.
struct NodewiseFit {
  Matrix slopes;  // row i = coefficients of the regression of y_i on the rest
  std::vector<double> residual_sd;
  std::vector<double> intercepts;
};

/// n_lambda penalty values log-spaced on [ratio * lambda_max, lambda_max],
/// ascending, where lambda_max is the largest absolute off-diagonal of s.
std::vector<double> lambda_path(const CorrelationMatrix& s, int n_lambda = 100,
                                double ratio = 0.01);

struct GlassoOptions {
  double tol = 1e-4;
  int max_iter = 10000;
  bool penalize_diagonal = false;
  const PrecisionMatrix* warm_start = nullptr;
  // When set, receives the penalized objective after every sweep.
  std::vector<double>* objective_log = nullptr;
};

/// Maximizes log det K - trace(SK) - lambda * sum_offdiag |k_ij| by block
/// coordinate ascent on K (the implied covariance W is maintained jointly,
/// so the objective is non-decreasing after every sweep). Off-diagonal
/// entries shrunk to zero are exact zeros.
PrecisionMatrix glasso_fit(const CorrelationMatrix& s, double lambda,
                           const GlassoOptions& opts = {});

/// weight_ij = -k_ij / sqrt(k_ii * k_jj), zero diagonal. Exact zeros in K map
/// to exact zeros.
PcorNetwork precision_to_pcor(const PrecisionMatrix& k,
                              std::vector<std::string> labels = {});
PcorNetwork precision_to_pcor(const Matrix& k,
                              std::vector<std::string> labels = {});

/// Unregularized partial correlations via per-node OLS; the two directed
/// slopes are averaged. Serves as the independent reference for the
/// precision-matrix route.
PcorNetwork nodewise_pcor(const DataMatrix& data);

NodewiseFit nodewise_fit(const DataMatrix& data);

/// log det K - trace(SK) - lambda * sum_offdiag |k_ij|.
double penalized_objective(const Matrix& k, const Matrix& s, double lambda);

/// Largest violation of the stationarity conditions of the penalized
/// likelihood at K: for nonzero off-diagonals |(K^-1 - S)_ij - lambda *
/// sign(k_ij)|, for zero entries max(0, |(K^-1 - S)_ij| - lambda), for the
/// (unpenalized) diagonal |(K^-1 - S)_ii|.
double kkt_violation(const PrecisionMatrix& fit, const Matrix& s,
                     double lambda, bool penalize_diagonal = false);

}  // namespace pcornet
