#pragma once

#include <string>
#include <vector>

#include "pcornet/correlation.hpp"
#include "pcornet/glasso.hpp"

namespace pcornet {

/// Per-lambda record of the regularization path and its EBIC scores.
/// Entries are stored in ascending lambda order. `networks` holds the
/// regularized estimates; `logliks` holds the log-likelihood of each
/// lambda's support refitted without the penalty, which is what the EBIC
/// scores.
struct SelectionTrace {
  std::vector<double> lambdas;
  std::vector<PcorNetwork> networks;
  std::vector<int> edge_counts;
  std::vector<double> logliks;
  std::vector<double> ebic_values;
  std::vector<bool> fit_ok;  // false when the fit at that lambda failed
  double gamma = 0.5;
  int n = 0;
  int selected_index = -1;
  std::vector<std::string> warnings;

  const PcorNetwork& selected() const { return networks.at(selected_index); }
  double selected_lambda() const { return lambdas.at(selected_index); }
};

/// Multivariate-normal log-likelihood up to its constant term:
/// (n/2) * (log det K - trace(S K)). The -(n/2) P log(2 pi) constant is
/// omitted; it cancels in every model comparison.
double gaussian_loglik(const Matrix& k, const Matrix& s, int n);
double gaussian_loglik(const PrecisionMatrix& k, const CorrelationMatrix& s,
                       int n);

/// -2L + E log(n) + 4 gamma E log(p). With gamma = 0 this is the BIC.
double ebic(double loglik, int edge_count, int n, int p, double gamma);

/// Index of the minimum EBIC among usable fits; ties within 1e-10 go to the
/// largest lambda (the sparser model).
int select_lambda(const std::vector<double>& ebic_values,
                  const std::vector<bool>& fit_ok,
                  const std::vector<double>& lambdas);

/// Recomputes EBIC scores and the selected index for an already fitted trace
/// under a different gamma (fits do not depend on gamma).
std::pair<std::vector<double>, int> score_trace(const SelectionTrace& trace,
                                                int p, double gamma);

struct EbicGlassoOptions {
  double gamma = 0.5;
  int n_lambda = 100;
  double lambda_ratio = 0.01;
  double tol = 1e-4;
  int max_iter = 10000;
};

/// Fits the whole lambda path (descending, warm-started), scores every
/// network with EBIC and selects the minimizer.
SelectionTrace ebic_glasso(const CorrelationMatrix& s, int n,
                           const EbicGlassoOptions& opts = {},
                           std::vector<std::string> labels = {});

/// Maximum-likelihood precision estimate constrained to k_ij = 0 wherever
/// mask(i,j) is false (off the diagonal). The implied covariance reproduces
/// s exactly on masked entries and the diagonal, removing LASSO shrinkage
/// from a selected structure.
PcorNetwork refit_unregularized(const CorrelationMatrix& s,
                                const Eigen::Matrix<bool, Eigen::Dynamic,
                                                    Eigen::Dynamic>& mask,
                                double tol = 1e-8,
                                std::vector<std::string> labels = {});

/// Same constrained MLE, returned as the precision matrix (with its implied
/// covariance) for likelihood evaluation. `max_sweeps` bounds the effort;
/// on a near-singular input a dense support's MLE can sit at astronomical
/// norms, and a bounded budget turns that into a clean NotConverged.
PrecisionMatrix refit_unregularized_precision(
    const CorrelationMatrix& s,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
    double tol = 1e-8, int max_sweeps = 10000);

}  // namespace pcornet
