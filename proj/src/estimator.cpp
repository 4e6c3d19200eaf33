#include "pcornet/estimator.hpp"

#include "pcornet/errors.hpp"

namespace pcornet {

CorrelationMatrix estimate_correlation(const DataMatrix& data,
                                       const EstimatorConfig& config) {
  switch (config.cor_method) {
    case CorMethod::Pearson:
      return pearson_corr(data, PairwiseOptions{config.threads});
    case CorMethod::Spearman:
      return spearman_corr(data, PairwiseOptions{config.threads});
    case CorMethod::AutoMixed: {
      AutoCorrOptions opts;
      opts.ordinal_max_levels = config.ordinal_max_levels;
      opts.force = config.force_scale;
      opts.threads = config.threads;
      return auto_corr(data, opts);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown correlation method");
}

EstimateResult estimate_network(const DataMatrix& data,
                                const EstimatorConfig& config) {
  EstimateResult result;
  result.correlation = estimate_correlation(data, config);
  result.warnings = result.correlation.warnings;

  const int n = static_cast<int>(data.n_rows());
  if (config.kind == EstimatorKind::Unregularized) {
    CorrelationMatrix s = result.correlation;
    if (!is_positive_definite(s.entries)) {
      s = nearest_pd(s.entries);
    }
    result.network = precision_to_pcor(inverse_spd(s.entries), data.labels);
    return result;
  }

  EbicGlassoOptions opts;
  opts.gamma = config.gamma;
  opts.n_lambda = config.n_lambda;
  opts.lambda_ratio = config.lambda_ratio;
  SelectionTrace trace = ebic_glasso(result.correlation, n, opts, data.labels);
  result.warnings.insert(result.warnings.end(), trace.warnings.begin(),
                         trace.warnings.end());
  result.network = trace.selected();

  if (result.network.edge_count() == 0) {
    result.warnings.push_back(
        "selected network has no edges; the sample may be too small for the "
        "node count, or the variables may be uncorrelated (a lower gamma "
        "errs toward discovery)");
  }

  if (config.refit) {
    const Eigen::Index p = result.network.p();
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        mask(i, j) = i != j && result.network.weights(i, j) != 0.0;
    result.network =
        refit_unregularized(result.correlation, mask, 1e-8, data.labels);
  }

  result.trace = std::move(trace);
  return result;
}

}  // namespace pcornet
