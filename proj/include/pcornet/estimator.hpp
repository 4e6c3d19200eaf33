#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcornet/correlation.hpp"
#include "pcornet/data.hpp"
#include "pcornet/selection.hpp"

namespace pcornet {

enum class EstimatorKind {
  EbicGlasso,     // lambda path + EBIC selection
  Unregularized,  // direct inversion of the correlation matrix
};

/// Full configuration of the estimation pipeline; shared by the CLI, the
/// bootstraps and the simulator.
struct EstimatorConfig {
  CorMethod cor_method = CorMethod::AutoMixed;
  EstimatorKind kind = EstimatorKind::EbicGlasso;
  double gamma = 0.5;
  int n_lambda = 100;
  double lambda_ratio = 0.01;
  bool refit = false;  // re-estimate selected structure without the penalty
  int ordinal_max_levels = 7;
  std::vector<int> force_scale;  // per-column: +1 ordinal, -1 continuous
  int threads = 1;               // inner parallelism of the correlation step
};

struct EstimateResult {
  PcorNetwork network;
  CorrelationMatrix correlation;
  std::optional<SelectionTrace> trace;  // present for the EBIC glasso route
  std::vector<std::string> warnings;
};

/// data -> correlation matrix -> network, per config.
EstimateResult estimate_network(const DataMatrix& data,
                                const EstimatorConfig& config);

/// The correlation step alone (method dispatch + PD repair).
CorrelationMatrix estimate_correlation(const DataMatrix& data,
                                       const EstimatorConfig& config);

}  // namespace pcornet
