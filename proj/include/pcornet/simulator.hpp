#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcornet/data.hpp"
#include "pcornet/estimator.hpp"
#include "pcornet/glasso.hpp"

namespace pcornet {

/// Unit-diagonal precision matrix implied by a partial-correlation network:
/// k_ii = 1, k_ij = -w_ij. Throws Error(NotPositiveDefinite) reporting the
/// smallest eigenvalue when the construction is invalid; never repairs.
PrecisionMatrix network_to_precision(const PcorNetwork& net);

/// Cycle 1-2-...-p-1 with weights drawn uniformly from [w_min, w_max]
/// (positive unless random_sign is set).
PcorNetwork chain_graph(int p, double w_min = 0.3, double w_max = 0.4,
                        std::uint64_t seed = 1, bool random_sign = false);

/// n draws from the multivariate normal whose correlation structure is
/// implied by the network (Cholesky factor times iid standard normals).
DataMatrix sample_ggm(const PcorNetwork& net, int n, std::uint64_t seed);

enum class ThresholdMode { Equiprobable, Sampled };

/// Discretizes continuous columns into `levels` ordinal codes 0..levels-1.
/// Equiprobable uses normal quantiles at k/levels; Sampled draws sorted
/// standard-normal thresholds per column from `seed`.
DataMatrix ordinalize(const DataMatrix& data, int levels,
                      ThresholdMode mode = ThresholdMode::Equiprobable,
                      std::uint64_t seed = 1);

/// Edge-recovery metrics vs. a known generating network. A metric whose
/// denominator is empty (e.g. specificity of a complete graph) is absent
/// rather than 0 or NaN.
struct CompareMetrics {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> edge_correlation;
};

CompareMetrics compare_networks(const PcorNetwork& truth,
                                const PcorNetwork& estimate);

struct GeneratorConfig {
  bool ordinal = false;
  int levels = 5;
  ThresholdMode threshold_mode = ThresholdMode::Equiprobable;
};

struct SimulationGrid {
  PcorNetwork true_network;
  std::vector<int> n_cases;
  int n_reps = 100;
  GeneratorConfig generator;
  std::vector<EstimatorConfig> estimators = {EstimatorConfig{}};
  std::uint64_t master_seed = 1;
};

struct SimulationRow {
  int condition = 0;  // index into n_cases x estimators
  int n = 0;
  int estimator_index = 0;
  int replicate = 0;
  bool converged = false;
  std::string error;
  std::optional<double> sensitivity, specificity, edge_correlation;
  std::optional<double> strength_correlation, closeness_correlation,
      betweenness_correlation;
};

struct SimulationResult {
  std::vector<SimulationRow> rows;
  std::uint64_t master_seed = 0;
};

/// Sample -> (optionally ordinalize) -> estimate -> score, for every
/// condition x replicate cell. Cells run independently on per-cell seed
/// streams; results are identical for any worker count.
SimulationResult net_simulator(const SimulationGrid& grid, int threads = 0);

/// Per-condition means over defined values, with counts of defined entries.
struct ConditionSummary {
  int condition = 0;
  int n = 0;
  int estimator_index = 0;
  int n_rows = 0;
  int n_failed = 0;
  std::optional<double> sensitivity, specificity, edge_correlation;
  std::optional<double> strength_correlation, closeness_correlation,
      betweenness_correlation;
  int n_sensitivity = 0, n_specificity = 0, n_edge_correlation = 0;
  int n_strength = 0, n_closeness = 0, n_betweenness = 0;
};

std::vector<ConditionSummary> summarize(const SimulationResult& result);

}  // namespace pcornet
