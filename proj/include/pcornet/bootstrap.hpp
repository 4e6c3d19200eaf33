#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcornet/data.hpp"
#include "pcornet/estimator.hpp"
#include "pcornet/network.hpp"

namespace pcornet {

enum class BootKind { Nonparametric, CaseDropping };

struct BootReplicate {
  int index = 0;           // replicate number under the master seed
  double proportion = 1.0; // retained fraction of rows
  int n_rows = 0;
  int n_unique_rows = 0;
  PcorNetwork network;
  CentralityTable centrality;
};

struct BootFailure {
  int index = 0;
  std::string message;
};

struct BootstrapResult {
  BootKind kind = BootKind::Nonparametric;
  std::vector<BootReplicate> replicates;  // successful replicates only
  std::vector<BootFailure> failures;
  PcorNetwork full_network;        // estimate on the complete sample
  CentralityTable full_centrality;
  std::uint64_t master_seed = 0;
  EstimatorConfig config;
  std::vector<std::string> warnings;
};

/// Resamples N rows with replacement per replicate and re-runs the whole
/// estimation pipeline. Throws Error(TooManyFailures) when more than 25% of
/// replicates fail.
BootstrapResult nonparametric_boot(const DataMatrix& data,
                                   const EstimatorConfig& config,
                                   int n_boots, std::uint64_t seed,
                                   int threads = 0);

/// Subsamples without replacement at each retained proportion (replicates
/// split evenly across the grid).
BootstrapResult case_dropping_boot(
    const DataMatrix& data, const EstimatorConfig& config,
    std::vector<double> proportions, int n_boots, std::uint64_t seed,
    int threads = 0);

inline std::vector<double> default_case_proportions() {
  return {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3};
}

struct EdgeInterval {
  int i = 0, j = 0;
  double lo = 0.0, hi = 0.0;
  double full_sample = 0.0;
};

/// Per-edge empirical quantile intervals over nonparametric replicates
/// (type-7 quantiles at (1-level)/2 and 1-(1-level)/2).
std::vector<EdgeInterval> edge_quantile_intervals(const BootstrapResult& res,
                                                  double level = 0.95);

enum class DiffWhat { EdgeVsEdge, NodeStrengthVsNodeStrength };

struct DifferenceResult {
  bool significant = false;
  double lo = 0.0, hi = 0.0;
  double observed = 0.0;  // difference in the full-sample estimate
};

/// Bootstrapped difference test between two edges (pass both endpoints) or
/// two node strengths (pass node indices in a_i / b_i; a_j / b_j ignored).
/// Significant iff the level-quantile interval of replicate differences
/// excludes zero.
DifferenceResult difference_test(const BootstrapResult& res, DiffWhat what,
                                 int a_i, int a_j, int b_i, int b_j,
                                 double level = 0.95);

enum class CentralityIndex { Strength, Closeness, Betweenness };

const char* centrality_index_name(CentralityIndex index);

/// Correlation-stability coefficient: the largest tested drop proportion d
/// such that at least `certainty` of the replicates at retained proportion
/// 1-d correlate >= cor_threshold with the full-sample index; 0 when no
/// level qualifies.
double cs_coefficient(const BootstrapResult& res, CentralityIndex index,
                      double cor_threshold = 0.7, double certainty = 0.95);

/// Reporting label: "stable" (>= 0.5), "minimally acceptable" (>= 0.25),
/// else "unstable".
const char* cs_interpretation(double cs);

/// Always throws Error(Unsupported): bootstrapped confidence intervals are
/// not a valid instrument for centrality indices; use the case-dropping
/// stability analysis instead.
void centrality_confidence_intervals(const BootstrapResult& res,
                                     CentralityIndex index);

struct ComparisonResult {
  double stat_global_strength = 0.0;  // |sum|w_a|| - |sum|w_b|| over edges
  double stat_max_edge_diff = 0.0;    // max_ij |w_a - w_b|
  double p_global = 1.0;
  double p_max_edge = 1.0;
  int n_permutations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// Two-group permutation test: pools rows, reassigns them preserving group
/// sizes, re-estimates both networks per permutation. p-values use the
/// (1 + #{perm >= observed}) / (1 + n_perm) rule.
ComparisonResult permutation_comparison(const DataMatrix& data_a,
                                        const DataMatrix& data_b,
                                        const EstimatorConfig& config,
                                        int n_perm, std::uint64_t seed,
                                        int threads = 0);

}  // namespace pcornet
