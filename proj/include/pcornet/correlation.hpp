#pragma once

#include <string>
#include <vector>

#include "pcornet/data.hpp"
#include "pcornet/linalg.hpp"

namespace pcornet {

enum class CorMethod { Pearson, Spearman, AutoMixed };

const char* cor_method_name(CorMethod m);

/// P x P correlation matrix with provenance. Constructors guarantee symmetry,
/// a unit diagonal, entries in [-1, 1] and a non-negative smallest eigenvalue
/// (repairing via nearest_pd when pairwise estimation breaks definiteness).
struct CorrelationMatrix {
  Matrix entries;
  CorMethod method = CorMethod::Pearson;
  bool pd_repaired = false;
  Eigen::MatrixXi pairwise_n;  // complete-pair counts; diagonal = per-column n
  std::vector<std::string> warnings;

  Eigen::Index p() const { return entries.rows(); }
};

/// Thresholds on the latent standard-normal scale separating ordinal levels.
struct ThresholdSet {
  std::vector<double> cuts;  // strictly ascending, length = levels - 1
};

struct PairwiseOptions {
  int threads = 1;
};

/// Pairwise-complete Pearson correlations.
CorrelationMatrix pearson_corr(const DataMatrix& data,
                               const PairwiseOptions& opts = {});

/// Pearson correlation of mid-ranks, computed pairwise-complete (ranks are
/// re-derived within each pair's complete subset).
CorrelationMatrix spearman_corr(const DataMatrix& data,
                                const PairwiseOptions& opts = {});

/// Latent-normal cutpoints from the cumulative observed level proportions.
ThresholdSet estimate_thresholds(const std::vector<double>& column);

/// Two-step maximum-likelihood polychoric correlation of two ordinal columns.
double polychoric_pair(const std::vector<double>& x,
                       const std::vector<double>& y);

/// Two-step maximum-likelihood polyserial correlation of a continuous column
/// x with an ordinal column y.
double polyserial_pair(const std::vector<double>& x,
                       const std::vector<double>& y);

struct AutoCorrOptions {
  int ordinal_max_levels = 7;
  // Per-column overrides: +1 forces ordinal, -1 forces continuous, 0 = auto.
  std::vector<int> force;
  int threads = 1;
};

/// Mixed correlation matrix: polychoric for ordinal x ordinal pairs,
/// polyserial for ordinal x continuous, Pearson otherwise. Ordinal columns
/// are detected from the values (<= ordinal_max_levels unique integer
/// values) unless overridden. Non-PD results are repaired and flagged.
CorrelationMatrix auto_corr(const DataMatrix& data,
                            const AutoCorrOptions& opts = {});

/// Maps each column through its Winsorized empirical CDF and the normal
/// quantile function. Rank order within columns is preserved exactly.
DataMatrix nonparanormal_transform(const DataMatrix& data);

/// Clips eigenvalues from below at 1e-8 * (largest eigenvalue), reconstructs
/// and rescales to a unit diagonal. Input must be symmetric with unit
/// diagonal; already well-conditioned input is returned unchanged.
CorrelationMatrix nearest_pd(const Matrix& m);

namespace detail {

struct PolychoricFit {
  double rho = 0.0;
  bool low_expected_frequency = false;
};

PolychoricFit polychoric_fit(const std::vector<double>& x,
                             const std::vector<double>& y);

}  // namespace detail

}  // namespace pcornet
