#include "pcornet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcornet/errors.hpp"
#include "pcornet/network.hpp"
#include "pcornet/parallel.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/stats.hpp"

namespace pcornet {

namespace {

std::optional<double> defined_pearson(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  const double r = pearson(a, b);
  if (std::isnan(r)) return std::nullopt;
  return r;
}

void accumulate(std::optional<double>& slot, int& count,
                const std::optional<double>& value) {
  if (!value) return;
  slot = slot.value_or(0.0) + *value;
  ++count;
}

void finalize(std::optional<double>& slot, int count) {
  if (slot) *slot /= static_cast<double>(count);
}

}  // namespace

PrecisionMatrix network_to_precision(const PcorNetwork& net) {
  const Eigen::Index p = net.p();
  PrecisionMatrix out;
  out.k = Matrix::Identity(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j) out.k(i, j) = -net.weights(i, j);

  Eigen::LLT<Matrix> llt(out.k);
  if (llt.info() != Eigen::Success) {
    const double eig = min_eigenvalue(out.k);
    throw Error(ErrorCode::NotPositiveDefinite,
                "implied precision matrix is not positive definite "
                "(smallest eigenvalue = " +
                    std::to_string(eig) + ")");
  }
  out.implied_cov = cov2cor(inverse_spd(out.k));
  out.lambda = 0.0;
  out.converged = true;
  out.iterations = 0;
  return out;
}

PcorNetwork chain_graph(int p, double w_min, double w_max, std::uint64_t seed,
                        bool random_sign) {
  if (p < 3) {
    throw Error(ErrorCode::InvalidArgument, "chain graph needs p >= 3");
  }
  Rng rng(seed);
  PcorNetwork net;
  net.weights = Matrix::Zero(p, p);
  net.labels.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) net.labels.push_back("V" + std::to_string(i + 1));
  for (int i = 0; i < p; ++i) {
    const int j = (i + 1) % p;
    double w = rng.next_uniform(w_min, w_max);
    if (random_sign && rng.next_double() < 0.5) w = -w;
    net.weights(i, j) = net.weights(j, i) = w;
  }
  return net;
}

DataMatrix sample_ggm(const PcorNetwork& net, int n, std::uint64_t seed) {
  const PrecisionMatrix prec = network_to_precision(net);
  const Eigen::Index p = net.p();
  Eigen::LLT<Matrix> llt(prec.implied_cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "implied covariance is not positive definite");
  }
  const Matrix l = llt.matrixL();
  Rng rng(seed);
  Matrix values(n, p);
  Vector z(p);
  for (int row = 0; row < n; ++row) {
    for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.next_normal();
    values.row(row) = (l * z).transpose();
  }
  return make_data(std::move(values), net.labels);
}

DataMatrix ordinalize(const DataMatrix& data, int levels, ThresholdMode mode,
                      std::uint64_t seed) {
  if (levels < 2 || levels > 10) {
    throw Error(ErrorCode::InvalidArgument, "levels must be in 2..10");
  }
  DataMatrix out = data;
  for (Eigen::Index j = 0; j < data.n_cols(); ++j) {
    std::vector<double> cuts;
    if (mode == ThresholdMode::Equiprobable) {
      for (int k = 1; k < levels; ++k) {
        cuts.push_back(normal_quantile(static_cast<double>(k) /
                                       static_cast<double>(levels)));
      }
    } else {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(j));
      for (int k = 1; k < levels; ++k) cuts.push_back(rng.next_normal());
      std::sort(cuts.begin(), cuts.end());
    }
    for (Eigen::Index i = 0; i < data.n_rows(); ++i) {
      const double v = data.values(i, j);
      if (std::isnan(v)) continue;
      int code = 0;
      while (code < levels - 1 && v > cuts[static_cast<std::size_t>(code)]) {
        ++code;
      }
      out.values(i, j) = static_cast<double>(code);
    }
    out.scales[static_cast<std::size_t>(j)] = Scale::Ordinal;
    auto& lv = out.ordinal_levels[static_cast<std::size_t>(j)];
    lv.clear();
    for (int k = 0; k < levels; ++k) lv.push_back(k);
  }
  return out;
}

CompareMetrics compare_networks(const PcorNetwork& truth,
                                const PcorNetwork& estimate) {
  const Eigen::Index p = truth.p();
  if (estimate.p() != p) {
    throw Error(ErrorCode::DimensionMismatch,
                "networks differ in node count");
  }
  int tp = 0, fn = 0, tn = 0, fp = 0;
  std::vector<double> wt, we;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const bool t = truth.weights(i, j) != 0.0;
      const bool e = estimate.weights(i, j) != 0.0;
      if (t && e) ++tp;
      if (t && !e) ++fn;
      if (!t && !e) ++tn;
      if (!t && e) ++fp;
      wt.push_back(truth.weights(i, j));
      we.push_back(estimate.weights(i, j));
    }
  }
  CompareMetrics m;
  if (tp + fn > 0)
    m.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (tn + fp > 0)
    m.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
  m.edge_correlation = defined_pearson(wt, we);
  return m;
}

SimulationResult net_simulator(const SimulationGrid& grid, int threads) {
  if (grid.n_reps < 1 || grid.n_cases.empty() || grid.estimators.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty simulation grid");
  }
  for (int n : grid.n_cases) {
    if (n < 10) {
      throw Error(ErrorCode::InvalidArgument, "every n_cases must be >= 10");
    }
  }
  network_to_precision(grid.true_network);  // validate the truth up front

  const CentralityTable truth_centrality = centrality_table(grid.true_network, 1);
  const int n_conditions =
      static_cast<int>(grid.n_cases.size() * grid.estimators.size());
  const int total = n_conditions * grid.n_reps;

  SimulationResult result;
  result.master_seed = grid.master_seed;
  result.rows.assign(static_cast<std::size_t>(total), SimulationRow{});

  parallel_for(static_cast<std::size_t>(total), threads, [&](std::size_t cell) {
    const int condition = static_cast<int>(cell) / grid.n_reps;
    const int rep = static_cast<int>(cell) % grid.n_reps;
    const int n_index = condition / static_cast<int>(grid.estimators.size());
    const int est_index = condition % static_cast<int>(grid.estimators.size());

    SimulationRow row;
    row.condition = condition;
    row.n = grid.n_cases[static_cast<std::size_t>(n_index)];
    row.estimator_index = est_index;
    row.replicate = rep;

    const std::uint64_t cell_seed = mix_seed(grid.master_seed, cell);
    try {
      DataMatrix data =
          sample_ggm(grid.true_network, row.n, mix_seed(cell_seed, 1));
      if (grid.generator.ordinal) {
        data = ordinalize(data, grid.generator.levels,
                          grid.generator.threshold_mode, mix_seed(cell_seed, 2));
      }
      EstimatorConfig config =
          grid.estimators[static_cast<std::size_t>(est_index)];
      config.threads = 1;  // cells already run in parallel
      const EstimateResult est = estimate_network(data, config);

      const CompareMetrics metrics =
          compare_networks(grid.true_network, est.network);
      row.sensitivity = metrics.sensitivity;
      row.specificity = metrics.specificity;
      row.edge_correlation = metrics.edge_correlation;

      const CentralityTable est_centrality = centrality_table(est.network, 1);
      row.strength_correlation =
          defined_pearson(truth_centrality.strength, est_centrality.strength);
      row.closeness_correlation =
          defined_pearson(truth_centrality.closeness, est_centrality.closeness);
      row.betweenness_correlation = defined_pearson(
          truth_centrality.betweenness, est_centrality.betweenness);
      row.converged = true;
    } catch (const std::exception& e) {
      row.converged = false;
      row.error = e.what();
    }
    result.rows[cell] = std::move(row);
  });
  return result;
}

std::vector<ConditionSummary> summarize(const SimulationResult& result) {
  std::vector<ConditionSummary> out;
  for (const auto& row : result.rows) {
    if (row.condition >= static_cast<int>(out.size())) {
      out.resize(static_cast<std::size_t>(row.condition) + 1);
    }
    auto& s = out[static_cast<std::size_t>(row.condition)];
    s.condition = row.condition;
    s.n = row.n;
    s.estimator_index = row.estimator_index;
    ++s.n_rows;
    if (!row.converged) {
      ++s.n_failed;
      continue;
    }
    accumulate(s.sensitivity, s.n_sensitivity, row.sensitivity);
    accumulate(s.specificity, s.n_specificity, row.specificity);
    accumulate(s.edge_correlation, s.n_edge_correlation, row.edge_correlation);
    accumulate(s.strength_correlation, s.n_strength, row.strength_correlation);
    accumulate(s.closeness_correlation, s.n_closeness,
               row.closeness_correlation);
    accumulate(s.betweenness_correlation, s.n_betweenness,
               row.betweenness_correlation);
  }
  for (auto& s : out) {
    finalize(s.sensitivity, s.n_sensitivity);
    finalize(s.specificity, s.n_specificity);
    finalize(s.edge_correlation, s.n_edge_correlation);
    finalize(s.strength_correlation, s.n_strength);
    finalize(s.closeness_correlation, s.n_closeness);
    finalize(s.betweenness_correlation, s.n_betweenness);
  }
  return out;
}

}  // namespace pcornet
