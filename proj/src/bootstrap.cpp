#include "pcornet/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "pcornet/errors.hpp"
#include "pcornet/parallel.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/stats.hpp"

namespace pcornet {

namespace {

struct ReplicateSlot {
  bool ok = false;
  std::string error;
  BootReplicate replicate;
};

BootReplicate run_replicate(const DataMatrix& data,
                            const EstimatorConfig& config,
                            std::vector<int> rows, int index,
                            double proportion) {
  // Row order never affects the estimate, but sorting makes a full-sample
  // subsample reproduce the original data byte for byte.
  std::sort(rows.begin(), rows.end());
  BootReplicate rep;
  rep.index = index;
  rep.proportion = proportion;
  rep.n_rows = static_cast<int>(rows.size());
  rep.n_unique_rows =
      static_cast<int>(std::set<int>(rows.begin(), rows.end()).size());
  const DataMatrix sample = data.take_rows(rows);
  EstimatorConfig inner = config;
  inner.threads = 1;  // replicates already run in parallel
  EstimateResult est = estimate_network(sample, inner);
  rep.network = std::move(est.network);
  rep.centrality = centrality_table(rep.network, 1);
  return rep;
}

BootstrapResult collect(BootKind kind, const DataMatrix& data,
                        const EstimatorConfig& config, std::uint64_t seed,
                        std::vector<ReplicateSlot>&& slots,
                        std::vector<std::string> warnings) {
  BootstrapResult res;
  res.kind = kind;
  res.master_seed = seed;
  res.config = config;
  res.warnings = std::move(warnings);
  const int n_boots = static_cast<int>(slots.size());
  for (auto& slot : slots) {
    if (slot.ok) {
      res.replicates.push_back(std::move(slot.replicate));
    } else {
      res.failures.push_back({slot.replicate.index, slot.error});
    }
  }
  if (n_boots > 0 &&
      static_cast<double>(res.failures.size()) > 0.25 * n_boots) {
    throw Error(ErrorCode::TooManyFailures,
                std::to_string(res.failures.size()) + " of " +
                    std::to_string(n_boots) + " bootstrap replicates failed");
  }
  {
    EstimatorConfig inner = config;
    EstimateResult est = estimate_network(data, inner);
    res.full_network = std::move(est.network);
    res.full_centrality = centrality_table(res.full_network, 1);
  }
  return res;
}

std::vector<double> replicate_values(const BootstrapResult& res, DiffWhat what,
                                     int i, int j) {
  const Eigen::Index p = res.full_network.p();
  const auto check = [&](int v) {
    if (v < 0 || v >= p) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "node index " + std::to_string(v) + " out of range");
    }
  };
  check(i);
  if (what == DiffWhat::EdgeVsEdge) check(j);
  std::vector<double> out;
  out.reserve(res.replicates.size());
  for (const auto& rep : res.replicates) {
    if (what == DiffWhat::EdgeVsEdge) {
      out.push_back(rep.network.weights(i, j));
    } else {
      out.push_back(rep.centrality.strength[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

double global_strength(const PcorNetwork& net) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < net.p(); ++i)
    for (Eigen::Index j = i + 1; j < net.p(); ++j)
      total += std::fabs(net.weights(i, j));
  return total;
}

double max_edge_diff(const PcorNetwork& a, const PcorNetwork& b) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.p(); ++i)
    for (Eigen::Index j = i + 1; j < a.p(); ++j)
      best = std::max(best, std::fabs(a.weights(i, j) - b.weights(i, j)));
  return best;
}

}  // namespace

BootstrapResult nonparametric_boot(const DataMatrix& data,
                                   const EstimatorConfig& config, int n_boots,
                                   std::uint64_t seed, int threads) {
  data.validate();
  if (n_boots < 0) {
    throw Error(ErrorCode::InvalidArgument, "n_boots must be >= 0");
  }
  const int n = static_cast<int>(data.n_rows());
  std::vector<ReplicateSlot> slots(static_cast<std::size_t>(n_boots));
  parallel_for(static_cast<std::size_t>(n_boots), threads, [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (auto& r : rows)
      r = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    auto& slot = slots[k];
    slot.replicate.index = static_cast<int>(k);
    try {
      slot.replicate =
          run_replicate(data, config, std::move(rows), static_cast<int>(k), 1.0);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });
  return collect(BootKind::Nonparametric, data, config, seed,
                 std::move(slots), {});
}

BootstrapResult case_dropping_boot(const DataMatrix& data,
                                   const EstimatorConfig& config,
                                   std::vector<double> proportions,
                                   int n_boots, std::uint64_t seed,
                                   int threads) {
  data.validate();
  if (proportions.empty() || n_boots < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "need at least one retained proportion and n_boots >= 0");
  }
  std::sort(proportions.begin(), proportions.end());
  for (double prop : proportions) {
    if (!(prop > 0.0 && prop <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "retained proportions must lie in (0, 1]");
    }
  }
  const int n = static_cast<int>(data.n_rows());
  const int p = static_cast<int>(data.n_cols());
  std::vector<std::string> warnings;
  if (proportions.front() * n < p + 1) {
    warnings.push_back(
        "smallest retained subsample has fewer rows than nodes + 1; "
        "replicates at that level may be unstable");
  }

  // Replicates split evenly across levels, remainder to the lowest levels.
  const int n_levels = static_cast<int>(proportions.size());
  std::vector<double> level_of(static_cast<std::size_t>(n_boots));
  {
    const int base = n_boots / n_levels;
    const int extra = n_boots % n_levels;
    std::size_t t = 0;
    for (int lev = 0; lev < n_levels; ++lev) {
      const int count = base + (lev < extra ? 1 : 0);
      for (int c = 0; c < count; ++c)
        level_of[t++] = proportions[static_cast<std::size_t>(lev)];
    }
  }

  std::vector<ReplicateSlot> slots(static_cast<std::size_t>(n_boots));
  parallel_for(static_cast<std::size_t>(n_boots), threads, [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    const double prop = level_of[k];
    const int keep = std::clamp(
        static_cast<int>(std::llround(prop * n)), 1, n);
    // Partial Fisher-Yates: first `keep` entries form the subsample.
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < keep; ++i) {
      const int j = i + static_cast<int>(rng.next_below(
                            static_cast<std::uint64_t>(n - i)));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
    }
    perm.resize(static_cast<std::size_t>(keep));
    auto& slot = slots[k];
    slot.replicate.index = static_cast<int>(k);
    try {
      slot.replicate =
          run_replicate(data, config, std::move(perm), static_cast<int>(k), prop);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });
  return collect(BootKind::CaseDropping, data, config, seed, std::move(slots),
                 std::move(warnings));
}

std::vector<EdgeInterval> edge_quantile_intervals(const BootstrapResult& res,
                                                  double level) {
  if (res.kind != BootKind::Nonparametric) {
    throw Error(ErrorCode::WrongKind,
                "edge intervals require a nonparametric bootstrap");
  }
  if (res.replicates.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "need at least 2 successful replicates");
  }
  if (!(level >= 0.0 && level <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "level must lie in [0, 1]");
  }
  const Eigen::Index p = res.full_network.p();
  std::vector<EdgeInterval> out;
  std::vector<double> values(res.replicates.size());
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      for (std::size_t k = 0; k < res.replicates.size(); ++k) {
        values[k] = res.replicates[k].network.weights(i, j);
      }
      std::sort(values.begin(), values.end());
      EdgeInterval interval;
      interval.i = static_cast<int>(i);
      interval.j = static_cast<int>(j);
      interval.lo = quantile_type7_sorted(values, (1.0 - level) / 2.0);
      interval.hi = quantile_type7_sorted(values, 1.0 - (1.0 - level) / 2.0);
      interval.full_sample = res.full_network.weights(i, j);
      out.push_back(interval);
    }
  }
  return out;
}

DifferenceResult difference_test(const BootstrapResult& res, DiffWhat what,
                                 int a_i, int a_j, int b_i, int b_j,
                                 double level) {
  if (res.kind != BootKind::Nonparametric) {
    throw Error(ErrorCode::WrongKind,
                "difference tests require a nonparametric bootstrap");
  }
  const std::vector<double> a = replicate_values(res, what, a_i, a_j);
  const std::vector<double> b = replicate_values(res, what, b_i, b_j);
  std::vector<double> diff(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diff[k] = a[k] - b[k];
  std::sort(diff.begin(), diff.end());

  DifferenceResult out;
  out.lo = quantile_type7_sorted(diff, (1.0 - level) / 2.0);
  out.hi = quantile_type7_sorted(diff, 1.0 - (1.0 - level) / 2.0);
  out.significant = out.lo > 0.0 || out.hi < 0.0;
  if (what == DiffWhat::EdgeVsEdge) {
    out.observed = res.full_network.weights(a_i, a_j) -
                   res.full_network.weights(b_i, b_j);
  } else {
    const auto s = strength(res.full_network);
    out.observed = s[static_cast<std::size_t>(a_i)] -
                   s[static_cast<std::size_t>(b_i)];
  }
  return out;
}

const char* centrality_index_name(CentralityIndex index) {
  switch (index) {
    case CentralityIndex::Strength: return "strength";
    case CentralityIndex::Closeness: return "closeness";
    case CentralityIndex::Betweenness: return "betweenness";
  }
  return "unknown";
}

double cs_coefficient(const BootstrapResult& res, CentralityIndex index,
                      double cor_threshold, double certainty) {
  if (res.kind != BootKind::CaseDropping) {
    throw Error(ErrorCode::WrongKind,
                "the CS-coefficient requires a case-dropping bootstrap");
  }
  const auto pick = [&](const CentralityTable& t) -> const std::vector<double>& {
    switch (index) {
      case CentralityIndex::Closeness: return t.closeness;
      case CentralityIndex::Betweenness: return t.betweenness;
      case CentralityIndex::Strength:
      default: return t.strength;
    }
  };
  const std::vector<double>& full = pick(res.full_centrality);

  std::set<double> levels;
  for (const auto& rep : res.replicates) levels.insert(rep.proportion);

  double best_drop = 0.0;
  for (double prop : levels) {
    int total = 0, passing = 0;
    for (const auto& rep : res.replicates) {
      if (rep.proportion != prop) continue;
      ++total;
      const double r = pearson(full, pick(rep.centrality));
      if (!std::isnan(r) && r >= cor_threshold) ++passing;
    }
    if (total == 0) continue;
    const double drop = 1.0 - prop;
    if (static_cast<double>(passing) >= certainty * total && drop > best_drop) {
      best_drop = drop;
    }
  }
  return best_drop;
}

const char* cs_interpretation(double cs) {
  if (cs >= 0.5) return "stable";
  if (cs >= 0.25) return "minimally acceptable";
  return "unstable";
}

void centrality_confidence_intervals(const BootstrapResult&, CentralityIndex) {
  throw Error(ErrorCode::Unsupported,
              "confidence intervals cannot be constructed for centrality "
              "indices; run a case-dropping bootstrap and report the "
              "CS-coefficient instead");
}

ComparisonResult permutation_comparison(const DataMatrix& data_a,
                                        const DataMatrix& data_b,
                                        const EstimatorConfig& config,
                                        int n_perm, std::uint64_t seed,
                                        int threads) {
  data_a.validate();
  data_b.validate();
  if (data_a.n_cols() != data_b.n_cols() || data_a.labels != data_b.labels ||
      data_a.scales != data_b.scales) {
    throw Error(ErrorCode::ColumnMismatch,
                "the two datasets must share columns and scales");
  }
  if (n_perm < 0) {
    throw Error(ErrorCode::InvalidArgument, "n_perm must be >= 0");
  }
  const int n_a = static_cast<int>(data_a.n_rows());
  const int n_b = static_cast<int>(data_b.n_rows());

  // Pool rows: 0..n_a-1 from A, n_a..n_a+n_b-1 from B.
  DataMatrix pooled = data_a;
  pooled.values.conservativeResize(n_a + n_b, Eigen::NoChange);
  pooled.values.bottomRows(n_b) = data_b.values;

  EstimatorConfig inner = config;
  const auto estimate_groups = [&](const std::vector<int>& rows_a,
                                   const std::vector<int>& rows_b) {
    const EstimateResult est_a = estimate_network(pooled.take_rows(rows_a), inner);
    const EstimateResult est_b = estimate_network(pooled.take_rows(rows_b), inner);
    return std::pair<double, double>{
        std::fabs(global_strength(est_a.network) -
                  global_strength(est_b.network)),
        max_edge_diff(est_a.network, est_b.network)};
  };

  std::vector<int> obs_a(static_cast<std::size_t>(n_a));
  std::vector<int> obs_b(static_cast<std::size_t>(n_b));
  for (int i = 0; i < n_a; ++i) obs_a[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < n_b; ++i) obs_b[static_cast<std::size_t>(i)] = n_a + i;
  inner.threads = 1;
  const auto [obs_global, obs_max_edge] = estimate_groups(obs_a, obs_b);

  std::vector<double> perm_global(static_cast<std::size_t>(n_perm));
  std::vector<double> perm_max_edge(static_cast<std::size_t>(n_perm));
  parallel_for(static_cast<std::size_t>(n_perm), threads, [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    std::vector<int> all(static_cast<std::size_t>(n_a + n_b));
    for (int i = 0; i < n_a + n_b; ++i) all[static_cast<std::size_t>(i)] = i;
    rng.shuffle(all);
    std::vector<int> ra(all.begin(), all.begin() + n_a);
    std::vector<int> rb(all.begin() + n_a, all.end());
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    const auto [g, m] = estimate_groups(ra, rb);
    perm_global[k] = g;
    perm_max_edge[k] = m;
  });

  int count_global = 0, count_max_edge = 0;
  for (int k = 0; k < n_perm; ++k) {
    if (perm_global[static_cast<std::size_t>(k)] >= obs_global) ++count_global;
    if (perm_max_edge[static_cast<std::size_t>(k)] >= obs_max_edge)
      ++count_max_edge;
  }

  ComparisonResult out;
  out.stat_global_strength = obs_global;
  out.stat_max_edge_diff = obs_max_edge;
  out.p_global = (1.0 + count_global) / (1.0 + n_perm);
  out.p_max_edge = (1.0 + count_max_edge) / (1.0 + n_perm);
  out.n_permutations = n_perm;
  out.seed = seed;
  const double larger = std::max(n_a, n_b);
  const double smaller = std::min(n_a, n_b);
  if (smaller < 0.8 * larger) {
    out.warnings.push_back(
        "group sizes differ by more than 20%; connectivity comparisons are "
        "only meaningful for roughly equal sample sizes");
  }
  return out;
}

}  // namespace pcornet
