#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pcornet/bootstrap.hpp"
#include "pcornet/errors.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/simulator.hpp"
#include "pcornet/stats.hpp"

using namespace pcornet;

namespace {

EstimatorConfig pearson_glasso() {
  EstimatorConfig config;
  config.cor_method = CorMethod::Pearson;
  return config;
}

EstimatorConfig pearson_unregularized() {
  EstimatorConfig config;
  config.cor_method = CorMethod::Pearson;
  config.kind = EstimatorKind::Unregularized;
  return config;
}

PcorNetwork net_with_edge(int p, int i, int j, double w) {
  PcorNetwork net;
  net.weights = Matrix::Zero(p, p);
  for (int t = 0; t < p; ++t) net.labels.push_back("V" + std::to_string(t + 1));
  net.weights(i, j) = net.weights(j, i) = w;
  return net;
}

CentralityTable table_from_strength(std::vector<double> s) {
  CentralityTable t;
  t.strength = std::move(s);
  t.closeness = t.strength;
  t.betweenness = t.strength;
  return t;
}

// Synthetic case-dropping result with scripted pass/fail correlations:
// a "pass" replicate copies the full-sample vector (correlation 1), a
// "fail" replicate negates it (correlation -1).
BootstrapResult scripted_case_result(
    const std::vector<std::pair<double, std::vector<bool>>>& levels) {
  BootstrapResult res;
  res.kind = BootKind::CaseDropping;
  res.full_network = net_with_edge(3, 0, 1, 0.5);
  res.full_centrality = table_from_strength({1.0, 2.0, 3.0});
  int index = 0;
  for (const auto& [proportion, passes] : levels) {
    for (bool pass : passes) {
      BootReplicate rep;
      rep.index = index++;
      rep.proportion = proportion;
      rep.network = res.full_network;
      rep.centrality = table_from_strength(
          pass ? std::vector<double>{1.0, 2.0, 3.0}
               : std::vector<double>{3.0, 2.0, 1.0});
      res.replicates.push_back(std::move(rep));
    }
  }
  return res;
}

std::vector<bool> passes(int total, int good) {
  std::vector<bool> v(total, false);
  for (int i = 0; i < good; ++i) v[i] = true;
  return v;
}

}  // namespace

TEST_CASE("nonparametric bootstrap: determinism and bookkeeping") {
  const DataMatrix data = sample_ggm(chain_graph(5, 0.3, 0.4, 3), 150, 7);
  const auto a = nonparametric_boot(data, pearson_glasso(), 40, 99, 1);
  const auto b = nonparametric_boot(data, pearson_glasso(), 40, 99, 2);
  REQUIRE(a.replicates.size() == b.replicates.size());
  REQUIRE(a.replicates.size() + a.failures.size() == 40);
  for (std::size_t k = 0; k < a.replicates.size(); ++k) {
    CHECK(a.replicates[k].index == b.replicates[k].index);
    CHECK((a.replicates[k].network.weights - b.replicates[k].network.weights)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(a.replicates[k].proportion == 1.0);
    CHECK(a.replicates[k].n_rows == 150);
    CHECK(a.replicates[k].n_unique_rows <= 150);
  }
}

TEST_CASE("nonparametric bootstrap: degenerate input fails loudly") {
  Matrix values(20, 3);
  for (int i = 0; i < 20; ++i) {
    values(i, 0) = 1.0;
    values(i, 1) = 2.0;
    values(i, 2) = 3.0;
  }
  CHECK_THROWS_AS(
      nonparametric_boot(make_data(values), pearson_glasso(), 8, 1, 1), Error);
  try {
    nonparametric_boot(make_data(values), pearson_glasso(), 8, 1, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyFailures);
  }
}

TEST_CASE("nonparametric bootstrap: zero replicates is a valid empty result") {
  const DataMatrix data = sample_ggm(chain_graph(4, 0.3, 0.4, 5), 80, 9);
  const auto res = nonparametric_boot(data, pearson_glasso(), 0, 1, 1);
  CHECK(res.replicates.empty());
  CHECK(res.failures.empty());
  CHECK(res.full_network.p() == 4);
}

TEST_CASE("edge quantile intervals") {
  // Synthetic replicates: one edge with weights 1..100.
  BootstrapResult res;
  res.kind = BootKind::Nonparametric;
  res.full_network = net_with_edge(2, 0, 1, 50.0);
  res.full_centrality = table_from_strength({50.0, 50.0});
  for (int k = 1; k <= 100; ++k) {
    BootReplicate rep;
    rep.index = k - 1;
    rep.network = net_with_edge(2, 0, 1, static_cast<double>(k));
    rep.centrality = table_from_strength({double(k), double(k)});
    res.replicates.push_back(std::move(rep));
  }
  const auto intervals = edge_quantile_intervals(res, 0.95);
  REQUIRE(intervals.size() == 1);
  CHECK(intervals[0].lo == doctest::Approx(3.475).epsilon(1e-12));
  CHECK(intervals[0].hi == doctest::Approx(97.525).epsilon(1e-12));

  const auto collapsed = edge_quantile_intervals(res, 0.0);
  CHECK(collapsed[0].lo == doctest::Approx(50.5));
  CHECK(collapsed[0].hi == doctest::Approx(50.5));

  const auto full_range = edge_quantile_intervals(res, 1.0);
  CHECK(full_range[0].lo == 1.0);
  CHECK(full_range[0].hi == 100.0);

  // All replicates identical: the interval collapses onto that value.
  BootstrapResult constant = res;
  for (auto& rep : constant.replicates) {
    rep.network = net_with_edge(2, 0, 1, 0.37);
  }
  const auto point = edge_quantile_intervals(constant, 0.95);
  CHECK(point[0].lo == 0.37);
  CHECK(point[0].hi == 0.37);

  BootstrapResult wrong = res;
  wrong.kind = BootKind::CaseDropping;
  CHECK_THROWS_AS(edge_quantile_intervals(wrong, 0.95), Error);
}

TEST_CASE("difference test on scripted replicates") {
  BootstrapResult res;
  res.kind = BootKind::Nonparametric;
  res.full_network = net_with_edge(3, 0, 1, 0.4);
  res.full_network.weights(0, 2) = res.full_network.weights(2, 0) = 0.2;
  res.full_centrality = table_from_strength({0.6, 0.4, 0.2});
  for (int k = 0; k < 50; ++k) {
    BootReplicate rep;
    rep.index = k;
    rep.network = net_with_edge(3, 0, 1, 0.4);
    rep.network.weights(0, 2) = rep.network.weights(2, 0) = 0.2;
    rep.centrality = table_from_strength({0.6, 0.4, 0.2});
    res.replicates.push_back(std::move(rep));
  }

  // Same edge vs itself: difference identically zero, never significant.
  const auto same =
      difference_test(res, DiffWhat::EdgeVsEdge, 0, 1, 0, 1, 0.95);
  CHECK_FALSE(same.significant);
  CHECK(same.lo == 0.0);
  CHECK(same.hi == 0.0);

  // All replicate differences equal +0.2.
  const auto shifted =
      difference_test(res, DiffWhat::EdgeVsEdge, 0, 1, 0, 2, 0.95);
  CHECK(shifted.significant);
  CHECK(shifted.lo == doctest::Approx(0.2));
  CHECK(shifted.hi == doctest::Approx(0.2));

  const auto strength_diff = difference_test(
      res, DiffWhat::NodeStrengthVsNodeStrength, 0, -1, 2, -1, 0.95);
  CHECK(strength_diff.significant);
  CHECK(strength_diff.observed == doctest::Approx(0.4));

  CHECK_THROWS_AS(difference_test(res, DiffWhat::EdgeVsEdge, 0, 9, 0, 1, 0.95),
                  Error);
}

TEST_CASE("difference test calibration on null data (smoke)") {
  // Two edges of independent noise; rejection should be rare but nonzero
  // over repeats. The full +-3pt calibration lives in the acceptance suite.
  int rejections = 0;
  const int meta = 40;
  for (int m = 0; m < meta; ++m) {
    PcorNetwork indep;
    indep.weights = Matrix::Zero(4, 4);
    indep.labels = {"A", "B", "C", "D"};
    const DataMatrix data = sample_ggm(indep, 200, 1000 + m);
    const auto res =
        nonparametric_boot(data, pearson_unregularized(), 200, 55 + m, 0);
    const auto d = difference_test(res, DiffWhat::EdgeVsEdge, 0, 1, 2, 3, 0.95);
    rejections += d.significant ? 1 : 0;
  }
  CHECK(rejections <= meta / 4);
}

TEST_CASE("case-dropping bootstrap basics") {
  const DataMatrix data = sample_ggm(chain_graph(5, 0.3, 0.4, 11), 200, 13);

  // Retained proportion 1.0 reproduces the full-sample estimate exactly.
  const auto full = case_dropping_boot(data, pearson_glasso(), {1.0}, 4, 3, 1);
  for (const auto& rep : full.replicates) {
    CHECK((rep.network.weights - full.full_network.weights)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  const auto a = case_dropping_boot(data, pearson_glasso(),
                                    {0.9, 0.6, 0.3}, 30, 77, 1);
  const auto b = case_dropping_boot(data, pearson_glasso(),
                                    {0.9, 0.6, 0.3}, 30, 77, 2);
  REQUIRE(a.replicates.size() == b.replicates.size());
  for (std::size_t k = 0; k < a.replicates.size(); ++k) {
    CHECK(a.replicates[k].proportion == b.replicates[k].proportion);
    CHECK((a.replicates[k].network.weights - b.replicates[k].network.weights)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  // 30 replicates split evenly over 3 levels.
  int low = 0, mid = 0, high = 0;
  for (const auto& rep : a.replicates) {
    low += rep.proportion == 0.3;
    mid += rep.proportion == 0.6;
    high += rep.proportion == 0.9;
  }
  CHECK(low + mid + high == static_cast<int>(a.replicates.size()));
  CHECK(std::abs(low - high) <= static_cast<int>(a.failures.size()) + 1);
}

TEST_CASE("stability degrades as more cases are dropped") {
  const DataMatrix data = sample_ggm(chain_graph(8, 0.3, 0.4, 21), 500, 23);
  const auto res = case_dropping_boot(data, pearson_glasso(),
                                      {0.9, 0.6, 0.3}, 150, 5, 0);
  std::vector<double> props = {0.9, 0.6, 0.3};
  std::vector<double> mean_cor;
  for (double prop : props) {
    double sum = 0.0;
    int count = 0;
    for (const auto& rep : res.replicates) {
      if (rep.proportion != prop) continue;
      const double r =
          pearson(res.full_centrality.strength, rep.centrality.strength);
      if (!std::isnan(r)) {
        sum += r;
        ++count;
      }
    }
    REQUIRE(count > 0);
    mean_cor.push_back(sum / count);
  }
  // Spearman trend of mean correlation against drop fraction is <= 0.
  CHECK(mean_cor[0] >= mean_cor[2]);
  const std::vector<double> drops = {0.1, 0.4, 0.7};
  CHECK(pearson(mid_ranks(drops), mid_ranks(mean_cor)) <= 0.0);
}

TEST_CASE("cs coefficient follows its definition exactly") {
  // 20 replicates per level; certainty 0.95 needs >= 19 passes.
  const auto all_pass = scripted_case_result({{0.9, passes(20, 20)},
                                              {0.8, passes(20, 20)},
                                              {0.7, passes(20, 20)},
                                              {0.5, passes(20, 20)},
                                              {0.3, passes(20, 20)}});
  CHECK(cs_coefficient(all_pass, CentralityIndex::Strength) == 0.7);

  const auto partial = scripted_case_result({{0.9, passes(20, 20)},
                                             {0.8, passes(20, 19)},
                                             {0.7, passes(20, 18)},
                                             {0.5, passes(20, 2)},
                                             {0.3, passes(20, 0)}});
  CHECK(cs_coefficient(partial, CentralityIndex::Strength) == doctest::Approx(0.2));

  // 94% < 95% at every level: coefficient is 0.
  const auto near_miss = scripted_case_result(
      {{0.9, passes(50, 47)}, {0.7, passes(50, 47)}, {0.5, passes(50, 47)}});
  CHECK(cs_coefficient(near_miss, CentralityIndex::Strength) == 0.0);

  // Monotone in the correlation threshold and the certainty level.
  const auto run = scripted_case_result({{0.9, passes(20, 20)},
                                         {0.7, passes(20, 19)},
                                         {0.5, passes(20, 15)}});
  const double base = cs_coefficient(run, CentralityIndex::Strength, 0.7, 0.95);
  CHECK(cs_coefficient(run, CentralityIndex::Strength, 0.99, 0.95) <= base);
  CHECK(cs_coefficient(run, CentralityIndex::Strength, 0.7, 0.999) <= base);

  BootstrapResult wrong = all_pass;
  wrong.kind = BootKind::Nonparametric;
  CHECK_THROWS_AS(cs_coefficient(wrong, CentralityIndex::Strength), Error);
}

TEST_CASE("strength is the most stable index on chain-graph data") {
  const DataMatrix data = sample_ggm(chain_graph(8, 0.3, 0.4, 2), 500, 102);
  const auto res = case_dropping_boot(data, pearson_glasso(),
                                      default_case_proportions(), 210, 202, 0);
  const double s = cs_coefficient(res, CentralityIndex::Strength);
  const double b = cs_coefficient(res, CentralityIndex::Betweenness);
  CHECK(s >= b);
}

TEST_CASE("cs interpretation thresholds") {
  CHECK(std::string(cs_interpretation(0.6)) == "stable");
  CHECK(std::string(cs_interpretation(0.5)) == "stable");
  CHECK(std::string(cs_interpretation(0.3)) == "minimally acceptable");
  CHECK(std::string(cs_interpretation(0.25)) == "minimally acceptable");
  CHECK(std::string(cs_interpretation(0.1)) == "unstable");
}

TEST_CASE("centrality confidence intervals are refused with guidance") {
  BootstrapResult res;
  res.kind = BootKind::Nonparametric;
  try {
    centrality_confidence_intervals(res, CentralityIndex::Strength);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
    CHECK(std::string(e.what()).find("CS-coefficient") != std::string::npos);
  }
}

TEST_CASE("permutation comparison: contracts and edge cases") {
  const DataMatrix a = sample_ggm(chain_graph(4, 0.3, 0.4, 31), 120, 33);
  const DataMatrix b = sample_ggm(chain_graph(4, 0.3, 0.4, 31), 120, 35);

  const auto res = permutation_comparison(a, b, pearson_unregularized(),
                                          99, 7, 0);
  CHECK(res.p_global >= 1.0 / 100.0);
  CHECK(res.p_global <= 1.0);
  CHECK(res.p_max_edge >= 1.0 / 100.0);
  CHECK(res.n_permutations == 99);

  // Zero permutations: the +1 smoothing pins p at 1.
  const auto none = permutation_comparison(a, b, pearson_unregularized(),
                                           0, 7, 1);
  CHECK(none.p_global == 1.0);
  CHECK(none.p_max_edge == 1.0);

  DataMatrix mismatched = b;
  mismatched.labels[0] = "renamed";
  CHECK_THROWS_AS(
      permutation_comparison(a, mismatched, pearson_unregularized(), 10, 1, 1),
      Error);

  // Unequal group sizes trigger the comparability warning.
  const DataMatrix small = sample_ggm(chain_graph(4, 0.3, 0.4, 31), 60, 37);
  const auto warned =
      permutation_comparison(a, small, pearson_unregularized(), 9, 7, 1);
  CHECK(!warned.warnings.empty());
}

TEST_CASE("permutation comparison is deterministic across worker counts") {
  const DataMatrix a = sample_ggm(chain_graph(4, 0.3, 0.4, 41), 80, 43);
  const DataMatrix b = sample_ggm(chain_graph(4, 0.3, 0.4, 41), 80, 45);
  const auto r1 = permutation_comparison(a, b, pearson_glasso(), 60, 11, 1);
  const auto r2 = permutation_comparison(a, b, pearson_glasso(), 60, 11, 2);
  CHECK(r1.p_global == r2.p_global);
  CHECK(r1.p_max_edge == r2.p_max_edge);
  CHECK(r1.stat_global_strength == r2.stat_global_strength);
  CHECK(r1.stat_max_edge_diff == r2.stat_max_edge_diff);
}

TEST_CASE("a strong edge difference is detected with high power") {
  // Groups differ by one strong edge (0.4 vs 0); the max-edge statistic
  // should reject in at least 80% of repeated experiments.
  PcorNetwork net_a;
  net_a.weights = Matrix::Zero(4, 4);
  net_a.labels = {"V1", "V2", "V3", "V4"};
  PcorNetwork net_b = net_a;
  net_b.weights(0, 1) = net_b.weights(1, 0) = 0.4;
  int hits = 0;
  const int meta = 20;
  for (int m = 0; m < meta; ++m) {
    const DataMatrix da = sample_ggm(net_a, 500, 20000 + 2 * m);
    const DataMatrix db = sample_ggm(net_b, 500, 20001 + 2 * m);
    const auto res = permutation_comparison(da, db, pearson_unregularized(),
                                            199, 30000 + m, 0);
    hits += res.p_max_edge < 0.05;
  }
  CHECK(hits >= static_cast<int>(0.8 * meta));
}
