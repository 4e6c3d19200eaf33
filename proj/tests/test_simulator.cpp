#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pcornet/correlation.hpp"
#include "pcornet/errors.hpp"
#include "pcornet/glasso.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/simulator.hpp"

using namespace pcornet;

namespace {

PcorNetwork empty_net(int p) {
  PcorNetwork net;
  net.weights = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) net.labels.push_back("V" + std::to_string(i + 1));
  return net;
}

PcorNetwork random_sparse_net(int p, std::uint64_t seed) {
  Rng rng(seed);
  PcorNetwork net = empty_net(p);
  for (int i = 0; i < p; ++i) {
    const int j = (i + 1) % p;
    const double w = rng.next_uniform(-0.35, 0.35);
    net.weights(i, j) = net.weights(j, i) = w;
  }
  return net;
}

}  // namespace

TEST_CASE("network_to_precision: identities and round trip") {
  const PrecisionMatrix eye = network_to_precision(empty_net(5));
  CHECK((eye.k - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((eye.implied_cov - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <=
        1e-14);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PcorNetwork net = random_sparse_net(6, seed);
    const PrecisionMatrix k = network_to_precision(net);
    const PcorNetwork back = precision_to_pcor(k, net.labels);
    CHECK((back.weights - net.weights).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("network_to_precision rejects invalid networks loudly") {
  PcorNetwork bad = empty_net(3);
  bad.weights(0, 1) = bad.weights(1, 0) = 0.8;
  bad.weights(0, 2) = bad.weights(2, 0) = 0.8;
  bad.weights(1, 2) = bad.weights(2, 1) = 0.8;
  CHECK_THROWS_AS(network_to_precision(bad), Error);
  try {
    network_to_precision(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
  }
}

TEST_CASE("chain graphs: shape, weight range, positive definiteness") {
  const PcorNetwork net = chain_graph(8, 0.3, 0.4, 7);
  CHECK(net.edge_count() == 8);
  for (int i = 0; i < 8; ++i) {
    int degree = 0;
    for (int j = 0; j < 8; ++j) {
      if (net.weights(i, j) != 0.0) {
        ++degree;
        CHECK(net.weights(i, j) >= 0.3);
        CHECK(net.weights(i, j) <= 0.4);
      }
    }
    CHECK(degree == 2);
  }
  for (int p = 3; p <= 40; ++p) {
    CHECK_NOTHROW(network_to_precision(chain_graph(p, 0.3, 0.4, p)));
  }
  CHECK_THROWS_AS(chain_graph(2), Error);

  const PcorNetwork signed_net = chain_graph(8, 0.3, 0.4, 7, true);
  bool has_negative = false;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      if (signed_net.weights(i, j) < 0.0) has_negative = true;
  CHECK(has_negative);
}

TEST_CASE("sample_ggm: independence, determinism, consistency") {
  const DataMatrix indep = sample_ggm(empty_net(4), 10000, 3);
  const CorrelationMatrix r = pearson_corr(indep);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(std::fabs(r.entries(i, j)) < 0.05);

  const DataMatrix a = sample_ggm(empty_net(4), 50, 11);
  const DataMatrix b = sample_ggm(empty_net(4), 50, 11);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);

  // Unregularized partial correlations converge to the generating weights.
  const PcorNetwork truth = chain_graph(6, 0.3, 0.4, 19);
  const DataMatrix big = sample_ggm(truth, 100000, 23);
  const PcorNetwork est = nodewise_pcor(big);
  CHECK((est.weights - truth.weights).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("ordinalize: splits, codes, order, modes") {
  const DataMatrix cont = sample_ggm(empty_net(2), 10000, 31);
  const DataMatrix two = ordinalize(cont, 2);
  int ones = 0;
  for (double v : two.column(0)) {
    CHECK((v == 0.0 || v == 1.0));
    ones += v == 1.0;
  }
  CHECK(std::fabs(ones / 10000.0 - 0.5) < 0.02);

  const DataMatrix five = ordinalize(cont, 5);
  std::set<double> uniques;
  for (double v : five.column(0)) uniques.insert(v);
  for (double v : uniques) {
    CHECK(v >= 0.0);
    CHECK(v <= 4.0);
  }
  CHECK(five.scales[0] == Scale::Ordinal);

  // Monotone thresholds keep the within-column order.
  const auto before = cont.column(0);
  const auto after = five.column(0);
  int violations = 0;
  for (std::size_t i = 1; i < before.size(); ++i) {
    if (before[i] > before[i - 1] && after[i] < after[i - 1]) ++violations;
    if (before[i] < before[i - 1] && after[i] > after[i - 1]) ++violations;
  }
  CHECK(violations == 0);

  const DataMatrix s1 = ordinalize(cont, 4, ThresholdMode::Sampled, 5);
  const DataMatrix s2 = ordinalize(cont, 4, ThresholdMode::Sampled, 5);
  CHECK((s1.values - s2.values).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(ordinalize(cont, 1), Error);
  CHECK_THROWS_AS(ordinalize(cont, 11), Error);
}

TEST_CASE("compare_networks metrics") {
  const PcorNetwork truth = chain_graph(8, 0.3, 0.4, 3);
  const CompareMetrics perfect = compare_networks(truth, truth);
  CHECK(*perfect.sensitivity == 1.0);
  CHECK(*perfect.specificity == 1.0);
  CHECK(*perfect.edge_correlation == doctest::Approx(1.0));

  const CompareMetrics miss = compare_networks(truth, empty_net(8));
  CHECK(*miss.sensitivity == 0.0);
  CHECK(*miss.specificity == 1.0);
  CHECK_FALSE(miss.edge_correlation.has_value());  // zero-variance estimate

  PcorNetwork spurious = truth;
  spurious.weights(0, 4) = spurious.weights(4, 0) = 0.2;
  const CompareMetrics extra = compare_networks(truth, spurious);
  CHECK(*extra.sensitivity == 1.0);
  CHECK(*extra.specificity == doctest::Approx(19.0 / 20.0));

  // Sensitivity is undefined for an empty truth.
  const CompareMetrics none = compare_networks(empty_net(8), truth);
  CHECK_FALSE(none.sensitivity.has_value());
  CHECK(*none.specificity == doctest::Approx(20.0 / 28.0));

  CHECK_THROWS_AS(compare_networks(truth, empty_net(5)), Error);
}

TEST_CASE("net_simulator: empty truth keeps specificity high") {
  SimulationGrid grid;
  grid.true_network = empty_net(6);
  grid.n_cases = {250};
  grid.n_reps = 10;
  grid.master_seed = 5;
  const SimulationResult res = net_simulator(grid, 0);
  const auto summaries = summarize(res);
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].n_failed == 0);
  CHECK(*summaries[0].specificity >= 0.9);
  CHECK(summaries[0].n_sensitivity == 0);  // undefined on an empty truth
}

TEST_CASE("net_simulator: sensitivity grows with n on chain truth") {
  SimulationGrid grid;
  grid.true_network = chain_graph(8, 0.3, 0.4, 13);
  grid.n_cases = {100, 1000};
  grid.n_reps = 10;
  grid.master_seed = 99;
  EstimatorConfig est;
  est.cor_method = CorMethod::Pearson;
  grid.estimators = {est};
  const SimulationResult res = net_simulator(grid, 0);
  const auto summaries = summarize(res);
  REQUIRE(summaries.size() == 2);
  CHECK(*summaries[1].sensitivity >= *summaries[0].sensitivity);
  CHECK(*summaries[1].edge_correlation >= *summaries[0].edge_correlation);
}

TEST_CASE("equal-weight cycle truth marks betweenness correlation undefined") {
  PcorNetwork ring = empty_net(8);
  for (int i = 0; i < 8; ++i) {
    const int j = (i + 1) % 8;
    ring.weights(i, j) = ring.weights(j, i) = 0.35;
  }
  SimulationGrid grid;
  grid.true_network = ring;
  grid.n_cases = {200};
  grid.n_reps = 5;
  grid.master_seed = 8;
  const auto summaries = summarize(net_simulator(grid, 0));
  CHECK(summaries[0].n_betweenness == 0);
  CHECK_FALSE(summaries[0].betweenness_correlation.has_value());
}

TEST_CASE("net_simulator is deterministic for any worker count") {
  SimulationGrid grid;
  grid.true_network = chain_graph(6, 0.3, 0.4, 3);
  grid.n_cases = {100, 250};
  grid.n_reps = 6;
  grid.master_seed = 2024;
  const SimulationResult serial = net_simulator(grid, 1);
  const SimulationResult parallel = net_simulator(grid, 2);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    const auto& a = serial.rows[i];
    const auto& b = parallel.rows[i];
    CHECK(a.converged == b.converged);
    CHECK(a.sensitivity == b.sensitivity);
    CHECK(a.specificity == b.specificity);
    CHECK(a.edge_correlation == b.edge_correlation);
    CHECK(a.strength_correlation == b.strength_correlation);
  }
}

TEST_CASE("net_simulator rejects invalid grids") {
  SimulationGrid grid;
  grid.true_network = chain_graph(6, 0.3, 0.4, 3);
  grid.n_cases = {5};
  CHECK_THROWS_AS(net_simulator(grid, 1), Error);
  grid.n_cases = {};
  CHECK_THROWS_AS(net_simulator(grid, 1), Error);
}

TEST_CASE("mixed continuous and ordinal columns flow through the pipeline") {
  const PcorNetwork truth = chain_graph(5, 0.3, 0.4, 71);
  DataMatrix data = sample_ggm(truth, 400, 73);
  const DataMatrix coded = ordinalize(data, 5);
  data.values.col(1) = coded.values.col(1);  // polyserial pairs
  data.values.col(3) = coded.values.col(3);
  detect_scales(data);
  REQUIRE(data.scales[1] == Scale::Ordinal);
  REQUIRE(data.scales[0] == Scale::Continuous);

  EstimatorConfig config;  // auto correlations + EBIC glasso
  const EstimateResult est = estimate_network(data, config);
  CHECK(est.correlation.method == CorMethod::AutoMixed);
  CHECK(est.network.p() == 5);
  const CompareMetrics m = compare_networks(truth, est.network);
  CHECK(*m.sensitivity >= 0.6);
  CHECK(*m.specificity >= 0.8);
}

TEST_CASE("ordinal generator answers the sample-size question end to end") {
  SimulationGrid grid;
  grid.true_network = chain_graph(6, 0.3, 0.4, 17);
  grid.n_cases = {500};
  grid.n_reps = 4;
  grid.generator.ordinal = true;
  grid.generator.levels = 5;
  grid.master_seed = 31;
  const SimulationResult res = net_simulator(grid, 0);
  for (const auto& row : res.rows) {
    CHECK(row.converged);
    CHECK(row.sensitivity.has_value());
  }
}
