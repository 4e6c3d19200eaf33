#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "pcornet/correlation.hpp"
#include "pcornet/data.hpp"
#include "pcornet/errors.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/simulator.hpp"
#include "pcornet/stats.hpp"

using namespace pcornet;

namespace {

// Independent oracle: textbook correlation by a naive double loop.
double naive_corr(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx += (x[i] - mx) * (x[i] - mx);
    dy += (y[i] - my) * (y[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

DataMatrix random_normal_data(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix values(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) values(i, j) = rng.next_normal();
  return make_data(std::move(values));
}

// One latent bivariate-normal pair, each side cut into ordinal levels.
DataMatrix latent_ordinal_pair(double rho, int n, int levels,
                               std::uint64_t seed) {
  PcorNetwork net;
  net.weights = Matrix::Zero(2, 2);
  net.weights(0, 1) = net.weights(1, 0) = rho;  // p = 2: pcor == correlation
  net.labels = {"X", "Y"};
  return ordinalize(sample_ggm(net, n, seed), levels);
}

void check_corr_invariants(const CorrelationMatrix& m) {
  const Eigen::Index p = m.p();
  for (Eigen::Index i = 0; i < p; ++i) {
    CHECK(m.entries(i, i) == 1.0);
    for (Eigen::Index j = 0; j < p; ++j) {
      CHECK(m.entries(i, j) == m.entries(j, i));
      CHECK(m.entries(i, j) >= -1.0);
      CHECK(m.entries(i, j) <= 1.0);
    }
  }
  CHECK(min_eigenvalue(m.entries) >= -1e-10);
}

}  // namespace

TEST_CASE("pearson: perfect correlation and sign flip") {
  Matrix values(5, 3);
  for (int i = 0; i < 5; ++i) {
    values(i, 0) = i + 1.0;
    values(i, 1) = i + 1.0;
    values(i, 2) = -(i + 1.0);
  }
  const auto m = pearson_corr(make_data(values));
  CHECK(m.entries(0, 1) == doctest::Approx(1.0));
  CHECK(m.entries(0, 2) == doctest::Approx(-1.0));
  CHECK(m.pairwise_n(0, 1) == 5);
}

TEST_CASE("pearson matches the naive double-loop oracle on simulated data") {
  const DataMatrix data = random_normal_data(100, 3, 91);
  const auto m = pearson_corr(data);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double want = naive_corr(data.column(a), data.column(b));
      CHECK(m.entries(a, b) == doctest::Approx(want).epsilon(1e-12));
      CHECK(std::fabs(m.entries(a, b)) < 0.35);
    }
  }
  CHECK(min_eigenvalue(m.entries) > 0.0);
}

TEST_CASE("pearson error contracts") {
  Matrix values(4, 2);
  values << 1, 1, 1, 2, 1, 3, 1, 4;  // first column constant
  CHECK_THROWS_AS(pearson_corr(make_data(values)), Error);
  Matrix sparse(4, 2);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  sparse << 1, nan, 2, nan, nan, 3, nan, 4;  // no complete pairs
  CHECK_THROWS_AS(pearson_corr(make_data(sparse)), Error);
}

TEST_CASE("spearman: rank facts") {
  Matrix values(4, 2);
  values << 1, 4, 2, 3, 3, 2, 4, 1;
  const auto rev = spearman_corr(make_data(values));
  CHECK(rev.entries(0, 1) == doctest::Approx(-1.0));

  // Ties: hand-computed Pearson of mid-ranks.
  Matrix tied(4, 2);
  tied << 1, 1, 2, 3, 2, 2, 4, 4;
  const auto m = spearman_corr(make_data(tied));
  CHECK(m.entries(0, 1) ==
        doctest::Approx(0.9486832980505138).epsilon(1e-12));
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
  for (int rep = 0; rep < 10; ++rep) {
    const DataMatrix data = random_normal_data(60, 2, 100 + rep);
    DataMatrix warped = data;
    for (int i = 0; i < 60; ++i) {
      warped.values(i, 0) = std::exp(data.values(i, 0));
      const double v = data.values(i, 1);
      warped.values(i, 1) = v * v * v + 2.0 * v;
    }
    const double a = spearman_corr(data).entries(0, 1);
    const double b = spearman_corr(warped).entries(0, 1);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("threshold estimation from marginal proportions") {
  std::vector<double> binary;
  for (int i = 0; i < 50; ++i) binary.push_back(0);
  for (int i = 0; i < 50; ++i) binary.push_back(1);
  const auto t1 = estimate_thresholds(binary);
  REQUIRE(t1.cuts.size() == 1);
  CHECK(t1.cuts[0] == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> four;
  for (int level = 0; level < 4; ++level)
    for (int i = 0; i < 25; ++i) four.push_back(level);
  const auto t2 = estimate_thresholds(four);
  REQUIRE(t2.cuts.size() == 3);
  CHECK(t2.cuts[0] == doctest::Approx(-0.6744897501960817).epsilon(1e-9));
  CHECK(t2.cuts[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(t2.cuts[2] == doctest::Approx(0.6744897501960817).epsilon(1e-9));

  std::vector<double> skewed;
  for (int i = 0; i < 10; ++i) skewed.push_back(0);
  for (int i = 0; i < 80; ++i) skewed.push_back(1);
  for (int i = 0; i < 10; ++i) skewed.push_back(2);
  const auto t3 = estimate_thresholds(skewed);
  REQUIRE(t3.cuts.size() == 2);
  CHECK(t3.cuts[0] == doctest::Approx(-1.2815515655446004).epsilon(1e-9));
  CHECK(t3.cuts[1] == doctest::Approx(1.2815515655446004).epsilon(1e-9));

  CHECK_THROWS_AS(estimate_thresholds(std::vector<double>(10, 3.0)), Error);
}

TEST_CASE("polychoric: perfect concordance is capped near 1") {
  std::vector<double> x, y;
  Rng rng(3);
  for (int i = 0; i < 400; ++i) {
    const double v = static_cast<double>(rng.next_below(4));
    x.push_back(v);
    y.push_back(v);
  }
  CHECK(polychoric_pair(x, y) > 0.999);
}

TEST_CASE("polychoric: independence gives near-zero") {
  const DataMatrix a = latent_ordinal_pair(0.0, 10000, 4, 17);
  CHECK(std::fabs(polychoric_pair(a.column(0), a.column(1))) < 0.05);
}

TEST_CASE("polychoric consistency: recovers latent rho 0.5 across seeds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DataMatrix d = latent_ordinal_pair(0.5, 10000, 5, seed);
    CHECK(std::fabs(polychoric_pair(d.column(0), d.column(1)) - 0.5) < 0.05);
  }
}

TEST_CASE("polychoric degenerate table") {
  std::vector<double> x(20, 1.0);
  std::vector<double> y;
  for (int i = 0; i < 20; ++i) y.push_back(i % 3);
  CHECK_THROWS_AS(polychoric_pair(x, y), Error);
}

TEST_CASE("polyserial: thresholded copy of x itself") {
  Rng rng(11);
  std::vector<double> x, y;
  for (int i = 0; i < 10000; ++i) x.push_back(rng.next_normal());
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[5000];
  for (double v : x) y.push_back(v > median ? 1.0 : 0.0);
  CHECK(polyserial_pair(x, y) >= 0.95);
}

TEST_CASE("polyserial: independence and latent rho recovery") {
  Rng rng(13);
  std::vector<double> x, y;
  for (int i = 0; i < 10000; ++i) {
    x.push_back(rng.next_normal());
    y.push_back(static_cast<double>(rng.next_below(3)));
  }
  CHECK(std::fabs(polyserial_pair(x, y)) < 0.05);

  // Latent (X, H) with correlation 0.5; Y = 3-level cut of H.
  PcorNetwork net;
  net.weights = Matrix::Zero(2, 2);
  net.weights(0, 1) = net.weights(1, 0) = 0.5;
  net.labels = {"X", "H"};
  const DataMatrix cont = sample_ggm(net, 10000, 29);
  std::vector<double> xs = cont.column(0);
  std::vector<double> ys;
  for (double h : cont.column(1)) {
    ys.push_back(h < -0.4 ? 0.0 : (h < 0.4 ? 1.0 : 2.0));
  }
  CHECK(std::fabs(polyserial_pair(xs, ys) - 0.5) < 0.05);
}

TEST_CASE("auto_corr equals pearson on all-continuous input") {
  const DataMatrix data = random_normal_data(80, 4, 37);
  const auto a = auto_corr(data);
  const auto p = pearson_corr(data);
  CHECK((a.entries - p.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.method == CorMethod::AutoMixed);
}

TEST_CASE("auto_corr uses polychoric for ordinal columns") {
  const PcorNetwork truth = chain_graph(3, 0.3, 0.4, 5);
  const DataMatrix data = ordinalize(sample_ggm(truth, 600, 41), 5);
  const auto m = auto_corr(data);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double direct = polychoric_pair(data.column(a), data.column(b));
      if (!m.pd_repaired) {
        CHECK(m.entries(a, b) == doctest::Approx(direct).epsilon(1e-12));
      }
    }
  }
  check_corr_invariants(m);
}

TEST_CASE("auto_corr scale overrides beat auto-detection") {
  const PcorNetwork truth = chain_graph(3, 0.3, 0.4, 9);
  const DataMatrix data = ordinalize(sample_ggm(truth, 400, 43), 4);

  AutoCorrOptions forced;
  forced.force = {-1, -1, -1};  // treat every column as continuous
  const auto m = auto_corr(data, forced);
  const auto p = pearson_corr(data);
  CHECK((m.entries - p.entries).cwiseAbs().maxCoeff() == 0.0);

  // Integer columns with more levels than the cutoff stay continuous
  // unless forced ordinal.
  const DataMatrix many = ordinalize(sample_ggm(truth, 400, 47), 9);
  const auto as_pearson = auto_corr(many);
  const auto p2 = pearson_corr(many);
  CHECK((as_pearson.entries - p2.entries).cwiseAbs().maxCoeff() == 0.0);
  AutoCorrOptions force_ord;
  force_ord.force = {1, 1, 1};
  const auto as_poly = auto_corr(many, force_ord);
  CHECK((as_poly.entries - p2.entries).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("auto_corr repairs an indefinite pairwise matrix and warns") {
  // Disjoint missingness blocks force r12 = r13 = 1 but r23 = -1.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int block = 40;
  Matrix values(3 * block, 3);
  Rng rng(53);
  for (int i = 0; i < 3 * block; ++i)
    for (int j = 0; j < 3; ++j) values(i, j) = nan;
  for (int i = 0; i < block; ++i) {
    const double t = rng.next_normal();
    values(i, 0) = t;
    values(i, 1) = t;
  }
  for (int i = block; i < 2 * block; ++i) {
    const double t = rng.next_normal();
    values(i, 0) = t;
    values(i, 2) = t;
  }
  for (int i = 2 * block; i < 3 * block; ++i) {
    const double t = rng.next_normal();
    values(i, 1) = t;
    values(i, 2) = -t;
  }
  const auto m = auto_corr(make_data(values));
  CHECK(m.pd_repaired);
  CHECK(!m.warnings.empty());
  check_corr_invariants(m);
}

TEST_CASE("nonparanormal transform") {
  Rng rng(59);
  const int n = 10000;
  Matrix values(n, 3);
  for (int i = 0; i < n; ++i) {
    values(i, 0) = rng.next_normal();
    values(i, 1) = -std::log(rng.next_open_double());  // exponential
    values(i, 2) = rng.next_double() < 0.3 ? 0.0 : 1.0;
  }
  const DataMatrix data = make_data(values);
  const DataMatrix out = nonparanormal_transform(data);

  CHECK(pearson(data.column(0), out.column(0)) > 0.99);
  CHECK(std::fabs(skewness(out.column(1))) < 0.1);

  const auto col2 = out.column(2);
  std::set<double> uniq(col2.begin(), col2.end());
  CHECK(uniq.size() == 2);

  // The map is monotone: order is preserved (ties can only be created by the
  // Winsorization collapsing extreme tails, never reversed) and equal inputs
  // stay equal.
  for (int j = 0; j < 3; ++j) {
    const auto before = data.column(j);
    const auto after = out.column(j);
    int violations = 0;
    for (int i = 1; i < n; ++i) {
      if (before[i] > before[i - 1] && after[i] < after[i - 1]) ++violations;
      if (before[i] < before[i - 1] && after[i] > after[i - 1]) ++violations;
      if (before[i] == before[i - 1] && after[i] != after[i - 1]) ++violations;
    }
    CHECK(violations == 0);
  }

  Matrix constant(5, 2);
  constant << 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
  CHECK_THROWS_AS(nonparanormal_transform(make_data(constant)), Error);
}

TEST_CASE("nearest_pd clips, rescales and is idempotent") {
  const Matrix eye = Matrix::Identity(4, 4);
  const auto same = nearest_pd(eye);
  CHECK_FALSE(same.pd_repaired);
  CHECK((same.entries - eye).cwiseAbs().maxCoeff() == 0.0);

  Matrix bad(3, 3);
  bad << 1.0, 0.9, 0.9,
         0.9, 1.0, -0.9,
         0.9, -0.9, 1.0;
  CHECK(min_eigenvalue(bad) < 0.0);
  const auto repaired = nearest_pd(bad);
  CHECK(repaired.pd_repaired);
  CHECK(min_eigenvalue(repaired.entries) >= 0.0);
  for (int i = 0; i < 3; ++i) CHECK(repaired.entries(i, i) == 1.0);

  const auto again = nearest_pd(repaired.entries);
  CHECK_FALSE(again.pd_repaired);
  CHECK((again.entries - repaired.entries).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fuzzed inputs always produce valid correlation matrices") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Rng rng(seed * 977);
    const int n = 30 + static_cast<int>(rng.next_below(40));
    const int p = 3 + static_cast<int>(rng.next_below(4));
    Matrix values(n, p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) {
        if (rng.next_double() < 0.15) {
          values(i, j) = std::numeric_limits<double>::quiet_NaN();
        } else if (j % 2 == 0) {
          values(i, j) = static_cast<double>(rng.next_below(4));
        } else {
          values(i, j) = rng.next_normal();
        }
      }
    }
    DataMatrix data = make_data(values);
    try {
      check_corr_invariants(auto_corr(data));
      check_corr_invariants(spearman_corr(data));
    } catch (const Error&) {
      // Degenerate draws may fail loudly; invalid matrices may not occur.
    }
  }
}
