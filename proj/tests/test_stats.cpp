#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pcornet/rng.hpp"
#include "pcornet/stats.hpp"

using namespace pcornet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent oracle: nested adaptive Simpson of the raw bivariate-normal
// density over a rectangle. Deliberately shares nothing with the production
// path (which integrates over the correlation angle).
double bvn_density(double x, double y, double rho) {
  const double om = 1.0 - rho * rho;
  return std::exp(-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * om)) /
         (2.0 * M_PI * std::sqrt(om));
}

template <typename F>
double simpson_adapt(const F& f, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_adapt(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_adapt(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return simpson_adapt(f, a, b, fa, fm, fb,
                       (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40);
}

double oracle_rect(double xlo, double xhi, double ylo, double yhi,
                   double rho) {
  xlo = std::max(xlo, -9.0);
  ylo = std::max(ylo, -9.0);
  xhi = std::min(xhi, 9.0);
  yhi = std::min(yhi, 9.0);
  if (xhi <= xlo || yhi <= ylo) return 0.0;
  const double ridge_width = 10.0 * std::sqrt(1.0 - rho * rho);
  const auto outer = [&](double x) {
    // The conditional density concentrates around y = rho * x; integrate the
    // ridge segment separately so the refinement cannot step over it.
    const auto inner = [&](double y) { return bvn_density(x, y, rho); };
    std::vector<double> cuts = {ylo, yhi};
    for (double c : {rho * x - ridge_width, rho * x + ridge_width}) {
      if (c > ylo && c < yhi) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      total += integrate(inner, cuts[i], cuts[i + 1], 1e-11);
    }
    return total;
  };
  return integrate(outer, xlo, xhi, 1e-10);
}

}  // namespace

TEST_CASE("normal quantile and cdf invert each other") {
  for (double p : {1e-12, 1e-6, 0.001, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999,
                   1.0 - 1e-9}) {
    const double x = normal_quantile(p);
    CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.0) == -kInf);
  CHECK(normal_quantile(1.0) == kInf);
}

TEST_CASE("bivariate normal cdf special cases") {
  CHECK(bvn_cdf(kInf, kInf, 0.5) == 1.0);
  CHECK(bvn_cdf(-kInf, 0.3, 0.5) == 0.0);
  CHECK(bvn_cdf(kInf, 0.0, 0.9) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bvn_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
  // Phi2(0, 0, rho) = 1/4 + asin(rho) / (2 pi)
  for (double rho : {-0.95, -0.5, 0.3, 0.8, 0.99}) {
    CHECK(bvn_cdf(0.0, 0.0, rho) ==
          doctest::Approx(0.25 + std::asin(rho) / (2.0 * M_PI)).epsilon(1e-9));
  }
  CHECK(bvn_cdf(1.0, -0.5, 1.0) == doctest::Approx(normal_cdf(-0.5)));
  CHECK(bvn_cdf(1.0, -0.5, -1.0) ==
        doctest::Approx(normal_cdf(1.0) + normal_cdf(-0.5) - 1.0));
}

TEST_CASE("bivariate rectangle probabilities match 2-D quadrature oracle") {
  Rng rng(20240811);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    double rho = rng.next_uniform(-0.995, 0.995);
    if (trial < 8) rho = (trial % 2 ? -1 : 1) * (trial < 4 ? 0.97 : 0.9995);
    double b1 = rng.next_uniform(-3.0, 3.0), b2 = rng.next_uniform(-3.0, 3.0);
    double c1 = rng.next_uniform(-3.0, 3.0), c2 = rng.next_uniform(-3.0, 3.0);
    if (b1 > b2) std::swap(b1, b2);
    if (c1 > c2) std::swap(c1, c2);
    const double got = bvn_rect(b1, b2, c1, c2, rho);
    const double want = oracle_rect(b1, b2, c1, c2, rho);
    CHECK(std::fabs(got - want) <= 1e-7);
    ++checked;
  }
  CHECK(checked == 100);
  // Infinite bounds reduce to marginal normal probabilities.
  CHECK(bvn_rect(-kInf, kInf, -kInf, 0.7, 0.6) ==
        doctest::Approx(normal_cdf(0.7)).epsilon(1e-12));
  CHECK(bvn_rect(-kInf, kInf, -kInf, kInf, -0.3) == doctest::Approx(1.0));
}

TEST_CASE("mid ranks average ties") {
  const std::vector<double> v = {1.0, 2.0, 2.0, 4.0};
  const std::vector<double> r = mid_ranks(v);
  CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("type-7 quantiles") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(quantile_type7(v, 0.025) == doctest::Approx(3.475).epsilon(1e-12));
  CHECK(quantile_type7(v, 0.975) == doctest::Approx(97.525).epsilon(1e-12));
  CHECK(quantile_type7(v, 0.0) == 1.0);
  CHECK(quantile_type7(v, 1.0) == 100.0);
  CHECK(quantile_type7(v, 0.5) == doctest::Approx(50.5));
}

TEST_CASE("pearson of plain vectors") {
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(std::isnan(pearson({1, 1, 1}, {1, 2, 3})));
}

TEST_CASE("brent finds interior and boundary minima") {
  const double x1 = brent_minimize(
      [](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 1.0, 1e-10);
  CHECK(x1 == doctest::Approx(0.3).epsilon(1e-7));
  const double x2 =
      brent_minimize([](double x) { return -x; }, -1.0, 1.0, 1e-10);
  CHECK(x2 > 0.999);
}

TEST_CASE("sample statistics") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == doctest::Approx(2.5));
  CHECK(sample_sd(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  Rng rng(5);
  std::vector<double> sym;
  for (int i = 0; i < 20000; ++i) sym.push_back(rng.next_normal());
  CHECK(std::fabs(skewness(sym)) < 0.05);
}

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a = Rng::stream(42, 1);
  Rng b = Rng::stream(42, 1);
  Rng c = Rng::stream(42, 2);
  bool all_equal = true;
  bool any_diff_c = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    const auto vb = b.next_u64();
    const auto vc = c.next_u64();
    all_equal = all_equal && va == vb;
    any_diff_c = any_diff_c || va != vc;
  }
  CHECK(all_equal);
  CHECK(any_diff_c);
  Rng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double d = u.next_double();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
    CHECK(u.next_below(10) < 10);
  }
}
