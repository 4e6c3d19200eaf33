#pragma once

#include <functional>
#include <vector>

namespace pcornet {

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse standard-normal CDF (Wichura's PPND16), |error| < 1e-15 on (0,1).
double normal_quantile(double p);

/// P(X <= h, Y <= k) for standard bivariate normal with correlation rho.
/// Gauss-Legendre evaluation of Drezner & Wesolowsky's integral; absolute
/// error well below 1e-7 over the full rho range. Infinite bounds allowed.
double bvn_cdf(double h, double k, double rho);

/// P(xlo < X <= xhi, ylo < Y <= yhi); bounds may be +-infinity.
double bvn_rect(double xlo, double xhi, double ylo, double yhi, double rho);

double mean(const std::vector<double>& v);
/// Sample standard deviation (n-1 denominator).
double sample_sd(const std::vector<double>& v);
/// Sample skewness g1 = m3 / m2^(3/2).
double skewness(const std::vector<double>& v);

/// Mid-ranks in 1..n with ties assigned the average of their rank range.
std::vector<double> mid_ranks(const std::vector<double>& v);

/// Pearson correlation of two full (no-missing) vectors. NaN if either side
/// has zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Type-7 quantile (linear interpolation between order statistics) of an
/// already sorted vector, p in [0, 1].
double quantile_type7_sorted(const std::vector<double>& sorted, double p);

/// Convenience: copies, sorts, then applies quantile_type7_sorted.
double quantile_type7(std::vector<double> values, double p);

/// Minimizes a unimodal function on [a, b] by Brent's parabolic/golden
/// search. Returns the abscissa of the minimum.
double brent_minimize(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-8, int max_iter = 200);

}  // namespace pcornet
