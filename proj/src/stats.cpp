#include "pcornet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pcornet/errors.hpp"

namespace pcornet {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Wichura's algorithm AS 241, PPND16.
double normal_quantile(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  const double q = p - 0.5;
  double r, num, den;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
              1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
            1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
              5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
            4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

namespace {

// Gauss-Legendre half-rules used by the Drezner-Wesolowsky integral.
const double kGL6w[3] = {0.1713244923791705, 0.3607615730481384,
                         0.4679139345726904};
const double kGL6x[3] = {0.9324695142031522, 0.6612093864662647,
                         0.2386191860831970};
const double kGL12w[6] = {0.04717533638651177, 0.1069393259953183,
                          0.1600783285433464,  0.2031674267230659,
                          0.2334925365383547,  0.2491470458134029};
const double kGL12x[6] = {0.9815606342467191, 0.9041172563704750,
                          0.7699026741943050, 0.5873179542866171,
                          0.3678314989981802, 0.1252334085114692};
const double kGL20w[10] = {0.01761400713915212, 0.04060142980038694,
                           0.06267204833410906, 0.08327674157670475,
                           0.1019301198172404,  0.1181945319615184,
                           0.1316886384491766,  0.1420961093183821,
                           0.1491729864726037,  0.1527533871307259};
const double kGL20x[10] = {0.9931285991850949, 0.9639719272779138,
                           0.9122344282513259, 0.8391169718222188,
                           0.7463319064601508, 0.6360536807265150,
                           0.5108670019508271, 0.3737060887154196,
                           0.2277858511416451, 0.0765265211334973};

// P(X <= h, Y <= k) for |rho| <= 0.925 via Gauss-Legendre quadrature of
// the single integral over asin(rho).
double bvn_cdf_mid(double h, double k, double rho) {
  const double base = normal_cdf(h) * normal_cdf(k);
  if (rho == 0.0) return base;
  const double* w;
  const double* x;
  int nw;
  const double ar = std::fabs(rho);
  if (ar < 0.3) {
    w = kGL6w; x = kGL6x; nw = 3;
  } else if (ar < 0.75) {
    w = kGL12w; x = kGL12x; nw = 6;
  } else {
    w = kGL20w; x = kGL20x; nw = 10;
  }
  const double hk = h * k;
  const double hs = 0.5 * (h * h + k * k);
  const double asr = std::asin(rho);
  double sum = 0.0;
  for (int i = 0; i < nw; ++i) {
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      const double sn = std::sin(asr * (1.0 + sgn * x[i]) / 2.0);
      sum += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
  }
  return base + sum * asr / (4.0 * kPi);
}

struct Simpson {
  double k, rho, s;

  double f(double x) const {
    return normal_pdf(x) * normal_cdf((k - rho * x) / s);
  }

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
  }

  double integrate(double a, double b, double tol, int depth) const {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, tol, depth);
  }
};

// High-|rho| branch: adaptive integration of phi(x) * Phi((k - rho x)/s)
// over x <= h, with the transition region sliced out explicitly so the
// refinement cannot miss it.
double bvn_cdf_steep(double h, double k, double rho) {
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  const double lo = -9.0;
  const double hi = std::min(h, 9.0);
  if (hi <= lo) return 0.0;
  Simpson integrand{k, rho, s};

  std::vector<double> cuts = {lo, hi};
  const double center = k / rho;
  const double half_width = 10.0 * s / std::fabs(rho);
  for (double c : {center - half_width, center, center + half_width}) {
    if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrand.integrate(cuts[i], cuts[i + 1], 1e-10, 52);
  }
  return total;
}

}  // namespace

double bvn_cdf(double h, double k, double rho) {
  if (std::isnan(h) || std::isnan(k)) return kNaN;
  if (h == -kInf || k == -kInf) return 0.0;
  if (h == kInf) return k == kInf ? 1.0 : normal_cdf(k);
  if (k == kInf) return normal_cdf(h);
  rho = std::clamp(rho, -1.0, 1.0);
  double p;
  if (rho == 1.0) {
    p = normal_cdf(std::min(h, k));
  } else if (rho == -1.0) {
    p = std::max(0.0, normal_cdf(h) + normal_cdf(k) - 1.0);
  } else if (std::fabs(rho) <= 0.925) {
    p = bvn_cdf_mid(h, k, rho);
  } else {
    p = bvn_cdf_steep(h, k, rho);
  }
  return std::clamp(p, 0.0, 1.0);
}

double bvn_rect(double xlo, double xhi, double ylo, double yhi, double rho) {
  const double p = bvn_cdf(xhi, yhi, rho) - bvn_cdf(xlo, yhi, rho) -
                   bvn_cdf(xhi, ylo, rho) + bvn_cdf(xlo, ylo, rho);
  return std::clamp(p, 0.0, 1.0);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 2) return kNaN;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double skewness(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 3) return kNaN;
  const double m = mean(v);
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 <= 0.0) return kNaN;
  return m3 / std::pow(m2, 1.5);
}

std::vector<double> mid_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return kNaN;
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return kNaN;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double quantile_type7_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return kNaN;
  if (sorted.size() == 1) return sorted[0];
  p = std::clamp(p, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile_type7(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_type7_sorted(values, p);
}

double brent_minimize(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_iter) {
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "empty bracket");
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::fabs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;
    double u;
    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      // Trial parabolic step through (v, w, x).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_old = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

}  // namespace pcornet
