#include "pcornet/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "pcornet/errors.hpp"
#include "pcornet/parallel.hpp"
#include "pcornet/stats.hpp"

namespace pcornet {

namespace {

constexpr double kRhoCap = 1.0 - 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kPdRepairWarning =
    "correlation matrix was not positive definite; nearest-PD repair applied";

struct PairData {
  std::vector<double> x, y;
};

PairData complete_pairs(const DataMatrix& data, Eigen::Index a,
                        Eigen::Index b) {
  PairData out;
  out.x.reserve(static_cast<std::size_t>(data.n_rows()));
  out.y.reserve(static_cast<std::size_t>(data.n_rows()));
  for (Eigen::Index i = 0; i < data.n_rows(); ++i) {
    const double xa = data.values(i, a), xb = data.values(i, b);
    if (std::isnan(xa) || std::isnan(xb)) continue;
    out.x.push_back(xa);
    out.y.push_back(xb);
  }
  return out;
}

double pearson_pair_checked(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::string& label_a,
                            const std::string& label_b) {
  if (x.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "fewer than 2 complete cases for pair (" + label_a + ", " +
                    label_b + ")");
  }
  const double r = pearson(x, y);
  if (std::isnan(r)) {
    const bool x_const =
        std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    throw Error(ErrorCode::ZeroVariance,
                "column " + (x_const ? label_a : label_b) +
                    " has zero variance over complete cases");
  }
  return r;
}

using PairFn = std::function<double(Eigen::Index, Eigen::Index)>;

// Fills the upper triangle in parallel (each pair owns its slot), mirrors,
// then applies the PD repair shared by every matrix constructor.
CorrelationMatrix assemble(const DataMatrix& data, CorMethod method,
                           int threads, const PairFn& fn) {
  data.validate();
  const Eigen::Index p = data.n_cols();
  CorrelationMatrix out;
  out.method = method;
  out.entries = Matrix::Identity(p, p);
  out.pairwise_n = Eigen::MatrixXi::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    out.pairwise_n(j, j) =
        static_cast<int>(data.column_complete(j).size());
  }

  struct Cell { Eigen::Index a, b; };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a + 1; b < p; ++b) cells.push_back({a, b});

  std::vector<double> r(cells.size());
  std::vector<int> n_pair(cells.size());
  std::exception_ptr first_error;
  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    try {
      const auto [a, b] = cells[idx];
      const PairData pd = complete_pairs(data, a, b);
      n_pair[idx] = static_cast<int>(pd.x.size());
      r[idx] = fn(a, b);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(pcornet_corr_err)
#endif
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  });
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const auto [a, b] = cells[idx];
    out.entries(a, b) = out.entries(b, a) = r[idx];
    out.pairwise_n(a, b) = out.pairwise_n(b, a) = n_pair[idx];
  }

  CorrelationMatrix repaired = nearest_pd(out.entries);
  if (repaired.pd_repaired) {
    out.entries = repaired.entries;
    out.pd_repaired = true;
    out.warnings.push_back(kPdRepairWarning);
  }
  return out;
}

std::map<int, int> level_index(const std::vector<double>& ordinal) {
  std::set<int> codes;
  for (double v : ordinal) codes.insert(static_cast<int>(std::round(v)));
  std::map<int, int> idx;
  int next = 0;
  for (int c : codes) idx[c] = next++;
  return idx;
}

// Cutpoints from cumulative proportions of already-complete values.
std::vector<double> cuts_from_counts(const std::vector<double>& counts,
                                     double total) {
  std::vector<double> cuts;
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
    cum += counts[i];
    cuts.push_back(normal_quantile(cum / total));
  }
  return cuts;
}

}  // namespace

const char* cor_method_name(CorMethod m) {
  switch (m) {
    case CorMethod::Pearson: return "pearson";
    case CorMethod::Spearman: return "spearman";
    case CorMethod::AutoMixed: return "auto";
  }
  return "unknown";
}

CorrelationMatrix pearson_corr(const DataMatrix& data,
                               const PairwiseOptions& opts) {
  return assemble(data, CorMethod::Pearson, opts.threads,
                  [&](Eigen::Index a, Eigen::Index b) {
                    const PairData pd = complete_pairs(data, a, b);
                    return pearson_pair_checked(
                        pd.x, pd.y,
                        data.labels[static_cast<std::size_t>(a)],
                        data.labels[static_cast<std::size_t>(b)]);
                  });
}

CorrelationMatrix spearman_corr(const DataMatrix& data,
                                const PairwiseOptions& opts) {
  return assemble(data, CorMethod::Spearman, opts.threads,
                  [&](Eigen::Index a, Eigen::Index b) {
                    const PairData pd = complete_pairs(data, a, b);
                    return pearson_pair_checked(
                        mid_ranks(pd.x), mid_ranks(pd.y),
                        data.labels[static_cast<std::size_t>(a)],
                        data.labels[static_cast<std::size_t>(b)]);
                  });
}

ThresholdSet estimate_thresholds(const std::vector<double>& column) {
  std::map<int, double> counts;
  double total = 0.0;
  for (double v : column) {
    if (std::isnan(v)) continue;
    counts[static_cast<int>(std::round(v))] += 1.0;
    total += 1.0;
  }
  if (counts.size() < 2) {
    throw Error(ErrorCode::DegenerateColumn,
                "ordinal column has fewer than 2 observed levels");
  }
  std::vector<double> level_counts;
  for (const auto& [code, c] : counts) level_counts.push_back(c);
  return ThresholdSet{cuts_from_counts(level_counts, total)};
}

namespace detail {

PolychoricFit polychoric_fit(const std::vector<double>& x,
                             const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "column length mismatch");
  }
  std::vector<double> cx, cy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    cx.push_back(x[i]);
    cy.push_back(y[i]);
  }
  if (cx.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "fewer than 2 complete cases for polychoric pair");
  }
  const auto xi = level_index(cx);
  const auto yi = level_index(cy);
  const int nr = static_cast<int>(xi.size());
  const int nc = static_cast<int>(yi.size());
  if (nr < 2 || nc < 2) {
    throw Error(ErrorCode::DegenerateTable,
                "contingency table has all mass in one row or column");
  }

  std::vector<double> table(static_cast<std::size_t>(nr * nc), 0.0);
  for (std::size_t i = 0; i < cx.size(); ++i) {
    const int r = xi.at(static_cast<int>(std::round(cx[i])));
    const int c = yi.at(static_cast<int>(std::round(cy[i])));
    table[static_cast<std::size_t>(r * nc + c)] += 1.0;
  }
  const double n = static_cast<double>(cx.size());

  std::vector<double> row_counts(nr, 0.0), col_counts(nc, 0.0);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) {
      row_counts[r] += table[static_cast<std::size_t>(r * nc + c)];
      col_counts[c] += table[static_cast<std::size_t>(r * nc + c)];
    }

  // Step 1: thresholds from the table margins.
  std::vector<double> a = cuts_from_counts(row_counts, n);
  std::vector<double> b = cuts_from_counts(col_counts, n);
  a.insert(a.begin(), -kInf);
  a.push_back(kInf);
  b.insert(b.begin(), -kInf);
  b.push_back(kInf);

  // Step 2: 1-D likelihood maximization over rho.
  const auto neg_loglik = [&](double rho) {
    double ll = 0.0;
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) {
        const double cnt = table[static_cast<std::size_t>(r * nc + c)];
        if (cnt == 0.0) continue;
        const double pr = std::max(
            bvn_rect(a[r], a[r + 1], b[c], b[c + 1], rho), 1e-300);
        ll += cnt * std::log(pr);
      }
    }
    return -ll;
  };
  const double rho_hat = std::clamp(
      brent_minimize(neg_loglik, -kRhoCap, kRhoCap, 1e-6), -kRhoCap, kRhoCap);

  PolychoricFit fit;
  fit.rho = rho_hat;
  for (int r = 0; r < nr && !fit.low_expected_frequency; ++r) {
    for (int c = 0; c < nc; ++c) {
      const double expected =
          n * bvn_rect(a[r], a[r + 1], b[c], b[c + 1], rho_hat);
      if (expected < 10.0) {
        fit.low_expected_frequency = true;
        break;
      }
    }
  }
  return fit;
}

}  // namespace detail

double polychoric_pair(const std::vector<double>& x,
                       const std::vector<double>& y) {
  return detail::polychoric_fit(x, y).rho;
}

double polyserial_pair(const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "column length mismatch");
  }
  std::vector<double> cx, cy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    cx.push_back(x[i]);
    cy.push_back(y[i]);
  }
  if (cx.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "fewer than 2 complete cases for polyserial pair");
  }
  const double mx = mean(cx);
  const double sx = sample_sd(cx);
  if (!(sx > 0.0)) {
    throw Error(ErrorCode::DegenerateColumn,
                "continuous column is constant over complete cases");
  }
  const auto yi = level_index(cy);
  if (yi.size() < 2) {
    throw Error(ErrorCode::DegenerateColumn,
                "ordinal column has fewer than 2 observed levels");
  }
  std::vector<double> level_counts(yi.size(), 0.0);
  for (double v : cy) level_counts[yi.at(static_cast<int>(std::round(v)))] += 1.0;
  std::vector<double> tau = cuts_from_counts(level_counts,
                                             static_cast<double>(cy.size()));
  tau.insert(tau.begin(), -kInf);
  tau.push_back(kInf);

  std::vector<double> z(cx.size());
  std::vector<int> cat(cy.size());
  for (std::size_t i = 0; i < cx.size(); ++i) {
    z[i] = (cx[i] - mx) / sx;
    cat[i] = yi.at(static_cast<int>(std::round(cy[i])));
  }

  // Conditional category likelihood: latent | z ~ N(rho z, 1 - rho^2).
  const auto neg_loglik = [&](double rho) {
    const double s = std::sqrt(1.0 - rho * rho);
    double ll = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double hi = tau[cat[i] + 1], lo = tau[cat[i]];
      const double p_hi = hi == kInf ? 1.0 : normal_cdf((hi - rho * z[i]) / s);
      const double p_lo = lo == -kInf ? 0.0 : normal_cdf((lo - rho * z[i]) / s);
      ll += std::log(std::max(p_hi - p_lo, 1e-300));
    }
    return -ll;
  };
  return std::clamp(brent_minimize(neg_loglik, -kRhoCap, kRhoCap, 1e-6),
                    -kRhoCap, kRhoCap);
}

CorrelationMatrix auto_corr(const DataMatrix& data,
                            const AutoCorrOptions& opts) {
  const Eigen::Index p = data.n_cols();
  std::vector<bool> ordinal(static_cast<std::size_t>(p), false);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const int forced =
        sj < opts.force.size() ? opts.force[sj] : 0;
    if (forced > 0) {
      ordinal[sj] = true;
    } else if (forced < 0) {
      ordinal[sj] = false;
    } else {
      ordinal[sj] = looks_ordinal(data.column(j), opts.ordinal_max_levels);
    }
  }

  std::vector<int> low_freq_flags(static_cast<std::size_t>(p * p), 0);
  CorrelationMatrix out = assemble(
      data, CorMethod::AutoMixed, opts.threads,
      [&](Eigen::Index a, Eigen::Index b) {
        const PairData pd = complete_pairs(data, a, b);
        const auto sa = static_cast<std::size_t>(a);
        const auto sb = static_cast<std::size_t>(b);
        if (ordinal[sa] && ordinal[sb]) {
          const auto fit = detail::polychoric_fit(pd.x, pd.y);
          if (fit.low_expected_frequency) {
            low_freq_flags[sa * static_cast<std::size_t>(p) + sb] = 1;
          }
          return fit.rho;
        }
        if (ordinal[sa]) return polyserial_pair(pd.y, pd.x);
        if (ordinal[sb]) return polyserial_pair(pd.x, pd.y);
        return pearson_pair_checked(pd.x, pd.y,
                                    data.labels[sa], data.labels[sb]);
      });

  int n_low = 0;
  for (int f : low_freq_flags) n_low += f;
  if (n_low > 0) {
    out.warnings.push_back(
        std::to_string(n_low) +
        " ordinal pair(s) had expected cell counts below 10; polychoric "
        "estimates may be biased");
  }
  return out;
}

DataMatrix nonparanormal_transform(const DataMatrix& data) {
  DataMatrix out = data;
  for (Eigen::Index j = 0; j < data.n_cols(); ++j) {
    std::vector<double> col;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < data.n_rows(); ++i) {
      if (!std::isnan(data.values(i, j))) {
        col.push_back(data.values(i, j));
        rows.push_back(i);
      }
    }
    const double n = static_cast<double>(col.size());
    if (n < 2 ||
        std::all_of(col.begin(), col.end(),
                    [&](double v) { return v == col[0]; })) {
      throw Error(ErrorCode::DegenerateColumn,
                  "column " + data.labels[static_cast<std::size_t>(j)] +
                      " is constant or empty");
    }
    // Winsorized empirical CDF, then the normal quantile function.
    const double delta =
        1.0 / (4.0 * std::pow(n, 0.25) * std::sqrt(M_PI * std::log(n)));
    const std::vector<double> ranks = mid_ranks(col);
    for (std::size_t t = 0; t < col.size(); ++t) {
      const double u = std::clamp(ranks[t] / n, delta, 1.0 - delta);
      out.values(rows[t], j) = normal_quantile(u);
    }
    out.scales[static_cast<std::size_t>(j)] = Scale::Continuous;
    out.ordinal_levels[static_cast<std::size_t>(j)].clear();
  }
  return out;
}

CorrelationMatrix nearest_pd(const Matrix& m) {
  if (!is_symmetric(m, 1e-8)) {
    throw Error(ErrorCode::InvalidArgument, "input matrix is not symmetric");
  }
  const Eigen::Index p = m.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
  const Vector& eig = solver.eigenvalues();
  const double floor_value = 1e-8 * eig.maxCoeff();

  CorrelationMatrix out;
  out.method = CorMethod::AutoMixed;
  out.pairwise_n = Eigen::MatrixXi::Zero(p, p);
  if (eig.minCoeff() >= floor_value) {
    out.entries = m;
    out.pd_repaired = false;
    return out;
  }

  Vector clipped = eig;
  for (Eigen::Index i = 0; i < p; ++i) {
    clipped(i) = std::max(clipped(i), floor_value);
  }
  Matrix rebuilt = solver.eigenvectors() * clipped.asDiagonal() *
                   solver.eigenvectors().transpose();
  rebuilt = cov2cor(symmetrized(rebuilt));
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j) rebuilt(i, j) = std::clamp(rebuilt(i, j), -1.0, 1.0);
    }
  }
  out.entries = symmetrized(rebuilt);
  out.entries.diagonal().setOnes();
  out.pd_repaired = true;
  out.warnings.push_back(kPdRepairWarning);
  return out;
}

}  // namespace pcornet
