#include "pcornet/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "pcornet/errors.hpp"

namespace pcornet {

namespace {

std::vector<std::string> default_labels(Eigen::Index p) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j)
    labels.push_back("V" + std::to_string(j + 1));
  return labels;
}

}  // namespace

double gaussian_loglik(const Matrix& k, const Matrix& s, int n) {
  return 0.5 * static_cast<double>(n) *
         (logdet_spd(symmetrized(k)) - (s * k).trace());
}

double gaussian_loglik(const PrecisionMatrix& k, const CorrelationMatrix& s,
                       int n) {
  return gaussian_loglik(k.k, s.entries, n);
}

double ebic(double loglik, int edge_count, int n, int p, double gamma) {
  if (edge_count < 0 || n < 1 || p < 2 || gamma < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid EBIC arguments");
  }
  const double e = static_cast<double>(edge_count);
  return -2.0 * loglik + e * std::log(static_cast<double>(n)) +
         4.0 * gamma * e * std::log(static_cast<double>(p));
}

int select_lambda(const std::vector<double>& ebic_values,
                  const std::vector<bool>& fit_ok,
                  const std::vector<double>& lambdas) {
  int best = -1;
  for (std::size_t i = 0; i < ebic_values.size(); ++i) {
    if (!fit_ok[i]) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const double cur = ebic_values[i];
    const double inc = ebic_values[static_cast<std::size_t>(best)];
    if (cur < inc - 1e-10) {
      best = static_cast<int>(i);
    } else if (std::fabs(cur - inc) <= 1e-10 &&
               lambdas[i] > lambdas[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);  // ties go to the sparser model
    }
  }
  if (best < 0) {
    throw Error(ErrorCode::NotConverged, "no usable fit on the lambda path");
  }
  return best;
}

std::pair<std::vector<double>, int> score_trace(const SelectionTrace& trace,
                                                int p, double gamma) {
  std::vector<double> scores(trace.lambdas.size(),
                             std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < trace.lambdas.size(); ++i) {
    if (!trace.fit_ok[i]) continue;
    scores[i] = ebic(trace.logliks[i], trace.edge_counts[i], trace.n, p, gamma);
  }
  return {scores, select_lambda(scores, trace.fit_ok, trace.lambdas)};
}

SelectionTrace ebic_glasso(const CorrelationMatrix& s, int n,
                           const EbicGlassoOptions& opts,
                           std::vector<std::string> labels) {
  const Eigen::Index p = s.p();
  if (labels.empty()) labels = default_labels(p);
  SelectionTrace trace;
  trace.gamma = opts.gamma;
  trace.n = n;
  if (n < p) {
    trace.warnings.push_back(
        "sample size is below the node count; expect heavy regularization "
        "and possibly an empty network");
  }

  try {
    trace.lambdas = lambda_path(s, opts.n_lambda, opts.lambda_ratio);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllZeroCorrelations) throw;
    // Exactly-zero correlations: the only model is the empty one.
    trace.lambdas = {0.0};
    trace.warnings.push_back(
        "all off-diagonal correlations are zero; fitted the independence "
        "model only");
  }
  const std::size_t m = trace.lambdas.size();
  trace.networks.assign(m, PcorNetwork{});
  trace.edge_counts.assign(m, 0);
  trace.logliks.assign(m, std::numeric_limits<double>::quiet_NaN());
  trace.ebic_values.assign(m, std::numeric_limits<double>::quiet_NaN());
  trace.fit_ok.assign(m, false);

  // Fit descending so each solution warm-starts the next, denser one. Each
  // distinct support along the path is scored by the log-likelihood of its
  // unpenalized constrained MLE (the model likelihood the EBIC is defined
  // over); shrunken likelihoods would make the criterion chase the shrinkage
  // bias of strong edges instead of the structure.
  //
  // On a near-singular input (a repaired pairwise matrix can sit at the
  // clipping floor) dense supports have no reachable MLE; a tight sweep
  // budget excludes them quickly instead of grinding.
  const int refit_budget = min_eigenvalue(s.entries) >= 1e-4 ? 10000 : 500;
  std::map<std::vector<bool>, double> support_loglik;
  PrecisionMatrix warm;
  bool have_warm = false;
  int n_excluded = 0;
  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t i = m - 1 - step;
    GlassoOptions gopts;
    gopts.tol = opts.tol;
    gopts.max_iter = opts.max_iter;
    gopts.warm_start = have_warm ? &warm : nullptr;
    try {
      PrecisionMatrix fit = glasso_fit(s, trace.lambdas[i], gopts);
      trace.networks[i] = precision_to_pcor(fit, labels);
      trace.edge_counts[i] = trace.networks[i].edge_count();

      std::vector<bool> support;
      support.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(p, p);
      for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = 0; b < p; ++b) {
          mask(a, b) = a != b && fit.k(a, b) != 0.0;
          if (b > a) support.push_back(mask(a, b));
        }
      }
      const auto cached = support_loglik.find(support);
      if (cached != support_loglik.end()) {
        trace.logliks[i] = cached->second;
      } else {
        double loglik;
        try {
          const PrecisionMatrix mle =
              refit_unregularized_precision(s, mask, 1e-7, refit_budget);
          loglik = gaussian_loglik(mle.k, s.entries, n);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NotConverged &&
              e.code() != ErrorCode::InfeasibleMask) {
            throw;
          }
          loglik = std::numeric_limits<double>::quiet_NaN();
        }
        support_loglik.emplace(std::move(support), loglik);
        trace.logliks[i] = loglik;
      }
      if (std::isnan(trace.logliks[i])) {
        ++n_excluded;  // support has no reachable MLE; lambda left unusable
      } else {
        trace.ebic_values[i] = ebic(trace.logliks[i], trace.edge_counts[i], n,
                                    static_cast<int>(p), opts.gamma);
        trace.fit_ok[i] = true;
      }
      warm = std::move(fit);
      have_warm = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotConverged) throw;
      trace.warnings.push_back("fit at lambda = " +
                               std::to_string(trace.lambdas[i]) +
                               " did not converge and was excluded");
    }
  }

  if (n_excluded > 0) {
    trace.warnings.push_back(
        std::to_string(n_excluded) +
        " lambda value(s) excluded from selection: their supports have no "
        "reachable unpenalized fit (ill-conditioned correlation input)");
  }

  trace.selected_index =
      select_lambda(trace.ebic_values, trace.fit_ok, trace.lambdas);
  return trace;
}

PcorNetwork refit_unregularized(
    const CorrelationMatrix& s,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
    double tol, std::vector<std::string> labels) {
  const PrecisionMatrix fit = refit_unregularized_precision(s, mask, tol);
  const Eigen::Index p = s.p();
  return precision_to_pcor(fit.k, labels.empty() ? default_labels(p)
                                                 : std::move(labels));
}

PrecisionMatrix refit_unregularized_precision(
    const CorrelationMatrix& s,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
    double tol, int max_sweeps) {
  const Matrix& sm = s.entries;
  const Eigen::Index p = sm.rows();
  if (mask.rows() != p || mask.cols() != p) {
    throw Error(ErrorCode::DimensionMismatch, "mask size mismatch");
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (mask(i, i)) {
      throw Error(ErrorCode::InvalidArgument, "mask diagonal must be false");
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (mask(i, j) != mask(j, i)) {
        throw Error(ErrorCode::InvalidArgument, "mask must be symmetric");
      }
    }
  }
  if (!is_positive_definite(sm)) {
    throw Error(ErrorCode::SingularInput,
                "refit requires a positive-definite correlation matrix");
  }

  // Same block updates as the penalized solver, with free coordinates
  // unpenalized and off-mask coordinates pinned at zero.
  Matrix k = Matrix::Zero(p, p);
  Matrix w = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    k(i, i) = 1.0 / sm(i, i);
    w(i, i) = sm(i, i);
  }

  Vector alpha(p - 1), qa(p - 1), s12(p - 1), w12(p - 1);
  Matrix q(p - 1, p - 1);
  std::vector<Eigen::Index> others(static_cast<std::size_t>(p - 1));

  bool converged = false;
  int sweep = 0;
  while (sweep < max_sweeps && !converged) {
    ++sweep;
    for (Eigen::Index j = 0; j < p; ++j) {
      {
        std::size_t t = 0;
        for (Eigen::Index i = 0; i < p; ++i)
          if (i != j) others[t++] = i;
      }
      const double c = sm(j, j);
      const double wjj = w(j, j);
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        w12(a) = w(others[static_cast<std::size_t>(a)], j);
        s12(a) = sm(others[static_cast<std::size_t>(a)], j);
        alpha(a) = k(others[static_cast<std::size_t>(a)], j);
      }
      for (Eigen::Index a = 0; a < p - 1; ++a)
        for (Eigen::Index b = 0; b < p - 1; ++b)
          q(a, b) = w(others[static_cast<std::size_t>(a)],
                      others[static_cast<std::size_t>(b)]) -
                    w12(a) * w12(b) / wjj;

      qa.noalias() = q * alpha;
      int inner = 0;
      double max_delta;
      do {
        max_delta = 0.0;
        for (Eigen::Index l = 0; l < p - 1; ++l) {
          if (!mask(others[static_cast<std::size_t>(l)], j)) continue;
          const double g = s12(l) + c * (qa(l) - q(l, l) * alpha(l));
          const double new_alpha = -g / (c * q(l, l));
          const double delta = new_alpha - alpha(l);
          if (delta != 0.0) {
            qa += delta * q.col(l);
            alpha(l) = new_alpha;
            max_delta = std::max(max_delta, std::fabs(delta));
          }
        }
        ++inner;
      } while (max_delta > 0.01 * tol && inner < 2000);

      const double kappa_jj = alpha.dot(qa) + 1.0 / c;
      k(j, j) = kappa_jj;
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        k(others[static_cast<std::size_t>(a)], j) = alpha(a);
        k(j, others[static_cast<std::size_t>(a)]) = alpha(a);
      }
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        for (Eigen::Index b = 0; b < p - 1; ++b)
          w(others[static_cast<std::size_t>(a)],
            others[static_cast<std::size_t>(b)]) = q(a, b) + c * qa(a) * qa(b);
        w(others[static_cast<std::size_t>(a)], j) = -c * qa(a);
        w(j, others[static_cast<std::size_t>(a)]) = -c * qa(a);
      }
      w(j, j) = c;
    }

    // Implied covariance must reproduce s on the free entries and diagonal.
    double viol = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      viol = std::max(viol, std::fabs(w(i, i) - sm(i, i)));
      for (Eigen::Index j = i + 1; j < p; ++j) {
        if (mask(i, j)) viol = std::max(viol, std::fabs(w(i, j) - sm(i, j)));
      }
    }
    if (viol <= tol) converged = true;
  }

  if (!converged) {
    throw Error(ErrorCode::NotConverged,
                "constrained refit did not converge");
  }
  if (!is_positive_definite(symmetrized(k))) {
    throw Error(ErrorCode::InfeasibleMask,
                "constrained model has no positive-definite solution");
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (!mask(i, j)) {
        k(i, j) = 0.0;
        k(j, i) = 0.0;
      }
    }
  }
  PrecisionMatrix out;
  out.k = std::move(k);
  out.implied_cov = std::move(w);
  out.lambda = 0.0;
  out.converged = true;
  out.iterations = sweep;
  return out;
}

}  // namespace pcornet
