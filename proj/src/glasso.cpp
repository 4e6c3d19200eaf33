#include "pcornet/glasso.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "pcornet/errors.hpp"
#include "pcornet/stats.hpp"

namespace pcornet {

namespace {

constexpr double kZeroSnap = 100.0 * std::numeric_limits<double>::epsilon();

inline double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

double mean_abs_offdiag(const Matrix& m) {
  const Eigen::Index p = m.rows();
  if (p < 2) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j) sum += std::fabs(m(i, j));
  return sum / static_cast<double>(p * (p - 1));
}

std::vector<std::string> default_labels(Eigen::Index p) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j)
    labels.push_back("V" + std::to_string(j + 1));
  return labels;
}

}  // namespace

int PcorNetwork::edge_count() const {
  int count = 0;
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = i + 1; j < weights.cols(); ++j)
      if (weights(i, j) != 0.0) ++count;
  return count;
}

std::vector<double> lambda_path(const CorrelationMatrix& s, int n_lambda,
                                double ratio) {
  if (n_lambda < 2) {
    throw Error(ErrorCode::InvalidArgument, "n_lambda must be at least 2");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ratio must lie in (0, 1)");
  }
  double lambda_max = 0.0;
  const Eigen::Index p = s.p();
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      lambda_max = std::max(lambda_max, std::fabs(s.entries(i, j)));
  if (lambda_max == 0.0) {
    throw Error(ErrorCode::AllZeroCorrelations,
                "all off-diagonal correlations are zero");
  }
  const double lo = std::log(ratio * lambda_max);
  const double hi = std::log(lambda_max);
  std::vector<double> path(static_cast<std::size_t>(n_lambda));
  for (int i = 0; i < n_lambda; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_lambda - 1);
    path[static_cast<std::size_t>(i)] = std::exp(lo + t * (hi - lo));
  }
  path.back() = lambda_max;  // guard the endpoint against rounding
  return path;
}

// Block coordinate ascent over rows/columns of K. For column j with the rest
// of K fixed, the exact block maximizer solves the lasso
//   min_a  (c/2) a^T Q a + s12^T a + lambda ||a||_1,   Q = (K11)^-1,
// with kappa_jj = a^T Q a + 1/c and c = s_jj (+ lambda when the diagonal is
// penalized). W = K^-1 is maintained jointly through the same block
// identities, which keeps every sweep an exact ascent step on the penalized
// likelihood.
PrecisionMatrix glasso_fit(const CorrelationMatrix& s_in, double lambda,
                           const GlassoOptions& opts) {
  const Matrix& s = s_in.entries;
  const Eigen::Index p = s.rows();
  if (p < 2 || !is_symmetric(s, 1e-8)) {
    throw Error(ErrorCode::InvalidArgument,
                "correlation input must be symmetric with p >= 2");
  }
  if (lambda < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
  }
  if (lambda == 0.0 && !is_positive_definite(s)) {
    throw Error(ErrorCode::SingularInput,
                "lambda = 0 requires a strictly positive-definite input");
  }

  const double mean_off = mean_abs_offdiag(s);
  const double thr = opts.tol * mean_off;

  Matrix k, w;
  if (opts.warm_start != nullptr && opts.warm_start->k.rows() == p) {
    k = opts.warm_start->k;
    w = opts.warm_start->implied_cov;
  } else {
    k = Matrix::Zero(p, p);
    w = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      const double c = s(i, i) + (opts.penalize_diagonal ? lambda : 0.0);
      k(i, i) = 1.0 / c;
      w(i, i) = c;
    }
  }

  Vector alpha(p - 1), grad_cache(p - 1);
  Matrix q(p - 1, p - 1);
  Vector s12(p - 1), w12(p - 1);
  std::vector<Eigen::Index> others(static_cast<std::size_t>(p - 1));

  bool converged = false;
  int sweep = 0;
  Matrix w_prev = w;
  const double inner_thr = std::max(0.1 * thr, 1e-12);

  while (sweep < opts.max_iter) {
    ++sweep;
    // Re-anchor the maintained inverse; the rank-one block updates below are
    // exact only when Q really is (K11)^-1.
    w = inverse_spd(symmetrized(k));
    for (Eigen::Index j = 0; j < p; ++j) {
      {
        std::size_t t = 0;
        for (Eigen::Index i = 0; i < p; ++i)
          if (i != j) others[t++] = i;
      }
      const double c = s(j, j) + (opts.penalize_diagonal ? lambda : 0.0);

      // Q = (K11)^-1 out of the maintained inverse.
      const double wjj = w(j, j);
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        w12(a) = w(others[static_cast<std::size_t>(a)], j);
        s12(a) = s(others[static_cast<std::size_t>(a)], j);
        alpha(a) = k(others[static_cast<std::size_t>(a)], j);
      }
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        for (Eigen::Index b = 0; b < p - 1; ++b) {
          q(a, b) = w(others[static_cast<std::size_t>(a)],
                      others[static_cast<std::size_t>(b)]) -
                    w12(a) * w12(b) / wjj;
        }
      }

      // Coordinate descent on the column lasso.
      grad_cache.noalias() = q * alpha;  // (Q a), updated incrementally
      int inner_iter = 0;
      double max_delta = 0.0;
      do {
        max_delta = 0.0;
        for (Eigen::Index l = 0; l < p - 1; ++l) {
          const double qll = q(l, l);
          const double g = s12(l) + c * (grad_cache(l) - qll * alpha(l));
          const double new_alpha = -soft_threshold(g, lambda) / (c * qll);
          const double delta = new_alpha - alpha(l);
          if (delta != 0.0) {
            grad_cache += delta * q.col(l);
            alpha(l) = new_alpha;
            max_delta = std::max(max_delta, std::fabs(delta));
          }
        }
        ++inner_iter;
      } while (max_delta > inner_thr && inner_iter < 1000);

      // Write the block back into K and refresh W via the inverse identities.
      const double quad = alpha.dot(grad_cache);  // a^T Q a
      const double kappa_jj = quad + 1.0 / c;
      k(j, j) = kappa_jj;
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        k(others[static_cast<std::size_t>(a)], j) = alpha(a);
        k(j, others[static_cast<std::size_t>(a)]) = alpha(a);
      }
      // u = Q a; W11 = Q + c u u^T; w12 = -c u; w22 = c.
      for (Eigen::Index a = 0; a < p - 1; ++a) {
        const double ua = grad_cache(a);
        for (Eigen::Index b = 0; b < p - 1; ++b) {
          w(others[static_cast<std::size_t>(a)],
            others[static_cast<std::size_t>(b)]) = q(a, b) + c * ua * grad_cache(b);
        }
        w(others[static_cast<std::size_t>(a)], j) = -c * ua;
        w(j, others[static_cast<std::size_t>(a)]) = -c * ua;
      }
      w(j, j) = c;
    }

    if (opts.objective_log != nullptr) {
      opts.objective_log->push_back(penalized_objective(k, s, lambda));
    }
#ifndef NDEBUG
    {
      static thread_local double dbg_prev;
      const double dbg_obj = penalized_objective(k, s, lambda);
      assert(sweep == 1 ||
             dbg_obj >= dbg_prev - 1e-9 * std::max(1.0, std::fabs(dbg_prev)));
      dbg_prev = dbg_obj;
    }
#endif

    const double change = mean_abs_offdiag(w - w_prev);
    w_prev = w;
    if (change <= thr) {
      // Stationarity check against the exact gradient K^-1 - S.
      const Matrix w_exact = inverse_spd(symmetrized(k));
      double viol = 0.0;
      for (Eigen::Index i = 0; i < p; ++i) {
        const double target =
            s(i, i) + (opts.penalize_diagonal ? lambda : 0.0);
        viol = std::max(viol, std::fabs(w_exact(i, i) - target));
        for (Eigen::Index j2 = i + 1; j2 < p; ++j2) {
          const double g = w_exact(i, j2) - s(i, j2);
          if (k(i, j2) != 0.0) {
            viol = std::max(viol,
                            std::fabs(g - lambda * (k(i, j2) > 0 ? 1.0 : -1.0)));
          } else {
            viol = std::max(viol, std::fabs(g) - lambda);
          }
        }
      }
      if (viol <= std::max(thr, 1e-12)) {
        w = w_exact;
        converged = true;
        break;
      }
    }
  }

  if (!converged) {
    throw Error(ErrorCode::NotConverged,
                "glasso did not converge in " + std::to_string(sweep) +
                    " sweeps (lambda = " + std::to_string(lambda) + ")");
  }

  // Snap numerically-dead off-diagonals so edge counts are well-defined.
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (std::fabs(k(i, j)) < kZeroSnap) {
        k(i, j) = 0.0;
        k(j, i) = 0.0;
      }
    }
  }

  PrecisionMatrix out;
  out.k = std::move(k);
  out.implied_cov = std::move(w);
  out.lambda = lambda;
  out.converged = true;
  out.iterations = sweep;
  return out;
}

PcorNetwork precision_to_pcor(const Matrix& k, std::vector<std::string> labels) {
  const Eigen::Index p = k.rows();
  if (!is_positive_definite(symmetrized(k))) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "precision matrix is not positive definite");
  }
  PcorNetwork net;
  net.weights = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j || k(i, j) == 0.0) continue;
      net.weights(i, j) = -k(i, j) / std::sqrt(k(i, i) * k(j, j));
    }
  }
  net.labels = labels.empty() ? default_labels(p) : std::move(labels);
  return net;
}

PcorNetwork precision_to_pcor(const PrecisionMatrix& k,
                              std::vector<std::string> labels) {
  return precision_to_pcor(k.k, std::move(labels));
}

NodewiseFit nodewise_fit(const DataMatrix& data) {
  const Eigen::Index p = data.n_cols();
  std::vector<Eigen::Index> complete;
  for (Eigen::Index i = 0; i < data.n_rows(); ++i) {
    bool ok = true;
    for (Eigen::Index j = 0; j < p; ++j)
      if (std::isnan(data.values(i, j))) { ok = false; break; }
    if (ok) complete.push_back(i);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(complete.size());
  if (n <= p) {
    throw Error(ErrorCode::InsufficientData,
                "node-wise regression needs more complete rows than columns");
  }
  Matrix x(n, p);
  for (Eigen::Index r = 0; r < n; ++r) x.row(r) = data.values.row(complete[r]);

  NodewiseFit fit;
  fit.slopes = Matrix::Zero(p, p);
  fit.residual_sd.assign(static_cast<std::size_t>(p), 0.0);
  fit.intercepts.assign(static_cast<std::size_t>(p), 0.0);

  Matrix design(n, p);  // intercept + the p-1 predictors
  for (Eigen::Index node = 0; node < p; ++node) {
    design.col(0).setOnes();
    Eigen::Index t = 1;
    for (Eigen::Index j = 0; j < p; ++j)
      if (j != node) design.col(t++) = x.col(j);
    const Vector y = x.col(node);
    const Matrix xtx = design.transpose() * design;
    Eigen::LLT<Matrix> llt(xtx);
    bool singular = llt.info() != Eigen::Success;
    if (!singular) {
      const auto& l = llt.matrixLLT();
      double dmin = l(0, 0), dmax = l(0, 0);
      for (Eigen::Index i = 1; i < p; ++i) {
        dmin = std::min(dmin, l(i, i));
        dmax = std::max(dmax, l(i, i));
      }
      singular = !(dmin > 1e-9 * dmax);
    }
    if (singular) {
      throw Error(ErrorCode::RankDeficient,
                  "regression for node " +
                      data.labels[static_cast<std::size_t>(node)] +
                      " is singular");
    }
    const Vector beta = llt.solve(design.transpose() * y);
    const Vector resid = y - design * beta;
    const double rss = resid.squaredNorm();
    if (!(rss > 1e-12 * y.squaredNorm())) {
      throw Error(ErrorCode::RankDeficient,
                  "zero residual variance at node " +
                      data.labels[static_cast<std::size_t>(node)]);
    }
    fit.residual_sd[static_cast<std::size_t>(node)] =
        std::sqrt(rss / static_cast<double>(n - 1));
    fit.intercepts[static_cast<std::size_t>(node)] = beta(0);
    t = 1;
    for (Eigen::Index j = 0; j < p; ++j)
      if (j != node) fit.slopes(node, j) = beta(t++);
  }
  return fit;
}

PcorNetwork nodewise_pcor(const DataMatrix& data) {
  const NodewiseFit fit = nodewise_fit(data);
  const Eigen::Index p = data.n_cols();
  PcorNetwork net;
  net.weights = Matrix::Zero(p, p);
  net.labels = data.labels;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double sd_i = fit.residual_sd[static_cast<std::size_t>(i)];
      const double sd_j = fit.residual_sd[static_cast<std::size_t>(j)];
      // The two directed conversions agree analytically; averaging absorbs
      // rounding.
      const double w = 0.5 * (fit.slopes(i, j) * sd_j / sd_i +
                              fit.slopes(j, i) * sd_i / sd_j);
      net.weights(i, j) = net.weights(j, i) = std::clamp(w, -1.0, 1.0);
    }
  }
  return net;
}

double penalized_objective(const Matrix& k, const Matrix& s, double lambda) {
  double l1 = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j)
      if (i != j) l1 += std::fabs(k(i, j));
  return logdet_spd(symmetrized(k)) - (s * k).trace() - lambda * l1;
}

double kkt_violation(const PrecisionMatrix& fit, const Matrix& s,
                     double lambda, bool penalize_diagonal) {
  const Matrix w = inverse_spd(symmetrized(fit.k));
  const Eigen::Index p = s.rows();
  double viol = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double g = w(i, j) - s(i, j);
      if (i == j) {
        viol = std::max(viol,
                        std::fabs(g - (penalize_diagonal ? lambda : 0.0)));
      } else if (fit.k(i, j) != 0.0) {
        viol = std::max(viol,
                        std::fabs(g - lambda * (fit.k(i, j) > 0 ? 1.0 : -1.0)));
      } else {
        viol = std::max(viol, std::fabs(g) - lambda);
      }
    }
  }
  return viol;
}

}  // namespace pcornet
