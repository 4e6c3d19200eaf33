#include "pcornet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pcornet/errors.hpp"
#include "pcornet/parallel.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/stats.hpp"

namespace pcornet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dijkstra over edge lengths 1/|w|, with shortest-path counts and
// predecessor lists for the Brandes accumulation.
struct ShortestPaths {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<std::vector<int>> preds;
  std::vector<int> visit_order;  // non-decreasing distance
};

ShortestPaths dijkstra(const Matrix& w, int source) {
  const int p = static_cast<int>(w.rows());
  ShortestPaths sp;
  sp.dist.assign(p, kInf);
  sp.sigma.assign(p, 0.0);
  sp.preds.assign(p, {});
  sp.dist[source] = 0.0;
  sp.sigma[source] = 1.0;
  std::vector<bool> done(p, false);
  for (int step = 0; step < p; ++step) {
    int u = -1;
    double best = kInf;
    for (int v = 0; v < p; ++v) {
      if (!done[v] && sp.dist[v] < best) {
        best = sp.dist[v];
        u = v;
      }
    }
    if (u < 0) break;
    done[u] = true;
    sp.visit_order.push_back(u);
    for (int v = 0; v < p; ++v) {
      if (done[v] || w(u, v) == 0.0) continue;
      const double nd = sp.dist[u] + 1.0 / std::fabs(w(u, v));
      if (nd < sp.dist[v]) {
        sp.dist[v] = nd;
        sp.sigma[v] = sp.sigma[u];
        sp.preds[v] = {u};
      } else if (nd == sp.dist[v]) {
        sp.sigma[v] += sp.sigma[u];
        sp.preds[v].push_back(u);
      }
    }
  }
  return sp;
}

// Dependency contributions of one source to every other node.
std::vector<double> brandes_source(const Matrix& w, int source) {
  const int p = static_cast<int>(w.rows());
  ShortestPaths sp = dijkstra(w, source);
  std::vector<double> delta(p, 0.0);
  std::vector<double> contribution(p, 0.0);
  for (auto it = sp.visit_order.rbegin(); it != sp.visit_order.rend(); ++it) {
    const int node = *it;
    for (int pred : sp.preds[node]) {
      delta[pred] += sp.sigma[pred] / sp.sigma[node] * (1.0 + delta[node]);
    }
    if (node != source) contribution[node] = delta[node];
  }
  return contribution;
}

}  // namespace

std::vector<double> strength(const PcorNetwork& net) {
  const Eigen::Index p = net.p();
  std::vector<double> out(static_cast<std::size_t>(p), 0.0);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j) out[static_cast<std::size_t>(i)] += std::fabs(net.weights(i, j));
  return out;
}

std::vector<double> closeness(const PcorNetwork& net, ClosenessMode mode) {
  const int p = static_cast<int>(net.p());
  std::vector<double> out(p, 0.0);
  for (int i = 0; i < p; ++i) {
    const ShortestPaths sp = dijkstra(net.weights, i);
    double total = 0.0;
    bool all_reachable = true;
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      if (sp.dist[j] == kInf) {
        all_reachable = false;
      } else {
        total += sp.dist[j];
      }
    }
    if (mode == ClosenessMode::ZeroIfUnreachable && !all_reachable) {
      out[i] = 0.0;
    } else {
      out[i] = total > 0.0 ? 1.0 / total : 0.0;
    }
  }
  return out;
}

std::vector<double> betweenness_serial(const PcorNetwork& net) {
  const int p = static_cast<int>(net.p());
  std::vector<double> bc(p, 0.0);
  for (int s = 0; s < p; ++s) {
    const std::vector<double> contribution = brandes_source(net.weights, s);
    for (int v = 0; v < p; ++v) bc[v] += contribution[v];
  }
  for (double& v : bc) v /= 2.0;  // undirected: each pair counted twice
  return bc;
}

std::vector<double> betweenness(const PcorNetwork& net, int threads) {
  const int p = static_cast<int>(net.p());
  // Per-source buffers reduced in source order keep the floating-point sum
  // identical for every worker count.
  Matrix contributions = Matrix::Zero(p, p);
  parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t s) {
    const std::vector<double> c =
        brandes_source(net.weights, static_cast<int>(s));
    for (int v = 0; v < p; ++v) contributions(static_cast<Eigen::Index>(s), v) = c[v];
  });
  std::vector<double> bc(p, 0.0);
  for (int s = 0; s < p; ++s)
    for (int v = 0; v < p; ++v) bc[v] += contributions(s, v);
  for (double& v : bc) v /= 2.0;
  return bc;
}

std::vector<double> standardize(const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.size() < 2) return out;
  const double m = mean(values);
  const double sd = sample_sd(values);
  if (!(sd > 0.0)) return out;  // all-equal input maps to zeros
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - m) / sd;
  return out;
}

CentralityTable centrality_table(const PcorNetwork& net, int threads) {
  CentralityTable t;
  t.strength = strength(net);
  t.closeness = closeness(net);
  t.betweenness = betweenness(net, threads);
  t.z_strength = standardize(t.strength);
  t.z_closeness = standardize(t.closeness);
  t.z_betweenness = standardize(t.betweenness);
  return t;
}

Layout layout_fr(const PcorNetwork& net, std::uint64_t seed, int iterations) {
  const int p = static_cast<int>(net.p());
  Layout layout;
  layout.seed = seed;
  layout.coords.assign(static_cast<std::size_t>(p), {0.0, 0.0});
  if (p <= 1) return layout;

  Rng rng(seed);
  std::vector<double> x(p), y(p);
  for (int i = 0; i < p; ++i) {
    x[i] = rng.next_double();
    y[i] = rng.next_double();
  }

  const double k = std::sqrt(1.0 / static_cast<double>(p));
  const double t0 = 0.1;
  std::vector<double> dx(p), dy(p);
  for (int iter = 0; iter < iterations; ++iter) {
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dy.begin(), dy.end(), 0.0);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        double ex = x[i] - x[j], ey = y[i] - y[j];
        double d = std::sqrt(ex * ex + ey * ey);
        if (d < 1e-9) {
          // Coincident nodes: push apart along a deterministic direction.
          ex = 1e-9 * (i + 1);
          ey = 1e-9 * (j + 1);
          d = std::sqrt(ex * ex + ey * ey);
        }
        const double rep = k * k / d;
        dx[i] += ex / d * rep;
        dy[i] += ey / d * rep;
        dx[j] -= ex / d * rep;
        dy[j] -= ey / d * rep;
        const double wij = std::fabs(net.weights(i, j));
        if (wij > 0.0) {
          const double att = d * d / k * wij;
          dx[i] -= ex / d * att;
          dy[i] -= ey / d * att;
          dx[j] += ex / d * att;
          dy[j] += ey / d * att;
        }
      }
    }
    const double t =
        t0 * (1.0 - static_cast<double>(iter) / static_cast<double>(iterations));
    for (int i = 0; i < p; ++i) {
      const double len = std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
      if (len > 0.0) {
        const double step = std::min(len, t);
        x[i] += dx[i] / len * step;
        y[i] += dy[i] / len * step;
      }
    }
  }

  // Normalize into [-1, 1]^2, preserving the aspect ratio.
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  const double cx = 0.5 * (*xmin_it + *xmax_it);
  const double cy = 0.5 * (*ymin_it + *ymax_it);
  const double span =
      0.5 * std::max(*xmax_it - *xmin_it, *ymax_it - *ymin_it);
  for (int i = 0; i < p; ++i) {
    if (span > 0.0) {
      layout.coords[static_cast<std::size_t>(i)] = {(x[i] - cx) / span,
                                                    (y[i] - cy) / span};
    }
  }
  return layout;
}

Layout average_layout(const std::vector<PcorNetwork>& nets, std::uint64_t seed,
                      int iterations) {
  if (nets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no networks to average");
  }
  const Eigen::Index p = nets.front().p();
  Matrix avg = Matrix::Zero(p, p);
  for (const auto& net : nets) {
    if (net.p() != p) {
      throw Error(ErrorCode::DimensionMismatch,
                  "networks differ in node count");
    }
    avg += net.weights.cwiseAbs();
  }
  avg /= static_cast<double>(nets.size());
  PcorNetwork mean_net;
  mean_net.weights = std::move(avg);
  mean_net.labels = nets.front().labels;
  return layout_fr(mean_net, seed, iterations);
}

}  // namespace pcornet
