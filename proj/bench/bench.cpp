// Timing harness comparing the parallel kernels against their serial
// reference paths on identical inputs, and checking that both agree.
//
//   pcornet_bench [threads]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "pcornet/bootstrap.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/correlation.hpp"
#include "pcornet/estimator.hpp"
#include "pcornet/network.hpp"
#include "pcornet/parallel.hpp"
#include "pcornet/simulator.hpp"

using namespace pcornet;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  max|diff| %g\n",
              name, serial, parallel, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : resolve_threads(0);
  std::printf("pcornet_bench: %d worker thread(s)\n", threads);

  {
    // Pairwise mixed correlations (polychoric-heavy).
    const PcorNetwork truth = chain_graph(16, 0.3, 0.4, 7);
    DataMatrix data = ordinalize(sample_ggm(truth, 1500, 11), 5);
    CorrelationMatrix serial_m, parallel_m;
    const double ts = seconds([&] {
      serial_m = auto_corr(data, AutoCorrOptions{7, {}, 1});
    });
    const double tp = seconds([&] {
      parallel_m = auto_corr(data, AutoCorrOptions{7, {}, threads});
    });
    report("auto_corr 16x1500 ordinal", ts, tp,
           (serial_m.entries - parallel_m.entries).cwiseAbs().maxCoeff());
  }

  {
    // Weighted betweenness on a dense random graph.
    Rng rng(3);
    const int p = 220;
    PcorNetwork net;
    net.weights = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      net.labels.push_back("V" + std::to_string(i));
      for (int j = i + 1; j < p; ++j) {
        if (rng.next_double() < 0.2) {
          const double w = rng.next_uniform(0.05, 0.5);
          net.weights(i, j) = net.weights(j, i) = w;
        }
      }
    }
    std::vector<double> serial_bc, parallel_bc;
    const double ts = seconds([&] { serial_bc = betweenness_serial(net); });
    const double tp = seconds([&] { parallel_bc = betweenness(net, threads); });
    report("betweenness p=220", ts, tp, max_abs_diff(serial_bc, parallel_bc));
  }

  {
    // Full-pipeline bootstrap replicates.
    const PcorNetwork truth = chain_graph(8, 0.3, 0.4, 5);
    const DataMatrix data = sample_ggm(truth, 400, 13);
    EstimatorConfig config;
    config.cor_method = CorMethod::Pearson;
    BootstrapResult serial_res =
        nonparametric_boot(data, config, 2, 99, 1);  // warm-up
    double ts = 0.0, tp = 0.0;
    BootstrapResult parallel_res;
    ts = seconds([&] {
      serial_res = nonparametric_boot(data, config, 120, 99, 1);
    });
    tp = seconds([&] {
      parallel_res = nonparametric_boot(data, config, 120, 99, threads);
    });
    double diff = 0.0;
    for (std::size_t k = 0; k < serial_res.replicates.size(); ++k) {
      diff = std::max(diff, (serial_res.replicates[k].network.weights -
                             parallel_res.replicates[k].network.weights)
                                .cwiseAbs()
                                .maxCoeff());
    }
    report("bootstrap 120 reps n=400", ts, tp, diff);
  }

  {
    // Simulation grid.
    SimulationGrid grid;
    grid.true_network = chain_graph(8, 0.3, 0.4, 21);
    grid.n_cases = {100, 250};
    grid.n_reps = 30;
    grid.master_seed = 17;
    EstimatorConfig est;
    est.cor_method = CorMethod::Pearson;
    grid.estimators = {est};
    SimulationResult serial_res, parallel_res;
    const double ts = seconds([&] { serial_res = net_simulator(grid, 1); });
    const double tp = seconds([&] { parallel_res = net_simulator(grid, threads); });
    double diff = 0.0;
    for (std::size_t i = 0; i < serial_res.rows.size(); ++i) {
      const auto& a = serial_res.rows[i];
      const auto& b = parallel_res.rows[i];
      if (a.sensitivity && b.sensitivity)
        diff = std::max(diff, std::fabs(*a.sensitivity - *b.sensitivity));
    }
    report("net_simulator 2x30 cells", ts, tp, diff);
  }

  return 0;
}
