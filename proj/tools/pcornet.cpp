// Command-line front end: estimate / centrality / bootstrap / simulate /
// compare, with CSV/JSON/DOT/SVG exports. Exit codes: 0 success, 1 pipeline
// error (machine-readable JSON on stdout), 2 usage or configuration error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcornet/bootstrap.hpp"
#include "pcornet/errors.hpp"
#include "pcornet/estimator.hpp"
#include "pcornet/io.hpp"
#include "pcornet/network.hpp"
#include "pcornet/parallel.hpp"
#include "pcornet/rng.hpp"
#include "pcornet/simulator.hpp"
#include "pcornet/stats.hpp"
#include "pcornet/version.hpp"

namespace {

using nlohmann::json;
using namespace pcornet;

struct CliOptions {
  std::string input;
  std::string input_b;
  std::string cor = "auto";
  double gamma = 0.5;
  bool refit = false;
  int n_lambda = 100;
  double lambda_ratio = 0.01;
  int nboots = 1000;
  std::string boot_type = "nonparametric";
  std::string ncases = "100,250,500,1000,2500";
  int nreps = 100;
  int levels = 0;  // 0 = keep data continuous
  int chain = 0;
  int nperm = 1000;
  std::string seed_text;
  int threads = 0;
  std::string out_dir = ".";
  std::string formats = "json,csv";
  std::string force_ordinal;
  std::string force_continuous;
  bool centrality_ci = false;
  bool estimator_unregularized = false;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

CorMethod parse_cor(const std::string& text) {
  if (text == "auto") return CorMethod::AutoMixed;
  if (text == "pearson") return CorMethod::Pearson;
  if (text == "spearman") return CorMethod::Spearman;
  throw Error(ErrorCode::InvalidArgument,
              "unknown correlation method: " + text);
}

std::uint64_t resolve_seed(const std::string& text) {
  if (!text.empty()) return std::stoull(text);
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void check_readable(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CLI::ValidationError("--input", "cannot read " + path);
  }
}

std::vector<int> resolve_columns(const DataMatrix& data,
                                 const std::string& list) {
  std::vector<int> out;
  for (const auto& name : split_list(list)) {
    bool found = false;
    for (std::size_t j = 0; j < data.labels.size(); ++j) {
      if (data.labels[j] == name) {
        out.push_back(static_cast<int>(j));
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::InvalidArgument, "unknown column: " + name);
    }
  }
  return out;
}

EstimatorConfig build_config(const CliOptions& opt, const DataMatrix* data) {
  EstimatorConfig config;
  config.cor_method = parse_cor(opt.cor);
  config.kind = opt.estimator_unregularized ? EstimatorKind::Unregularized
                                            : EstimatorKind::EbicGlasso;
  config.gamma = opt.gamma;
  config.n_lambda = opt.n_lambda;
  config.lambda_ratio = opt.lambda_ratio;
  config.refit = opt.refit;
  config.threads = opt.threads;
  if (data != nullptr &&
      (!opt.force_ordinal.empty() || !opt.force_continuous.empty())) {
    config.force_scale.assign(static_cast<std::size_t>(data->n_cols()), 0);
    for (int j : resolve_columns(*data, opt.force_ordinal))
      config.force_scale[static_cast<std::size_t>(j)] = 1;
    for (int j : resolve_columns(*data, opt.force_continuous))
      config.force_scale[static_cast<std::size_t>(j)] = -1;
  }
  return config;
}

// The effective configuration embedded in every output. Thread count and
// output locations are execution details, not part of the result.
json config_json(const std::string& command, const CliOptions& opt,
                 std::uint64_t seed) {
  json j;
  j["command"] = command;
  j["tool_version"] = kVersion;
  j["seed"] = seed;
  if (!opt.input.empty()) j["input"] = opt.input;
  if (!opt.input_b.empty()) j["input_b"] = opt.input_b;
  if (command == "estimate" || command == "bootstrap" ||
      command == "compare" || command == "simulate") {
    j["cor"] = opt.cor;
    j["gamma"] = opt.gamma;
    j["n_lambda"] = opt.n_lambda;
    j["lambda_ratio"] = opt.lambda_ratio;
    j["refit"] = opt.refit;
    j["estimator"] =
        opt.estimator_unregularized ? "unregularized" : "ebic_glasso";
  }
  if (command == "bootstrap") {
    j["type"] = opt.boot_type;
    j["nboots"] = opt.nboots;
  }
  if (command == "simulate") {
    j["ncases"] = opt.ncases;
    j["nreps"] = opt.nreps;
    j["levels"] = opt.levels;
    if (opt.chain > 0) j["chain"] = opt.chain;
  }
  if (command == "compare") j["nperm"] = opt.nperm;
  return j;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string out_path(const CliOptions& opt, const std::string& name) {
  return (std::filesystem::path(opt.out_dir) / name).string();
}

std::set<std::string> parse_formats(const std::string& text) {
  std::set<std::string> out;
  for (const auto& f : split_list(text)) {
    if (f != "json" && f != "csv" && f != "dot" && f != "svg") {
      throw CLI::ValidationError("--format", "unknown format: " + f);
    }
    out.insert(f);
  }
  return out;
}

int cmd_estimate(const CliOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed_text);
  const std::set<std::string> formats = parse_formats(opt.formats);
  const DataMatrix data = read_csv(opt.input);
  const EstimatorConfig config = build_config(opt, &data);
  const json cfg = config_json("estimate", opt, seed);

  const EstimateResult result = estimate_network(data, config);
  print_warnings(result.warnings);

  NetworkDocument doc = make_document(result.network);
  doc.gamma = opt.gamma;
  doc.n = static_cast<int>(data.n_rows());
  doc.cor_method = opt.cor;
  doc.pd_repaired = result.correlation.pd_repaired;
  doc.seed = seed;
  if (result.trace) doc.selected_lambda = result.trace->selected_lambda();

  std::filesystem::create_directories(opt.out_dir);
  if (formats.count("json")) {
    write_network_json(doc, out_path(opt, "network.json"));
  }
  if (formats.count("csv")) {
    write_text_file(out_path(opt, "edges.csv"),
                    edge_list_csv(result.network, seed, cfg.dump()));
    if (result.trace) {
      write_text_file(out_path(opt, "trace.csv"),
                      trace_csv(*result.trace,
                                static_cast<int>(result.network.p()), seed,
                                cfg.dump()));
    }
  }
  if (formats.count("dot")) {
    write_text_file(out_path(opt, "network.dot"), network_dot(doc, cfg.dump()));
  }
  if (formats.count("svg")) {
    write_text_file(out_path(opt, "network.svg"),
                    network_svg(doc, mix_seed(seed, 77), 500, cfg.dump()));
  }
  std::cerr << "estimate: seed " << seed << ", " << doc.edge_count
            << " edge(s) at lambda = " << format_double(doc.selected_lambda)
            << "\n";
  return 0;
}

int cmd_centrality(const CliOptions& opt) {
  const NetworkDocument doc = read_network_json(opt.input);
  const PcorNetwork net = document_to_network(doc);
  const CentralityTable table = centrality_table(net, opt.threads);
  json cfg;
  cfg["command"] = "centrality";
  cfg["input"] = opt.input;
  cfg["tool_version"] = kVersion;
  cfg["seed"] = doc.seed;
  std::filesystem::create_directories(opt.out_dir);
  write_text_file(out_path(opt, "centrality.csv"),
                  centrality_csv(net, table, doc.seed, cfg.dump()));
  json out;
  out["seed"] = doc.seed;
  out["config"] = cfg;
  out["nodes"] = json::array();
  for (std::size_t i = 0; i < net.labels.size(); ++i) {
    out["nodes"].push_back({{"node", net.labels[i]},
                            {"strength", table.strength[i]},
                            {"closeness", table.closeness[i]},
                            {"betweenness", table.betweenness[i]},
                            {"z_strength", table.z_strength[i]},
                            {"z_closeness", table.z_closeness[i]},
                            {"z_betweenness", table.z_betweenness[i]}});
  }
  write_text_file(out_path(opt, "centrality.json"), out.dump(2) + "\n");
  return 0;
}

json replicate_summaries(const BootstrapResult& res) {
  json out = json::array();
  for (const auto& rep : res.replicates) {
    double gs = 0.0;
    for (Eigen::Index i = 0; i < rep.network.p(); ++i)
      for (Eigen::Index j = i + 1; j < rep.network.p(); ++j)
        gs += std::fabs(rep.network.weights(i, j));
    out.push_back({{"index", rep.index},
                   {"proportion", rep.proportion},
                   {"n_rows", rep.n_rows},
                   {"n_unique_rows", rep.n_unique_rows},
                   {"edge_count", rep.network.edge_count()},
                   {"global_strength", gs}});
  }
  return out;
}

int cmd_bootstrap(const CliOptions& opt) {
  if (opt.centrality_ci) {
    // Refused on purpose; point the user at the supported analysis.
    throw Error(ErrorCode::Unsupported,
                "confidence intervals cannot be constructed for centrality "
                "indices; use --type case and the reported CS-coefficients "
                "instead");
  }
  const std::uint64_t seed = resolve_seed(opt.seed_text);
  const DataMatrix data = read_csv(opt.input);
  const EstimatorConfig config = build_config(opt, &data);
  const json cfg = config_json("bootstrap", opt, seed);
  std::filesystem::create_directories(opt.out_dir);

  if (opt.boot_type == "nonparametric") {
    const BootstrapResult res =
        nonparametric_boot(data, config, opt.nboots, seed, opt.threads);
    print_warnings(res.warnings);
    const auto intervals = edge_quantile_intervals(res, 0.95);

    std::ostringstream edges;
    edges << provenance_header(seed, cfg.dump());
    edges << "from,to,full_sample,lo,hi\n";
    for (const auto& e : intervals) {
      edges << res.full_network.labels[static_cast<std::size_t>(e.i)] << ','
            << res.full_network.labels[static_cast<std::size_t>(e.j)] << ','
            << format_double(e.full_sample) << ',' << format_double(e.lo)
            << ',' << format_double(e.hi) << "\n";
    }
    write_text_file(out_path(opt, "boot_edges.csv"), edges.str());

    // Pairwise difference significance over full-sample edges and strengths.
    struct EdgeRef { int i, j; std::string name; };
    std::vector<EdgeRef> present;
    for (Eigen::Index i = 0; i < res.full_network.p(); ++i)
      for (Eigen::Index j = i + 1; j < res.full_network.p(); ++j)
        if (res.full_network.weights(i, j) != 0.0)
          present.push_back(
              {static_cast<int>(i), static_cast<int>(j),
               res.full_network.labels[static_cast<std::size_t>(i)] + "--" +
                   res.full_network.labels[static_cast<std::size_t>(j)]});
    std::ostringstream ediff;
    ediff << provenance_header(seed, cfg.dump());
    ediff << "edge";
    for (const auto& e : present) ediff << ',' << e.name;
    ediff << "\n";
    for (const auto& a : present) {
      ediff << a.name;
      for (const auto& b : present) {
        if (a.i == b.i && a.j == b.j) {
          ediff << ",0";
          continue;
        }
        const auto d = difference_test(res, DiffWhat::EdgeVsEdge, a.i, a.j,
                                       b.i, b.j, 0.95);
        ediff << ',' << (d.significant ? 1 : 0);
      }
      ediff << "\n";
    }
    write_text_file(out_path(opt, "boot_diff_edges.csv"), ediff.str());

    std::ostringstream sdiff;
    sdiff << provenance_header(seed, cfg.dump());
    sdiff << "node";
    for (const auto& l : res.full_network.labels) sdiff << ',' << l;
    sdiff << "\n";
    for (Eigen::Index a = 0; a < res.full_network.p(); ++a) {
      sdiff << res.full_network.labels[static_cast<std::size_t>(a)];
      for (Eigen::Index b = 0; b < res.full_network.p(); ++b) {
        if (a == b) {
          sdiff << ",0";
          continue;
        }
        const auto d = difference_test(
            res, DiffWhat::NodeStrengthVsNodeStrength, static_cast<int>(a), -1,
            static_cast<int>(b), -1, 0.95);
        sdiff << ',' << (d.significant ? 1 : 0);
      }
      sdiff << "\n";
    }
    write_text_file(out_path(opt, "boot_diff_strength.csv"), sdiff.str());

    json summary;
    summary["kind"] = "nonparametric";
    summary["n_boots"] = opt.nboots;
    summary["n_failures"] = static_cast<int>(res.failures.size());
    summary["seed"] = seed;
    summary["config"] = cfg;
    summary["full_edge_count"] = res.full_network.edge_count();
    summary["replicates"] = replicate_summaries(res);
    write_text_file(out_path(opt, "boot_summary.json"),
                    summary.dump(2) + "\n");
  } else if (opt.boot_type == "case") {
    const BootstrapResult res = case_dropping_boot(
        data, config, default_case_proportions(), opt.nboots, seed,
        opt.threads);
    print_warnings(res.warnings);

    const CentralityIndex indices[] = {CentralityIndex::Strength,
                                       CentralityIndex::Closeness,
                                       CentralityIndex::Betweenness};
    std::ostringstream curves;
    curves << provenance_header(seed, cfg.dump());
    curves << "retained_proportion,index,mean_correlation,"
              "fraction_at_or_above_0.7,n_replicates\n";
    std::set<double> levels;
    for (const auto& rep : res.replicates) levels.insert(rep.proportion);
    for (double prop : levels) {
      for (const auto index : indices) {
        double sum = 0.0;
        int count = 0, above = 0;
        for (const auto& rep : res.replicates) {
          if (rep.proportion != prop) continue;
          const auto& full = index == CentralityIndex::Strength
                                 ? res.full_centrality.strength
                                 : index == CentralityIndex::Closeness
                                       ? res.full_centrality.closeness
                                       : res.full_centrality.betweenness;
          const auto& part = index == CentralityIndex::Strength
                                 ? rep.centrality.strength
                                 : index == CentralityIndex::Closeness
                                       ? rep.centrality.closeness
                                       : rep.centrality.betweenness;
          const double r = pearson(full, part);
          if (!std::isnan(r)) {
            sum += r;
            if (r >= 0.7) ++above;
          }
          ++count;
        }
        curves << format_double(prop) << ','
               << centrality_index_name(index) << ','
               << (count > 0 ? format_double(sum / count) : "NA") << ','
               << (count > 0 ? format_double(static_cast<double>(above) /
                                             count)
                             : "NA")
               << ',' << count << "\n";
      }
    }
    write_text_file(out_path(opt, "boot_stability.csv"), curves.str());

    json cs;
    cs["seed"] = seed;
    cs["config"] = cfg;
    cs["interpretation_thresholds"] = {{"stable", 0.5},
                                       {"minimally_acceptable", 0.25}};
    for (const auto index : indices) {
      const double value = cs_coefficient(res, index, 0.7, 0.95);
      cs["cs"][centrality_index_name(index)] = {
          {"value", value}, {"label", cs_interpretation(value)}};
    }
    cs["n_failures"] = static_cast<int>(res.failures.size());
    write_text_file(out_path(opt, "boot_cs.json"), cs.dump(2) + "\n");

    json summary;
    summary["kind"] = "case";
    summary["n_boots"] = opt.nboots;
    summary["n_failures"] = static_cast<int>(res.failures.size());
    summary["seed"] = seed;
    summary["config"] = cfg;
    summary["replicates"] = replicate_summaries(res);
    write_text_file(out_path(opt, "boot_summary.json"),
                    summary.dump(2) + "\n");
  } else {
    throw CLI::ValidationError("--type",
                               "must be 'nonparametric' or 'case'");
  }
  return 0;
}

int cmd_simulate(const CliOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed_text);
  const json cfg = config_json("simulate", opt, seed);
  std::filesystem::create_directories(opt.out_dir);

  SimulationGrid grid;
  if (opt.chain > 0) {
    grid.true_network = chain_graph(opt.chain, 0.3, 0.4, mix_seed(seed, 1));
    NetworkDocument truth = make_document(grid.true_network);
    truth.seed = seed;
    truth.cor_method = "generator";
    write_network_json(truth, out_path(opt, "truth.json"));
  } else if (!opt.input.empty()) {
    grid.true_network = document_to_network(read_network_json(opt.input));
  } else {
    throw CLI::ValidationError("--input", "need --input TRUTH.json or --chain P");
  }
  for (const auto& token : split_list(opt.ncases)) {
    grid.n_cases.push_back(std::stoi(token));
  }
  grid.n_reps = opt.nreps;
  grid.master_seed = seed;
  if (opt.levels > 0) {
    grid.generator.ordinal = true;
    grid.generator.levels = opt.levels;
  }
  EstimatorConfig est = build_config(opt, nullptr);
  est.threads = 1;
  grid.estimators = {est};

  const SimulationResult result = net_simulator(grid, opt.threads);

  std::ostringstream rows;
  rows << provenance_header(seed, cfg.dump());
  rows << "condition,n,estimator,replicate,converged,sensitivity,"
          "specificity,edge_correlation,strength_correlation,"
          "closeness_correlation,betweenness_correlation,error\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  for (const auto& row : result.rows) {
    rows << row.condition << ',' << row.n << ',' << row.estimator_index << ','
         << row.replicate << ',' << (row.converged ? 1 : 0) << ','
         << cell(row.sensitivity) << ',' << cell(row.specificity) << ','
         << cell(row.edge_correlation) << ',' << cell(row.strength_correlation)
         << ',' << cell(row.closeness_correlation) << ','
         << cell(row.betweenness_correlation) << ',' << row.error << "\n";
  }
  write_text_file(out_path(opt, "sim_results.csv"), rows.str());

  json summary;
  summary["seed"] = seed;
  summary["config"] = cfg;
  summary["conditions"] = json::array();
  const auto opt_json = [](const std::optional<double>& v) {
    return v ? json(*v) : json();
  };
  for (const auto& s : summarize(result)) {
    summary["conditions"].push_back(
        {{"condition", s.condition},
         {"n", s.n},
         {"estimator", s.estimator_index},
         {"n_rows", s.n_rows},
         {"n_failed", s.n_failed},
         {"sensitivity", opt_json(s.sensitivity)},
         {"specificity", opt_json(s.specificity)},
         {"edge_correlation", opt_json(s.edge_correlation)},
         {"strength_correlation", opt_json(s.strength_correlation)},
         {"closeness_correlation", opt_json(s.closeness_correlation)},
         {"betweenness_correlation", opt_json(s.betweenness_correlation)}});
  }
  write_text_file(out_path(opt, "sim_summary.json"), summary.dump(2) + "\n");
  return 0;
}

int cmd_compare(const CliOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed_text);
  const DataMatrix data_a = read_csv(opt.input);
  const DataMatrix data_b = read_csv(opt.input_b);
  const EstimatorConfig config = build_config(opt, &data_a);
  const json cfg = config_json("compare", opt, seed);

  const ComparisonResult res = permutation_comparison(
      data_a, data_b, config, opt.nperm, seed, opt.threads);
  print_warnings(res.warnings);

  json out;
  out["seed"] = seed;
  out["config"] = cfg;
  out["stat_global_strength"] = res.stat_global_strength;
  out["stat_max_edge_diff"] = res.stat_max_edge_diff;
  out["p_global"] = res.p_global;
  out["p_max_edge"] = res.p_max_edge;
  out["n_permutations"] = res.n_permutations;
  out["warnings"] = res.warnings;
  std::filesystem::create_directories(opt.out_dir);
  write_text_file(out_path(opt, "compare.json"), out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized partial-correlation network estimation"};
  app.require_subcommand(1);
  CliOptions opt;

  const auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) {
      sub->add_option("--input", opt.input, "input file")->required();
    } else {
      sub->add_option("--input", opt.input, "input file");
    }
    sub->add_option("--seed", opt.seed_text, "random seed (decimal)");
    sub->add_option("--threads", opt.threads,
                    "worker threads (0 = PCORNET_THREADS or all cores)");
    sub->add_option("--out-dir", opt.out_dir, "output directory");
  };
  const auto add_estimation = [&](CLI::App* sub) {
    sub->add_option("--cor", opt.cor, "auto|pearson|spearman")
        ->check(CLI::IsMember({"auto", "pearson", "spearman"}));
    sub->add_option("--gamma", opt.gamma, "EBIC hyperparameter")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--n-lambda", opt.n_lambda, "path length");
    sub->add_option("--lambda-ratio", opt.lambda_ratio,
                    "smallest/largest lambda");
    sub->add_flag("--refit", opt.refit,
                  "re-estimate the selected structure without the penalty");
    sub->add_flag("--unregularized", opt.estimator_unregularized,
                  "skip the penalty entirely (inverse-correlation estimate)");
    sub->add_option("--force-ordinal", opt.force_ordinal,
                    "comma-separated columns to treat as ordinal");
    sub->add_option("--force-continuous", opt.force_continuous,
                    "comma-separated columns to treat as continuous");
  };

  CLI::App* estimate = app.add_subcommand("estimate", "fit a network from CSV data");
  add_common(estimate, true);
  add_estimation(estimate);
  estimate->add_option("--format", opt.formats, "json,csv,dot,svg");

  CLI::App* centrality =
      app.add_subcommand("centrality", "centrality table of a network document");
  add_common(centrality, true);

  CLI::App* bootstrap =
      app.add_subcommand("bootstrap", "edge accuracy / centrality stability");
  add_common(bootstrap, true);
  add_estimation(bootstrap);
  bootstrap->add_option("--type", opt.boot_type, "nonparametric|case")
      ->check(CLI::IsMember({"nonparametric", "case"}));
  bootstrap->add_option("--nboots", opt.nboots, "bootstrap replicates");
  bootstrap->add_flag("--centrality-ci", opt.centrality_ci,
                      "request centrality confidence intervals (refused)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "sample-size simulation for a network");
  add_common(simulate, false);
  add_estimation(simulate);
  simulate->add_option("--chain", opt.chain, "generate a chain-graph truth");
  simulate->add_option("--ncases", opt.ncases, "comma-separated sample sizes");
  simulate->add_option("--nreps", opt.nreps, "replicates per condition");
  simulate->add_option("--levels", opt.levels,
                       "ordinalize generated data into this many levels");

  CLI::App* compare =
      app.add_subcommand("compare", "two-group permutation comparison");
  add_common(compare, true);
  add_estimation(compare);
  compare->add_option("--input-b", opt.input_b, "second group CSV")->required();
  compare->add_option("--nperm", opt.nperm, "permutations");

  try {
    app.parse(argc, argv);
    if (!opt.input.empty()) check_readable(opt.input);
    if (!opt.input_b.empty()) check_readable(opt.input_b);
    if (estimate->parsed()) return cmd_estimate(opt);
    if (centrality->parsed()) return cmd_centrality(opt);
    if (bootstrap->parsed()) return cmd_bootstrap(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (compare->parsed()) return cmd_compare(opt);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    nlohmann::json err;
    err["error"] = {{"code", error_code_name(e.code())},
                    {"message", e.what()}};
    std::cout << err.dump() << std::endl;
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = {{"code", "Internal"}, {"message", e.what()}};
    std::cout << err.dump() << std::endl;
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
