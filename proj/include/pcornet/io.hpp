#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcornet/bootstrap.hpp"
#include "pcornet/data.hpp"
#include "pcornet/network.hpp"
#include "pcornet/selection.hpp"
#include "pcornet/simulator.hpp"

namespace pcornet {

struct CsvOptions {
  int ordinal_max_levels = 7;
  std::string na_token = "NA";
};

/// UTF-8 CSV with a header row; the NA token or an empty cell marks a
/// missing value. Columns are typed by the ordinal auto-detection rule.
DataMatrix read_csv(const std::string& path, const CsvOptions& opts = {});
DataMatrix read_csv_stream(std::istream& in, const CsvOptions& opts = {});

/// Self-describing network file: labels, row-major weights and estimation
/// metadata. Round-trips losslessly through JSON.
struct NetworkDocument {
  std::vector<std::string> labels;
  Matrix weights;
  double gamma = 0.5;
  double selected_lambda = 0.0;
  int n = 0;
  int edge_count = 0;
  std::string cor_method = "auto";
  bool pd_repaired = false;
  std::string tool_version;
  std::uint64_t seed = 0;
};

NetworkDocument make_document(const PcorNetwork& net);
PcorNetwork document_to_network(const NetworkDocument& doc);

std::string network_json(const NetworkDocument& doc);
NetworkDocument parse_network_json(const std::string& text);
void write_network_json(const NetworkDocument& doc, const std::string& path);
NetworkDocument read_network_json(const std::string& path);

/// Canonical shortest-round-trip decimal formatting used by every text
/// export, so identical runs produce identical bytes.
std::string format_double(double v);

/// Comment header ("# key: value" lines) embedded at the top of every CSV
/// export: tool version, seed and the effective configuration.
std::string provenance_header(std::uint64_t seed, const std::string& config);

void write_text_file(const std::string& path, const std::string& content);

std::string edge_list_csv(const PcorNetwork& net, std::uint64_t seed,
                          const std::string& config);
std::string trace_csv(const SelectionTrace& trace, int p, std::uint64_t seed,
                      const std::string& config);
std::string centrality_csv(const PcorNetwork& net, const CentralityTable& tab,
                           std::uint64_t seed, const std::string& config);

/// Graphviz export with weight-annotated edges.
std::string network_dot(const NetworkDocument& doc,
                        const std::string& config = "");

/// Static SVG: force-directed placement, edge width and opacity scaled by
/// |weight| (saturating at 1), positive edges blue, negative edges red.
std::string network_svg(const NetworkDocument& doc, std::uint64_t layout_seed,
                        int iterations = 500, const std::string& config = "");

}  // namespace pcornet
