#include "pcornet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pcornet/errors.hpp"
#include "pcornet/version.hpp"

namespace pcornet {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r'))
    --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

double fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return std::strtod(buf, nullptr);
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

DataMatrix read_csv_stream(std::istream& in, const CsvOptions& opts) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, "empty input");
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2) {
    throw Error(ErrorCode::ParseError, "need at least 2 columns");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) {
      throw Error(ErrorCode::ParseError,
                  "empty header in column " + std::to_string(i + 1));
    }
    for (std::size_t j = i + 1; j < header.size(); ++j) {
      if (header[i] == header[j]) {
        throw Error(ErrorCode::DuplicateHeader,
                    "duplicate column header: " + header[i]);
      }
    }
  }

  std::vector<std::vector<double>> rows;
  int line_no = 1;  // the header is line 1
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    std::vector<double> row(header.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      if (cell.empty() || cell == opts.na_token) {
        row[c] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw Error(ErrorCode::NonNumericCell,
                    "line " + std::to_string(line_no) + ", column " +
                        header[c] + ": cannot parse \"" + cell + "\"");
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) {
    throw Error(ErrorCode::ParseError, "need at least 2 data rows");
  }

  Matrix values(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < header.size(); ++c)
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];

  DataMatrix data = make_data(std::move(values), header);
  detect_scales(data, opts.ordinal_max_levels);
  return data;
}

DataMatrix read_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  return read_csv_stream(in, opts);
}

NetworkDocument make_document(const PcorNetwork& net) {
  NetworkDocument doc;
  doc.labels = net.labels;
  doc.weights = net.weights;
  doc.edge_count = net.edge_count();
  doc.tool_version = kVersion;
  return doc;
}

PcorNetwork document_to_network(const NetworkDocument& doc) {
  PcorNetwork net;
  net.weights = doc.weights;
  net.labels = doc.labels;
  return net;
}

std::string network_json(const NetworkDocument& doc) {
  json j;
  j["labels"] = doc.labels;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(doc.weights.size()));
  for (Eigen::Index i = 0; i < doc.weights.rows(); ++i)
    for (Eigen::Index c = 0; c < doc.weights.cols(); ++c)
      flat.push_back(doc.weights(i, c));
  j["weights"] = flat;
  j["meta"] = {{"gamma", doc.gamma},
               {"selected_lambda", doc.selected_lambda},
               {"n", doc.n},
               {"edge_count", doc.edge_count},
               {"cor_method", doc.cor_method},
               {"pd_repaired", doc.pd_repaired},
               {"tool_version", doc.tool_version},
               {"seed", doc.seed}};
  return j.dump(2) + "\n";
}

NetworkDocument parse_network_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("invalid JSON: ") + e.what());
  }
  try {
    NetworkDocument doc;
    doc.labels = j.at("labels").get<std::vector<std::string>>();
    const auto flat = j.at("weights").get<std::vector<double>>();
    const std::size_t p = doc.labels.size();
    if (p < 1 || flat.size() != p * p) {
      throw Error(ErrorCode::SchemaError,
                  "weights length must equal labels^2");
    }
    doc.weights.resize(static_cast<Eigen::Index>(p),
                       static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t c = 0; c < p; ++c)
        doc.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
            flat[i * p + c];
    for (Eigen::Index i = 0; i < doc.weights.rows(); ++i) {
      if (doc.weights(i, i) != 0.0) {
        throw Error(ErrorCode::SchemaError, "weights diagonal must be zero");
      }
      for (Eigen::Index c = 0; c < doc.weights.cols(); ++c) {
        if (std::fabs(doc.weights(i, c) - doc.weights(c, i)) > 1e-12) {
          throw Error(ErrorCode::SchemaError, "weights must be symmetric");
        }
        if (std::fabs(doc.weights(i, c)) > 1.0) {
          throw Error(ErrorCode::SchemaError,
                      "weights must lie in [-1, 1]");
        }
      }
    }
    const json& meta = j.at("meta");
    doc.gamma = meta.at("gamma").get<double>();
    doc.selected_lambda = meta.at("selected_lambda").get<double>();
    doc.n = meta.at("n").get<int>();
    doc.edge_count = meta.at("edge_count").get<int>();
    doc.cor_method = meta.at("cor_method").get<std::string>();
    doc.pd_repaired = meta.at("pd_repaired").get<bool>();
    doc.tool_version = meta.at("tool_version").get<std::string>();
    doc.seed = meta.at("seed").get<std::uint64_t>();
    return doc;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("network document schema violation: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path);
  }
}

void write_network_json(const NetworkDocument& doc, const std::string& path) {
  write_text_file(path, network_json(doc));
}

NetworkDocument read_network_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_json(buf.str());
}

std::string provenance_header(std::uint64_t seed, const std::string& config) {
  std::ostringstream out;
  out << "# tool: pcornet " << kVersion << "\n";
  out << "# seed: " << seed << "\n";
  out << "# config: " << config << "\n";
  return out.str();
}

std::string edge_list_csv(const PcorNetwork& net, std::uint64_t seed,
                          const std::string& config) {
  std::ostringstream out;
  out << provenance_header(seed, config);
  out << "from,to,weight\n";
  for (Eigen::Index i = 0; i < net.p(); ++i) {
    for (Eigen::Index j = i + 1; j < net.p(); ++j) {
      if (net.weights(i, j) == 0.0) continue;
      out << net.labels[static_cast<std::size_t>(i)] << ','
          << net.labels[static_cast<std::size_t>(j)] << ','
          << format_double(net.weights(i, j)) << "\n";
    }
  }
  return out.str();
}

std::string trace_csv(const SelectionTrace& trace, int p, std::uint64_t seed,
                      const std::string& config) {
  std::ostringstream out;
  out << provenance_header(seed, config);
  out << "index,lambda,edges,loglik,ebic_gamma_0,ebic_gamma_0.25,"
         "ebic_gamma_0.5,ebic_run_gamma,selected\n";
  for (std::size_t i = 0; i < trace.lambdas.size(); ++i) {
    out << i << ',' << format_double(trace.lambdas[i]) << ','
        << trace.edge_counts[i] << ',';
    if (trace.fit_ok[i]) {
      out << format_double(trace.logliks[i]) << ','
          << format_double(ebic(trace.logliks[i], trace.edge_counts[i],
                                trace.n, p, 0.0))
          << ','
          << format_double(ebic(trace.logliks[i], trace.edge_counts[i],
                                trace.n, p, 0.25))
          << ','
          << format_double(ebic(trace.logliks[i], trace.edge_counts[i],
                                trace.n, p, 0.5))
          << ',' << format_double(trace.ebic_values[i]);
    } else {
      out << "NA,NA,NA,NA,NA";
    }
    out << ',' << (static_cast<int>(i) == trace.selected_index ? 1 : 0)
        << "\n";
  }
  return out.str();
}

std::string centrality_csv(const PcorNetwork& net, const CentralityTable& tab,
                           std::uint64_t seed, const std::string& config) {
  std::ostringstream out;
  out << provenance_header(seed, config);
  out << "node,strength,closeness,betweenness,z_strength,z_closeness,"
         "z_betweenness\n";
  for (std::size_t i = 0; i < net.labels.size(); ++i) {
    out << net.labels[i] << ',' << format_double(tab.strength[i]) << ','
        << format_double(tab.closeness[i]) << ','
        << format_double(tab.betweenness[i]) << ','
        << format_double(tab.z_strength[i]) << ','
        << format_double(tab.z_closeness[i]) << ','
        << format_double(tab.z_betweenness[i]) << "\n";
  }
  return out.str();
}

std::string network_dot(const NetworkDocument& doc,
                        const std::string& config) {
  std::ostringstream out;
  out << "// pcornet " << kVersion << " seed=" << doc.seed << "\n";
  if (!config.empty()) out << "// config: " << config << "\n";
  out << "graph pcornet {\n";
  out << "  node [shape=circle];\n";
  for (const auto& label : doc.labels) {
    out << "  \"" << dot_escape(label) << "\";\n";
  }
  for (Eigen::Index i = 0; i < doc.weights.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < doc.weights.cols(); ++j) {
      const double w = doc.weights(i, j);
      if (w == 0.0) continue;
      out << "  \"" << dot_escape(doc.labels[static_cast<std::size_t>(i)])
          << "\" -- \""
          << dot_escape(doc.labels[static_cast<std::size_t>(j)]) << "\" [weight="
          << format_double(w) << ", color=" << (w > 0 ? "blue" : "red")
          << ", penwidth=" << fmt_fixed(1.0 + 4.0 * std::min(std::fabs(w), 1.0), 2)
          << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string network_svg(const NetworkDocument& doc, std::uint64_t layout_seed,
                        int iterations, const std::string& config) {
  const PcorNetwork net = document_to_network(doc);
  const Layout layout = layout_fr(net, layout_seed, iterations);
  const double size = 640.0, margin = 48.0;
  const auto sx = [&](double v) {
    return fixed(margin + (v + 1.0) / 2.0 * (size - 2.0 * margin), 3);
  };
  const auto sy = [&](double v) {
    return fixed(margin + (1.0 - (v + 1.0) / 2.0) * (size - 2.0 * margin), 3);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n";
  out << "<!-- pcornet " << kVersion << " seed=" << doc.seed
      << " layout_seed=" << layout_seed
      << (config.empty() ? "" : " config=" + config) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (Eigen::Index i = 0; i < net.p(); ++i) {
    for (Eigen::Index j = i + 1; j < net.p(); ++j) {
      const double w = net.weights(i, j);
      if (w == 0.0) continue;
      const double a = std::min(std::fabs(w), 1.0);
      out << "<line x1=\"" << fmt_fixed(sx(layout.coords[i][0]), 3)
          << "\" y1=\"" << fmt_fixed(sy(layout.coords[i][1]), 3) << "\" x2=\""
          << fmt_fixed(sx(layout.coords[j][0]), 3) << "\" y2=\""
          << fmt_fixed(sy(layout.coords[j][1]), 3) << "\" stroke=\""
          << (w > 0 ? "#2166ac" : "#b2182b") << "\" stroke-width=\""
          << fmt_fixed(0.75 + 4.25 * a, 3) << "\" stroke-opacity=\""
          << fmt_fixed(0.25 + 0.75 * a, 3) << "\"/>\n";
    }
  }
  for (Eigen::Index i = 0; i < net.p(); ++i) {
    out << "<circle cx=\"" << fmt_fixed(sx(layout.coords[i][0]), 3)
        << "\" cy=\"" << fmt_fixed(sy(layout.coords[i][1]), 3)
        << "\" r=\"16\" fill=\"#f0f0f0\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt_fixed(sx(layout.coords[i][0]), 3) << "\" y=\""
        << fmt_fixed(sy(layout.coords[i][1]) + 4.0, 3)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << xml_escape(doc.labels[static_cast<std::size_t>(i)]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pcornet
