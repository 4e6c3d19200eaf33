#include "pcornet/data.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "pcornet/errors.hpp"

namespace pcornet {

std::vector<double> DataMatrix::column(Eigen::Index j) const {
  std::vector<double> out(static_cast<std::size_t>(n_rows()));
  for (Eigen::Index i = 0; i < n_rows(); ++i)
    out[static_cast<std::size_t>(i)] = values(i, j);
  return out;
}

std::vector<double> DataMatrix::column_complete(Eigen::Index j) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_rows()));
  for (Eigen::Index i = 0; i < n_rows(); ++i) {
    if (!std::isnan(values(i, j))) out.push_back(values(i, j));
  }
  return out;
}

DataMatrix DataMatrix::take_rows(const std::vector<int>& rows) const {
  DataMatrix out;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), n_cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(rows[r]);
  }
  out.labels = labels;
  out.scales = scales;
  out.ordinal_levels = ordinal_levels;
  return out;
}

void DataMatrix::validate() const {
  if (n_rows() < 2 || n_cols() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "data must have at least 2 rows and 2 columns");
  }
  const auto p = static_cast<std::size_t>(n_cols());
  if (labels.size() != p || scales.size() != p) {
    throw Error(ErrorCode::InvalidArgument,
                "labels/scales length must match the column count");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate column label: " + l);
    }
  }
  for (Eigen::Index j = 0; j < n_cols(); ++j) {
    if (scales[static_cast<std::size_t>(j)] != Scale::Ordinal) continue;
    const auto& codes = ordinal_levels.size() == p
                            ? ordinal_levels[static_cast<std::size_t>(j)]
                            : std::vector<int>{};
    if (codes.empty()) continue;
    for (Eigen::Index i = 0; i < n_rows(); ++i) {
      const double v = values(i, j);
      if (std::isnan(v)) continue;
      const double r = std::round(v);
      if (std::fabs(v - r) > 1e-9 ||
          !std::binary_search(codes.begin(), codes.end(),
                              static_cast<int>(r))) {
        throw Error(ErrorCode::InvalidArgument,
                    "ordinal column " + labels[static_cast<std::size_t>(j)] +
                        " contains a value outside its declared codes");
      }
    }
  }
}

DataMatrix make_data(Matrix values) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    labels.push_back("V" + std::to_string(j + 1));
  }
  return make_data(std::move(values), std::move(labels));
}

DataMatrix make_data(Matrix values, std::vector<std::string> labels) {
  DataMatrix d;
  d.values = std::move(values);
  d.labels = std::move(labels);
  d.scales.assign(static_cast<std::size_t>(d.n_cols()), Scale::Continuous);
  d.ordinal_levels.assign(static_cast<std::size_t>(d.n_cols()), {});
  return d;
}

bool looks_ordinal(const std::vector<double>& column, int max_levels) {
  std::set<double> uniques;
  for (double v : column) {
    if (std::isnan(v)) continue;
    if (std::fabs(v - std::round(v)) > 1e-9) return false;
    uniques.insert(std::round(v));
    if (static_cast<int>(uniques.size()) > max_levels) return false;
  }
  return !uniques.empty();
}

void detect_scales(DataMatrix& data, int max_levels) {
  const auto p = static_cast<std::size_t>(data.n_cols());
  data.scales.assign(p, Scale::Continuous);
  data.ordinal_levels.assign(p, {});
  for (Eigen::Index j = 0; j < data.n_cols(); ++j) {
    const auto col = data.column(j);
    if (!looks_ordinal(col, max_levels)) continue;
    data.scales[static_cast<std::size_t>(j)] = Scale::Ordinal;
    std::set<int> codes;
    for (double v : col) {
      if (!std::isnan(v)) codes.insert(static_cast<int>(std::round(v)));
    }
    data.ordinal_levels[static_cast<std::size_t>(j)]
        .assign(codes.begin(), codes.end());
  }
}

}  // namespace pcornet
