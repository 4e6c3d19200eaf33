#pragma once

#include <string>
#include <vector>

#include "pcornet/linalg.hpp"

namespace pcornet {

enum class Scale { Continuous, Ordinal };

/// N x P observation table. NaN marks a missing cell. Ordinal columns carry
/// their admissible integer codes in `ordinal_levels`.
struct DataMatrix {
  Matrix values;  // NaN = missing
  std::vector<std::string> labels;
  std::vector<Scale> scales;
  std::vector<std::vector<int>> ordinal_levels;  // empty for continuous columns

  Eigen::Index n_rows() const { return values.rows(); }
  Eigen::Index n_cols() const { return values.cols(); }

  std::vector<double> column(Eigen::Index j) const;

  /// Column restricted to non-missing entries.
  std::vector<double> column_complete(Eigen::Index j) const;

  /// Row-subset copy (indices may repeat; order is preserved).
  DataMatrix take_rows(const std::vector<int>& rows) const;

  /// Checks the structural invariants; throws Error(InvalidArgument) on
  /// violation: N >= 2, P >= 2, unique labels, ordinal columns containing
  /// only their declared codes or missing.
  void validate() const;
};

/// Wraps a value grid with default labels V1..VP and continuous scales.
DataMatrix make_data(Matrix values);
DataMatrix make_data(Matrix values, std::vector<std::string> labels);

/// A column counts as ordinal when its non-missing values are all integers
/// with at most `max_levels` distinct values.
bool looks_ordinal(const std::vector<double>& column, int max_levels);

/// Applies looks_ordinal to every column and fills scales/ordinal_levels.
void detect_scales(DataMatrix& data, int max_levels = 7);

}  // namespace pcornet
