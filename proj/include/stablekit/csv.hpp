#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stablekit {

enum class DataSource { Embedded, File };

struct Dataset {
  std::string name;
  Eigen::MatrixXd values;  ///< n x d
  DataSource source = DataSource::File;

  Eigen::Index size() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
  /// First column as a vector; throws DimensionMismatch unless d == 1.
  std::vector<double> univariate() const;
};

/// Comma-separated numbers, one observation per line, optional single header
/// row. expected_columns = 0 accepts any consistent width.
/// Throws ParseError (1-based row/column) or DimensionMismatch.
Dataset read_csv(const std::string& path, std::size_t expected_columns = 0);

/// Embedded dataset by name (guinea_pigs, galaxy, abbey_prices, abbey_returns).
Dataset embedded_dataset(const std::string& name);

}  // namespace stablekit
