#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "socbench/errors.hpp"

namespace soc {

/// Named-column numeric table; the universal currency of the pipeline.
/// All columns have identical length and hold finite 64-bit floats.
class Frame {
  public:
    Frame() = default;
    Frame(std::vector<std::string> column_names,
          std::vector<std::vector<double>> columns,
          std::string target_name);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return column_names_.size(); }

    const std::vector<std::string>& column_names() const { return column_names_; }
    const std::string& target_name() const { return target_name_; }

    bool has_column(const std::string& name) const;
    std::size_t column_index(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<double>& column(std::size_t idx) const { return columns_[idx]; }
    std::vector<double>& column_mut(std::size_t idx) { return columns_[idx]; }

    /// All column names except the target, in frame order.
    std::vector<std::string> feature_names() const;

    const std::vector<double>& target() const;

    /// Row-major feature matrix (target excluded), rows x feature count.
    std::vector<double> feature_matrix() const;

    /// Frame restricted to the given row indices, in the given order.
    Frame select_rows(const std::vector<std::size_t>& idx) const;

    /// Frame restricted to the given columns (must include the target).
    Frame select_columns(const std::vector<std::string>& names) const;

    bool operator==(const Frame& other) const = default;

  private:
    std::vector<std::string> column_names_;
    std::vector<std::vector<double>> columns_;
    std::string target_name_;
    std::size_t n_rows_ = 0;
};

struct CsvLoadResult {
    Frame frame;
    std::size_t dropped_rows = 0;                  // unparseable / missing-value rows
    std::vector<std::string> dropped_columns;      // non-numeric columns
};

/// Parse a delimited text file into a Frame. Non-numeric columns are
/// dropped (recorded), rows with unparseable values in retained columns are
/// dropped and counted. `decimal_comma` converts "3,14"-style decimals.
CsvLoadResult load_csv(const std::string& path, char delimiter,
                       const std::string& target_name, bool decimal_comma = false);

/// Write a frame as CSV with round-trippable float formatting.
void write_csv(const Frame& frame, const std::string& path, char delimiter = ',');

}  // namespace soc
