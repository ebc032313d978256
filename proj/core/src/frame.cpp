#include "socbench/frame.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace soc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::HeaderMissing: return "HeaderMissing";
        case ErrorCode::TargetColumnMissing: return "TargetColumnMissing";
        case ErrorCode::EmptyAfterCleaning: return "EmptyAfterCleaning";
        case ErrorCode::InvalidSize: return "InvalidSize";
        case ErrorCode::NoFeaturesSelected: return "NoFeaturesSelected";
        case ErrorCode::ZeroVarianceFeature: return "ZeroVarianceFeature";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::InvalidFractions: return "InvalidFractions";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroTargetVariance: return "ZeroTargetVariance";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::NotStandardized: return "NotStandardized";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::HeadDivisibility: return "HeadDivisibility";
        case ErrorCode::OddDModel: return "OddDModel";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::SubsetTooLarge: return "SubsetTooLarge";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NotFitted: return "NotFitted";
    }
    return "Unknown";
}

Frame::Frame(std::vector<std::string> column_names,
             std::vector<std::vector<double>> columns,
             std::string target_name)
    : column_names_(std::move(column_names)),
      columns_(std::move(columns)),
      target_name_(std::move(target_name)) {
    if (column_names_.size() != columns_.size())
        throw Error(ErrorCode::SchemaMismatch, "column name / column count mismatch");
    n_rows_ = columns_.empty() ? 0 : columns_.front().size();
    for (const auto& col : columns_) {
        if (col.size() != n_rows_)
            throw Error(ErrorCode::SchemaMismatch, "ragged columns");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : column_names_) {
        if (!seen.insert(name).second)
            throw Error(ErrorCode::SchemaMismatch, "duplicate column name " + name);
    }
    if (!target_name_.empty() && !seen.contains(target_name_))
        throw Error(ErrorCode::TargetColumnMissing, target_name_);
}

bool Frame::has_column(const std::string& name) const {
    return std::find(column_names_.begin(), column_names_.end(), name) != column_names_.end();
}

std::size_t Frame::column_index(const std::string& name) const {
    auto it = std::find(column_names_.begin(), column_names_.end(), name);
    if (it == column_names_.end())
        throw Error(ErrorCode::SchemaMismatch, "no column named " + name);
    return static_cast<std::size_t>(it - column_names_.begin());
}

const std::vector<double>& Frame::column(const std::string& name) const {
    return columns_[column_index(name)];
}

std::vector<std::string> Frame::feature_names() const {
    std::vector<std::string> out;
    for (const auto& name : column_names_)
        if (name != target_name_) out.push_back(name);
    return out;
}

const std::vector<double>& Frame::target() const {
    return column(target_name_);
}

std::vector<double> Frame::feature_matrix() const {
    const auto features = feature_names();
    std::vector<const std::vector<double>*> cols;
    cols.reserve(features.size());
    for (const auto& name : features) cols.push_back(&column(name));
    std::vector<double> out(n_rows_ * features.size());
    for (std::size_t i = 0; i < n_rows_; ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out[i * cols.size() + j] = (*cols[j])[i];
    return out;
}

Frame Frame::select_rows(const std::vector<std::size_t>& idx) const {
    std::vector<std::vector<double>> cols(columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        cols[c].reserve(idx.size());
        for (std::size_t i : idx) cols[c].push_back(columns_[c][i]);
    }
    return Frame(column_names_, std::move(cols), target_name_);
}

Frame Frame::select_columns(const std::vector<std::string>& names) const {
    std::vector<std::vector<double>> cols;
    cols.reserve(names.size());
    for (const auto& name : names) cols.push_back(column(name));
    return Frame(names, std::move(cols), target_name_);
}

namespace {

bool parse_double(std::string field, bool decimal_comma, double& out) {
    // trim whitespace
    auto is_space = [](unsigned char c) { return std::isspace(c); };
    field.erase(field.begin(), std::find_if_not(field.begin(), field.end(), is_space));
    field.erase(std::find_if_not(field.rbegin(), field.rend(), is_space).base(), field.end());
    if (field.empty()) return false;
    if (decimal_comma) std::replace(field.begin(), field.end(), ',', '.');
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) return false;
    return std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

}  // namespace

CsvLoadResult load_csv(const std::string& path, char delimiter,
                       const std::string& target_name, bool decimal_comma) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path);

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::HeaderMissing, path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_line(line, delimiter);
    if (header.empty()) throw Error(ErrorCode::HeaderMissing, path);
    for (auto& h : header) {
        // strip surrounding quotes and whitespace
        auto is_space = [](unsigned char c) { return std::isspace(c); };
        h.erase(h.begin(), std::find_if_not(h.begin(), h.end(), is_space));
        h.erase(std::find_if_not(h.rbegin(), h.rend(), is_space).base(), h.end());
        if (h.size() >= 2 && h.front() == '"' && h.back() == '"')
            h = h.substr(1, h.size() - 2);
    }
    // a header of pure numbers is no header at all
    {
        bool all_numeric = true;
        double tmp;
        for (const auto& h : header)
            if (!parse_double(h, decimal_comma, tmp)) { all_numeric = false; break; }
        if (all_numeric) throw Error(ErrorCode::HeaderMissing, path + " (first row is numeric)");
    }
    if (std::find(header.begin(), header.end(), target_name) == header.end())
        throw Error(ErrorCode::TargetColumnMissing, target_name + " not in header of " + path);

    const std::size_t width = header.size();
    std::vector<std::vector<std::string>> raw_rows;
    std::size_t dropped_rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, delimiter);
        if (fields.size() != width) {
            ++dropped_rows;
            continue;
        }
        raw_rows.push_back(std::move(fields));
    }

    // a column is numeric if every non-empty cell parses in at least one row
    std::vector<bool> numeric(width, false);
    for (std::size_t c = 0; c < width; ++c) {
        bool any_value = false, all_parse = true;
        for (const auto& row : raw_rows) {
            double v;
            if (row[c].empty()) continue;
            any_value = true;
            if (!parse_double(row[c], decimal_comma, v)) { all_parse = false; break; }
        }
        numeric[c] = any_value && all_parse;
    }
    // keep the target even if some of its cells fail to parse; those rows drop
    numeric[static_cast<std::size_t>(
        std::find(header.begin(), header.end(), target_name) - header.begin())] = true;

    std::vector<std::string> kept_names, dropped_columns;
    std::vector<std::size_t> kept_idx;
    for (std::size_t c = 0; c < width; ++c) {
        if (numeric[c]) {
            kept_names.push_back(header[c]);
            kept_idx.push_back(c);
        } else {
            dropped_columns.push_back(header[c]);
        }
    }

    std::vector<std::vector<double>> columns(kept_idx.size());
    for (const auto& row : raw_rows) {
        std::vector<double> values(kept_idx.size());
        bool ok = true;
        for (std::size_t j = 0; j < kept_idx.size(); ++j) {
            if (!parse_double(row[kept_idx[j]], decimal_comma, values[j])) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++dropped_rows;
            continue;
        }
        for (std::size_t j = 0; j < kept_idx.size(); ++j) columns[j].push_back(values[j]);
    }

    if (columns.empty() || columns.front().empty())
        throw Error(ErrorCode::EmptyAfterCleaning, path);

    CsvLoadResult result;
    result.frame = Frame(std::move(kept_names), std::move(columns), target_name);
    result.dropped_rows = dropped_rows;
    result.dropped_columns = std::move(dropped_columns);
    return result;
}

void write_csv(const Frame& frame, const std::string& path, char delimiter) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot open " + path + " for writing");
    const auto& names = frame.column_names();
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c) out << delimiter;
        out << names[c];
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < frame.n_rows(); ++i) {
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (c) out << delimiter;
            std::snprintf(buf, sizeof(buf), "%.17g", frame.column(c)[i]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace soc
