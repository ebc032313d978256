#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "socbench/frame.hpp"

namespace soc {

/// Per-feature mean and population std, fitted on training rows only.
struct StandardizationParams {
    std::vector<std::string> feature_names;
    std::vector<double> means;
    std::vector<double> stds;
};

struct FeatureSelectionReport {
    std::vector<std::string> selected;
    std::vector<std::pair<std::string, std::string>> dropped;  // (name, reason)
    std::vector<std::pair<std::string, double>> correlations;  // vs target
    std::vector<std::pair<std::string, double>> variances;
};

struct SplitSpec {
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t shuffle_seed = 0;
};

struct SplitResult {
    Frame train;
    Frame val;
    Frame test;
};

/// Keep the target plus every feature with variance > variance_threshold and
/// |Pearson r with target| >= corr_threshold.
std::pair<Frame, FeatureSelectionReport>
select_features(const Frame& frame, double corr_threshold, double variance_threshold);

/// Drop any row where some feature's z-score (full-frame mean/std) exceeds
/// z_threshold in absolute value. Zero-std columns contribute z = 0.
std::pair<Frame, std::size_t> remove_outliers(const Frame& frame, double z_threshold);

StandardizationParams fit_standardizer(const Frame& train);

/// (x - mean) / std per feature cell; the target column is left unmodified.
Frame apply_standardizer(const Frame& frame, const StandardizationParams& params);

/// Seeded shuffle then contiguous partition; sizes floor(fraction * n) with
/// the remainder assigned to train.
SplitResult split(const Frame& frame, const SplitSpec& spec);

// Column statistics shared across the pipeline (population conventions).
double column_mean(const std::vector<double>& v);
double column_variance(const std::vector<double>& v);  // divide by n
double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace soc
