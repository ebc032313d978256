#include "socbench/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace soc {

double column_mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double column_variance(const std::vector<double>& v) {
    const double mean = column_mean(v);
    double sum = 0.0;
    for (double x : v) sum += (x - mean) * (x - mean);
    return sum / static_cast<double>(v.size());
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::LengthMismatch, "pearson_correlation");
    const double ma = column_mean(a), mb = column_mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

std::pair<Frame, FeatureSelectionReport>
select_features(const Frame& frame, double corr_threshold, double variance_threshold) {
    if (frame.n_rows() < 2)
        throw Error(ErrorCode::TooFewSamples, "select_features needs >= 2 rows");
    const auto& target = frame.target();

    FeatureSelectionReport report;
    std::vector<std::string> kept;
    for (const auto& name : frame.feature_names()) {
        const auto& col = frame.column(name);
        const double var = column_variance(col);
        const double corr = pearson_correlation(col, target);
        report.variances.emplace_back(name, var);
        report.correlations.emplace_back(name, corr);
        if (var <= variance_threshold) {
            report.dropped.emplace_back(name, var == 0.0 ? "zero variance" : "low variance");
        } else if (std::abs(corr) < corr_threshold) {
            report.dropped.emplace_back(name, "low correlation with target");
        } else {
            report.selected.push_back(name);
            kept.push_back(name);
        }
    }
    if (kept.empty())
        throw Error(ErrorCode::NoFeaturesSelected, "thresholds rejected every feature");
    kept.push_back(frame.target_name());
    return {frame.select_columns(kept), std::move(report)};
}

std::pair<Frame, std::size_t> remove_outliers(const Frame& frame, double z_threshold) {
    if (frame.n_rows() < 2)
        throw Error(ErrorCode::TooFewSamples, "remove_outliers needs >= 2 rows");
    if (z_threshold <= 0.0)
        throw Error(ErrorCode::InvalidConfig, "z_threshold must be positive");

    const auto features = frame.feature_names();
    std::vector<double> means, stds;
    for (const auto& name : features) {
        const auto& col = frame.column(name);
        means.push_back(column_mean(col));
        stds.push_back(std::sqrt(column_variance(col)));
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < frame.n_rows(); ++i) {
        bool outlier = false;
        for (std::size_t f = 0; f < features.size(); ++f) {
            if (stds[f] == 0.0) continue;  // z = 0 by convention
            const double z = (frame.column(features[f])[i] - means[f]) / stds[f];
            if (std::abs(z) > z_threshold) {
                outlier = true;
                break;
            }
        }
        if (!outlier) keep.push_back(i);
    }
    if (keep.empty())
        throw Error(ErrorCode::EmptyAfterCleaning, "every row flagged as outlier");
    const std::size_t removed = frame.n_rows() - keep.size();
    return {frame.select_rows(keep), removed};
}

StandardizationParams fit_standardizer(const Frame& train) {
    if (train.n_rows() == 0)
        throw Error(ErrorCode::EmptyInput, "fit_standardizer on empty frame");
    StandardizationParams params;
    for (const auto& name : train.feature_names()) {
        const auto& col = train.column(name);
        const double mean = column_mean(col);
        const double var = column_variance(col);
        if (var == 0.0)
            throw Error(ErrorCode::ZeroVarianceFeature, name);
        params.feature_names.push_back(name);
        params.means.push_back(mean);
        params.stds.push_back(std::sqrt(var));
    }
    return params;
}

Frame apply_standardizer(const Frame& frame, const StandardizationParams& params) {
    if (params.feature_names != frame.feature_names())
        throw Error(ErrorCode::SchemaMismatch,
                    "standardizer features do not match frame features");
    Frame out = frame;
    for (std::size_t f = 0; f < params.feature_names.size(); ++f) {
        auto& col = out.column_mut(out.column_index(params.feature_names[f]));
        const double mean = params.means[f], std = params.stds[f];
        for (double& x : col) x = (x - mean) / std;
    }
    return out;
}

SplitResult split(const Frame& frame, const SplitSpec& spec) {
    if (frame.n_rows() == 0) throw Error(ErrorCode::EmptyInput, "split on empty frame");
    const double sum = spec.train_fraction + spec.val_fraction + spec.test_fraction;
    if (spec.train_fraction <= 0 || spec.val_fraction <= 0 || spec.test_fraction <= 0 ||
        std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidFractions, "fractions must be positive and sum to 1");

    const std::size_t n = frame.n_rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(spec.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_val = static_cast<std::size_t>(spec.val_fraction * static_cast<double>(n));
    const auto n_test = static_cast<std::size_t>(spec.test_fraction * static_cast<double>(n));
    const std::size_t n_train = n - n_val - n_test;  // floor sizes, remainder to train

    std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
    std::vector<std::size_t> val_idx(order.begin() + n_train, order.begin() + n_train + n_val);
    std::vector<std::size_t> test_idx(order.begin() + n_train + n_val, order.end());

    return {frame.select_rows(train_idx), frame.select_rows(val_idx),
            frame.select_rows(test_idx)};
}

}  // namespace soc
