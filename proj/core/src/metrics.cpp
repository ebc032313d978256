#include "socbench/metrics.hpp"

#include <cmath>

namespace soc {

namespace {

void check_lengths(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw Error(ErrorCode::LengthMismatch, "y_true and y_pred differ in length");
    if (y_true.size() < 2)
        throw Error(ErrorCode::TooFewSamples, "need at least 2 samples");
}

}  // namespace

PartialMetrics score_partial(const std::vector<double>& y_true,
                             const std::vector<double>& y_pred) {
    check_lengths(y_true, y_pred);
    const std::size_t n = y_true.size();
    double sse = 0.0, sae = 0.0;  // fixed left-to-right accumulation
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y_true[i] - y_pred[i];
        sse += r * r;
        sae += std::abs(r);
    }
    PartialMetrics out;
    out.n = n;
    out.mse = sse / static_cast<double>(n);
    out.rmse = std::sqrt(out.mse);
    out.mae = sae / static_cast<double>(n);
    return out;
}

MetricsReport score(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    const PartialMetrics base = score_partial(y_true, y_pred);
    const std::size_t n = y_true.size();

    double mean = 0.0;
    for (double y : y_true) mean += y;
    mean /= static_cast<double>(n);

    double sst = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y_true[i] - mean;
        sst += d * d;
        const double r = y_true[i] - y_pred[i];
        sse += r * r;
    }
    if (sst == 0.0)
        throw Error(ErrorCode::ZeroTargetVariance, "R^2 undefined for constant target");

    MetricsReport out;
    out.n = n;
    out.mse = base.mse;
    out.rmse = base.rmse;
    out.mae = base.mae;
    out.r2 = 1.0 - sse / sst;
    return out;
}

}  // namespace soc
