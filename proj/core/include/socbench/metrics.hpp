#pragma once

#include <cstddef>
#include <vector>

#include "socbench/errors.hpp"

namespace soc {

struct MetricsReport {
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
};

/// Scores without R^2, for targets with zero variance.
struct PartialMetrics {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
};

/// MSE, RMSE, R^2 (1 - SSE/SST about mean(y_true)), MAE. Fixed left-to-right
/// 64-bit accumulation. Throws ZeroTargetVariance when R^2 is undefined.
MetricsReport score(const std::vector<double>& y_true, const std::vector<double>& y_pred);

/// MSE/RMSE/MAE only; legal for constant targets.
PartialMetrics score_partial(const std::vector<double>& y_true,
                             const std::vector<double>& y_pred);

}  // namespace soc
