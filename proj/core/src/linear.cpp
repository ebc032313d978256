#include "socbench/linear.hpp"

#include <cmath>

namespace soc {

namespace {

// Cholesky solve of A x = b for symmetric positive definite A (p x p).
// Returns false when a non-positive pivot shows up.
bool cholesky_solve(std::vector<double> A, std::vector<double> b, std::size_t p,
                    std::vector<double>& x) {
    for (std::size_t j = 0; j < p; ++j) {
        double d = A[j * p + j];
        for (std::size_t k = 0; k < j; ++k) d -= A[j * p + k] * A[j * p + k];
        if (d <= 0.0 || !std::isfinite(d)) return false;
        const double l = std::sqrt(d);
        A[j * p + j] = l;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = A[i * p + j];
            for (std::size_t k = 0; k < j; ++k) s -= A[i * p + k] * A[j * p + k];
            A[i * p + j] = s / l;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < p; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= A[i * p + k] * b[k];
        b[i] = s / A[i * p + i];
    }
    x.assign(p, 0.0);
    for (std::size_t ii = p; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= A[k * p + ii] * x[k];
        x[ii] = s / A[ii * p + ii];
    }
    return true;
}

struct Centered {
    std::vector<double> x_means;
    double y_mean = 0.0;
    Matrix Xc;
    Vector yc;
};

Centered center(const Matrix& X, const Vector& y) {
    Centered c;
    c.Xc = X;
    c.yc = y;
    c.x_means.assign(X.cols, 0.0);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) c.x_means[j] += X(i, j);
    for (double& m : c.x_means) m /= static_cast<double>(X.rows);
    for (double v : y) c.y_mean += v;
    c.y_mean /= static_cast<double>(y.size());
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) c.Xc(i, j) -= c.x_means[j];
    for (double& v : c.yc) v -= c.y_mean;
    return c;
}

}  // namespace

OlsFit ols_fit(const Matrix& X, const Vector& y) {
    if (X.rows != y.size())
        throw Error(ErrorCode::LengthMismatch, "X rows != y length");
    if (X.rows <= X.cols)
        throw Error(ErrorCode::TooFewSamples, "need n > p for OLS");

    const std::size_t p = X.cols;
    const Centered c = center(X, y);

    std::vector<double> gram(p * p, 0.0), rhs(p, 0.0);
    for (std::size_t i = 0; i < X.rows; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double xj = c.Xc(i, j);
            rhs[j] += xj * c.yc[i];
            for (std::size_t k = j; k < p; ++k) gram[j * p + k] += xj * c.Xc(i, k);
        }
    }
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < j; ++k) gram[j * p + k] = gram[k * p + j];

    OlsFit fit;
    std::vector<double> beta;
    if (!cholesky_solve(gram, rhs, p, beta)) {
        double trace = 0.0;
        for (std::size_t j = 0; j < p; ++j) trace += gram[j * p + j];
        const double jitter = 1e-10 * trace / static_cast<double>(p);
        for (std::size_t j = 0; j < p; ++j) gram[j * p + j] += jitter;
        fit.rank_deficient = true;
        if (!cholesky_solve(gram, rhs, p, beta))
            throw Error(ErrorCode::TooFewSamples, "Gram matrix unsolvable even with jitter");
    }

    fit.coefficients = beta;
    fit.intercept = c.y_mean;
    for (std::size_t j = 0; j < p; ++j) fit.intercept -= beta[j] * c.x_means[j];
    return fit;
}

double lasso_lambda_max(const Matrix& X, const Vector& y) {
    const Centered c = center(X, y);
    double best = 0.0;
    for (std::size_t j = 0; j < X.cols; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < X.rows; ++i) dot += c.Xc(i, j) * c.yc[i];
        best = std::max(best, std::abs(dot) / static_cast<double>(X.rows));
    }
    return best;
}

LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda,
                   double tol, std::size_t max_iter) {
    if (X.rows != y.size())
        throw Error(ErrorCode::LengthMismatch, "X rows != y length");
    if (lambda < 0.0)
        throw Error(ErrorCode::InvalidConfig, "lambda must be >= 0");

    const std::size_t n = X.rows, p = X.cols;
    // enforced precondition: standardized feature columns
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += (X(i, j) - mean) * (X(i, j) - mean);
        var /= static_cast<double>(n);
        if (std::abs(mean) > 1e-6 || std::abs(std::sqrt(var) - 1.0) > 1e-6)
            throw Error(ErrorCode::NotStandardized,
                        "feature column " + std::to_string(j) + " is not standardized");
    }

    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);

    LassoFit fit;
    fit.lambda = lambda;
    fit.coefficients.assign(p, 0.0);

    // residual r = y - y_mean - X beta, maintained incrementally
    Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - y_mean;

    const double inv_n = 1.0 / static_cast<double>(n);
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {  // fixed ascending sweep order
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i) rho += X(i, j) * r[i];
            rho = rho * inv_n + fit.coefficients[j];  // columns have unit norm/n
            const double shrunk =
                (rho > lambda) ? rho - lambda : (rho < -lambda ? rho + lambda : 0.0);
            const double delta = shrunk - fit.coefficients[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) r[i] -= delta * X(i, j);
                fit.coefficients[j] = shrunk;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        if (max_change < tol) {
            fit.converged = true;
            ++iter;
            break;
        }
    }
    fit.iterations = iter;

    // beta0 = mean(y - X beta), computed fresh so beta = 0 gives exactly mean(y)
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < p; ++j) dot += X(i, j) * fit.coefficients[j];
        acc += y[i] - dot;
    }
    fit.intercept = acc / static_cast<double>(n);
    return fit;
}

Vector linear_predict(double intercept, const Vector& coefficients, const Matrix& X) {
    if (X.cols != coefficients.size())
        throw Error(ErrorCode::DimensionMismatch, "coefficient count != feature count");
    Vector out(X.rows, intercept);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j) out[i] += X(i, j) * coefficients[j];
    return out;
}

void LinearModel::fit(const Matrix& X, const Vector& y) {
    fit_ = ols_fit(X, y);
    fitted_ = true;
}

Vector LinearModel::predict(const Matrix& X) const {
    require_fitted();
    return linear_predict(fit_.intercept, fit_.coefficients, X);
}

nlohmann::json LinearModel::to_json() const {
    return {{"type", "linear"},
            {"intercept", fit_.intercept},
            {"coefficients", fit_.coefficients},
            {"rank_deficient", fit_.rank_deficient}};
}

LinearModel LinearModel::from_json(const nlohmann::json& doc) {
    LinearModel m;
    m.fit_.intercept = doc.at("intercept").get<double>();
    m.fit_.coefficients = doc.at("coefficients").get<Vector>();
    m.fit_.rank_deficient = doc.at("rank_deficient").get<bool>();
    m.fitted_ = true;
    return m;
}

void LassoModel::fit(const Matrix& X, const Vector& y) {
    const std::size_t n = X.rows, p = X.cols;
    if (n == 0 || p == 0) throw Error(ErrorCode::EmptyInput, "lasso fit on empty data");

    // internal standardization so lasso_fit's precondition holds for any
    // caller (CV folds included); constant columns stay zeroed out
    std::vector<double> means(p, 0.0), stds(p, 1.0);
    Matrix Xs = X;
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += (X(i, j) - mean) * (X(i, j) - mean);
        var /= static_cast<double>(n);
        means[j] = mean;
        stds[j] = var > 0.0 ? std::sqrt(var) : 1.0;
        for (std::size_t i = 0; i < n; ++i) Xs(i, j) = (X(i, j) - mean) / stds[j];
    }

    const LassoFit inner = lasso_fit(Xs, y, lambda_, tol_, max_iter_);
    converged_ = inner.converged;

    // map back to the original feature scale
    coef_.assign(p, 0.0);
    intercept_ = inner.intercept;
    for (std::size_t j = 0; j < p; ++j) {
        coef_[j] = inner.coefficients[j] / stds[j];
        intercept_ -= coef_[j] * means[j];
    }
    fitted_ = true;
}

Vector LassoModel::predict(const Matrix& X) const {
    require_fitted();
    return linear_predict(intercept_, coef_, X);
}

nlohmann::json LassoModel::to_json() const {
    return {{"type", "lasso"},
            {"intercept", intercept_},
            {"coefficients", coef_},
            {"lambda", lambda_},
            {"tol", tol_},
            {"max_iterations", max_iter_},
            {"converged", converged_}};
}

LassoModel LassoModel::from_json(const nlohmann::json& doc) {
    LassoModel m(doc.at("lambda").get<double>(), doc.at("tol").get<double>(),
                 doc.at("max_iterations").get<std::size_t>());
    m.intercept_ = doc.at("intercept").get<double>();
    m.coef_ = doc.at("coefficients").get<Vector>();
    m.converged_ = doc.at("converged").get<bool>();
    m.fitted_ = true;
    return m;
}

}  // namespace soc
