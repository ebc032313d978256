#pragma once

#include <cstddef>

#include "socbench/model.hpp"

namespace soc {

struct OlsFit {
    double intercept = 0.0;
    Vector coefficients;
    bool rank_deficient = false;  // ridge jitter fallback engaged (warning)
};

/// Multivariate ordinary least squares via normal equations on centered
/// data. A singular Gram matrix gets a ridge jitter of 1e-10 * trace/p and
/// the fit is flagged rank-deficient instead of failing. Requires n > p.
OlsFit ols_fit(const Matrix& X, const Vector& y);

struct LassoFit {
    double intercept = 0.0;
    Vector coefficients;
    double lambda = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Cyclic coordinate descent with soft thresholding for the objective
/// (1/2n) * SSE + lambda * sum|beta_j|, intercept unpenalized. Feature
/// columns must be standardized (mean 0, std 1 within 1e-6; checked).
/// Stops when the max coefficient change drops below tol.
LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda,
                   double tol = 1e-6, std::size_t max_iter = 10000);

/// Smallest lambda at which every lasso coefficient is zero:
/// max_j |(1/n) x_j^T (y - mean(y))|.
double lasso_lambda_max(const Matrix& X, const Vector& y);

/// y_i = intercept + x_i . coefficients.
Vector linear_predict(double intercept, const Vector& coefficients, const Matrix& X);

class LinearModel : public Model {
  public:
    void fit(const Matrix& X, const Vector& y) override;
    Vector predict(const Matrix& X) const override;
    std::string name() const override { return "Linear Regression"; }
    nlohmann::json to_json() const override;
    static LinearModel from_json(const nlohmann::json& doc);

    double intercept() const { return fit_.intercept; }
    const Vector& coefficients() const { return fit_.coefficients; }
    bool rank_deficient() const { return fit_.rank_deficient; }

  private:
    OlsFit fit_;
};

/// Lasso under the Model contract. Standardizes its features internally
/// (refit on whatever rows fit() receives, e.g. per CV fold), runs
/// lasso_fit on the scaled columns, and maps coefficients back to the
/// original feature scale for prediction and serialization.
class LassoModel : public Model {
  public:
    LassoModel() = default;
    explicit LassoModel(double lambda, double tol = 1e-6, std::size_t max_iter = 10000)
        : lambda_(lambda), tol_(tol), max_iter_(max_iter) {}

    void fit(const Matrix& X, const Vector& y) override;
    Vector predict(const Matrix& X) const override;
    std::string name() const override { return "Lasso Regression"; }
    nlohmann::json to_json() const override;
    static LassoModel from_json(const nlohmann::json& doc);

    double intercept() const { return intercept_; }
    const Vector& coefficients() const { return coef_; }  // original scale
    double lambda() const { return lambda_; }
    bool converged() const { return converged_; }

  private:
    double lambda_ = 0.1;
    double tol_ = 1e-6;
    std::size_t max_iter_ = 10000;
    double intercept_ = 0.0;
    Vector coef_;
    bool converged_ = false;
};

}  // namespace soc
