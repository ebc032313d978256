#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "socbench/matrix.hpp"

namespace soc {

/// Common fit/predict contract implemented by every estimator.
class Model {
  public:
    virtual ~Model() = default;

    virtual void fit(const Matrix& X, const Vector& y) = 0;
    virtual Vector predict(const Matrix& X) const = 0;
    virtual std::string name() const = 0;

    /// Serialized parameters + config, enough to reload with load_model().
    virtual nlohmann::json to_json() const = 0;

    bool fitted() const { return fitted_; }

  protected:
    void require_fitted() const {
        if (!fitted_) throw Error(ErrorCode::NotFitted, "predict called before fit");
    }
    bool fitted_ = false;
};

/// Reconstruct any serialized model from its to_json() document.
std::unique_ptr<Model> load_model(const nlohmann::json& doc);

}  // namespace soc
