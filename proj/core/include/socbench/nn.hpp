#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "socbench/model.hpp"
#include "socbench/tensor.hpp"

namespace soc {

/// Parameter tensor together with its gradient buffer.
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;
};

enum class Activation { Relu, Identity };

Tensor relu(const Tensor& z);
/// Gradient convention: passes where z > 0, zero where z <= 0.
Tensor relu_backward(const Tensor& z, const Tensor& grad_out);

/// Mean squared error over all elements; grad = 2 (pred - target) / n.
std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target);

class Layer {
  public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, bool training) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Param*> params() { return {}; }
    virtual std::string kind() const = 0;
};

/// y = activation(x W + b) over the last dimension, leading dims folded.
class DenseLayer : public Layer {
  public:
    DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation act, std::mt19937_64& rng);

    Tensor forward(const Tensor& x, bool training) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&W_, &b_}; }
    std::string kind() const override { return "dense"; }

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    Activation activation() const { return act_; }
    /// Pre-activation values from the last forward (gradient-check support).
    const Tensor& preact() const { return preact_; }

  private:
    std::size_t in_dim_, out_dim_;
    Activation act_;
    Param W_;  // (in, out)
    Param b_;  // (out)
    Tensor input_, preact_;
};

/// Seeded Glorot-uniform draw, limit sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);

class Sequential {
  public:
    Sequential() = default;
    Sequential(Sequential&&) = default;
    Sequential& operator=(Sequential&&) = default;

    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

    Tensor forward(const Tensor& x, bool training);
    /// Propagates grad through every layer in reverse; fills param grads.
    Tensor backward(const Tensor& grad_out);

    std::vector<Param*> params();
    std::vector<Layer*> layers();

    std::vector<Tensor> snapshot() const;
    void restore(const std::vector<Tensor>& weights);

    /// Flattened parameter values in layer order (serialization).
    std::vector<double> flat_params() const;
    void set_flat_params(const std::vector<double>& values);

  private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
  public:
    explicit Adam(AdamConfig config = {}) : config_(config) {}

    /// Standard bias-corrected update; timestep increments once per call.
    void step(const std::vector<Param*>& params);

    std::size_t timestep() const { return t_; }
    const AdamConfig& config() const { return config_; }

  private:
    AdamConfig config_;
    std::vector<Tensor> m_, v_;
    std::size_t t_ = 0;
};

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 1000;
    std::size_t patience = 5;
    std::uint64_t shuffle_seed = 0;
    double min_delta = 0.0;
};

struct TrainingHistory {
    std::vector<double> train_loss;  // per epoch, mean over batches
    std::vector<double> val_loss;    // per epoch
    std::size_t best_epoch = 0;      // 0-based index into the loss vectors
    bool early_stopped = false;
};

void history_to_csv(const TrainingHistory& history, const std::string& path);

/// Mini-batch training with seeded per-epoch shuffling and patience-based
/// early stopping on validation loss; best-epoch weights are restored.
TrainingHistory train(Sequential& net, const Matrix& X_train, const Vector& y_train,
                      const Matrix& X_val, const Vector& y_val,
                      const TrainConfig& config, Adam& optimizer);

/// input_dim -> Dense(32, relu) -> Dense(8, relu) -> Dense(2, relu) ->
/// Dense(1, identity), Glorot-uniform seeded init.
Sequential build_mlp(std::size_t input_dim, std::mt19937_64& rng);

/// Feed-forward regressor under the common Model contract. Targets are
/// standardized internally during fit and predictions mapped back, so the
/// fixed learning rate works regardless of the target's scale.
class MlpModel : public Model {
  public:
    explicit MlpModel(TrainConfig train_config = {}, AdamConfig adam_config = {},
                      std::uint64_t seed = 42)
        : train_config_(train_config), adam_config_(adam_config), seed_(seed) {}

    void fit(const Matrix& X, const Vector& y) override;
    void fit_with_validation(const Matrix& X, const Vector& y,
                             const Matrix& X_val, const Vector& y_val);
    Vector predict(const Matrix& X) const override;
    std::string name() const override { return "Neural Network Regression"; }
    nlohmann::json to_json() const override;
    static MlpModel from_json(const nlohmann::json& doc);

    const TrainingHistory& history() const { return history_; }
    Sequential& network() { return net_; }

  private:
    TrainConfig train_config_;
    AdamConfig adam_config_;
    std::uint64_t seed_;
    std::size_t input_dim_ = 0;
    double y_mean_ = 0.0, y_std_ = 1.0;
    mutable Sequential net_;
    TrainingHistory history_;
};

/// Carve a deterministic tail fraction off (X, y) when no explicit
/// validation split is supplied to fit().
std::pair<std::pair<Matrix, Vector>, std::pair<Matrix, Vector>>
holdout_split(const Matrix& X, const Vector& y, double val_fraction, std::uint64_t seed);

}  // namespace soc
