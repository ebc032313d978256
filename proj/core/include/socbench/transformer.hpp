#pragma once

#include "socbench/nn.hpp"

namespace soc {

enum class TransformerVariant { AttentionOnly, PositionalOnly, Full };

std::string to_string(TransformerVariant variant);
TransformerVariant transformer_variant_from_string(const std::string& name);

struct TransformerConfig {
    TransformerVariant variant = TransformerVariant::Full;
    std::size_t d_model = 32;
    std::size_t n_heads = 4;          // must divide d_model
    double dropout_rate = 0.1;        // disabled at evaluation time
    std::size_t hidden_units = 64;
    std::uint64_t seed = 42;
    bool learned_positional = false;  // default fixed sinusoids
    std::size_t max_seq_len = 1;
};

/// PE(pos, 2i) = sin(pos / 10000^(2i/d_model)), PE(pos, 2i+1) = cos(same).
/// Shape (seq_len, d_model); d_model must be even.
Tensor positional_encoding(std::size_t seq_len, std::size_t d_model);

/// Scaled dot-product attention with learned Q/K/V/output projections,
/// heads concatenated. Exposes per-head attention weights and a full
/// backward pass for all inputs and parameters.
class MultiHeadAttention {
  public:
    MultiHeadAttention(std::size_t d_model, std::size_t n_heads, std::mt19937_64& rng);

    /// q, k, v: (batch, seq, d_model). Returns (batch, seq, d_model).
    Tensor forward(const Tensor& q, const Tensor& k, const Tensor& v);
    /// Gradients wrt q, k, v; fills parameter grads.
    std::tuple<Tensor, Tensor, Tensor> backward(const Tensor& grad_out);

    /// (batch, heads, seq, seq), rows sum to 1 after any forward.
    const Tensor& attention_weights() const { return attn_; }

    std::vector<Param*> params();

    std::size_t d_model() const { return d_model_; }
    std::size_t n_heads() const { return n_heads_; }

  private:
    std::size_t d_model_, n_heads_, d_head_;
    Param Wq_, Wk_, Wv_, Wo_;  // (d_model, d_model)
    Param bq_, bk_, bv_, bo_;  // (d_model)
    Tensor q_in_, k_in_, v_in_;
    Tensor Q_, K_, V_, attn_, context_;
};

/// Self-attention Layer adapter (q = k = v = x).
class SelfAttentionLayer : public Layer {
  public:
    SelfAttentionLayer(std::size_t d_model, std::size_t n_heads, std::mt19937_64& rng)
        : mha_(d_model, n_heads, rng) {}

    Tensor forward(const Tensor& x, bool training) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return mha_.params(); }
    std::string kind() const override { return "self_attention"; }

    MultiHeadAttention& mha() { return mha_; }

  private:
    MultiHeadAttention mha_;
};

/// Adds the positional table to (batch, seq, d_model) input.
class PositionalEncodingLayer : public Layer {
  public:
    PositionalEncodingLayer(std::size_t max_seq_len, std::size_t d_model,
                            bool learned, std::mt19937_64& rng);

    Tensor forward(const Tensor& x, bool training) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override;
    std::string kind() const override { return "positional_encoding"; }

    const Tensor& table() const { return learned_ ? embedding_.value : table_; }
    bool enabled = true;  // test hook: bypass the addition

  private:
    bool learned_;
    Tensor table_;     // fixed sinusoids
    Param embedding_;  // learned alternative
    std::size_t batch_ = 0;
};

/// Inverted dropout: zero with probability rate, scale survivors by
/// 1/(1-rate); identity at evaluation time.
class DropoutLayer : public Layer {
  public:
    DropoutLayer(double rate, std::uint64_t seed);

    Tensor forward(const Tensor& x, bool training) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "dropout"; }

  private:
    double rate_;
    std::mt19937_64 rng_;
    Tensor mask_;
    bool active_ = false;
};

/// Zero mean / unit variance over the last dimension (eps 1e-5), then
/// learned gain and bias.
class LayerNormLayer : public Layer {
  public:
    explicit LayerNormLayer(std::size_t dim, double eps = 1e-5);

    Tensor forward(const Tensor& x, bool training) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&gain_, &bias_}; }
    std::string kind() const override { return "layer_norm"; }

  private:
    std::size_t dim_;
    double eps_;
    Param gain_, bias_;
    Tensor input_, normed_;
    std::vector<double> inv_std_;
};

/// y = x + inner(x); gradient flows through both paths.
class ResidualBlock : public Layer {
  public:
    void add(std::unique_ptr<Layer> layer) { inner_.add(std::move(layer)); }

    Tensor forward(const Tensor& x, bool training) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return inner_.params(); }
    std::string kind() const override { return "residual"; }

    Sequential& inner() { return inner_; }

  private:
    Sequential inner_;
};

/// Wiring per variant (seq length 1 by the input reshape):
///   AttentionOnly:  proj -> residual{attention, dropout} -> norm
///                   -> Dense(hidden, relu) -> Dense(hidden/2, relu) -> Dense(1)
///   PositionalOnly: proj -> +PE -> dropout -> norm
///                   -> Dense(hidden, relu) -> Dense(hidden, relu) -> Dense(1)
///   Full:           proj -> +PE -> dropout -> residual{attention} -> norm
///                   -> Dense(hidden, relu) -> Dense(1)
Sequential build_transformer(std::size_t input_dim, const TransformerConfig& config);

class TransformerModel : public Model {
  public:
    explicit TransformerModel(TransformerConfig config = {}, TrainConfig train_config = {},
                              AdamConfig adam_config = {})
        : config_(config), train_config_(train_config), adam_config_(adam_config) {}

    void fit(const Matrix& X, const Vector& y) override;
    void fit_with_validation(const Matrix& X, const Vector& y,
                             const Matrix& X_val, const Vector& y_val);
    Vector predict(const Matrix& X) const override;
    std::string name() const override;
    nlohmann::json to_json() const override;
    static TransformerModel from_json(const nlohmann::json& doc);

    const TrainingHistory& history() const { return history_; }
    Sequential& network() { return net_; }
    const TransformerConfig& config() const { return config_; }

    /// Attention weights from the last predict() call, empty for the
    /// PositionalOnly variant.
    Tensor last_attention_weights() const;
    static void attention_weights_to_csv(const Tensor& weights, const std::string& path);

  private:
    TransformerConfig config_;
    TrainConfig train_config_;
    AdamConfig adam_config_;
    std::size_t input_dim_ = 0;
    double y_mean_ = 0.0, y_std_ = 1.0;
    mutable Sequential net_;
    TrainingHistory history_;
};

}  // namespace soc
