#include "socbench/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace soc {

std::string to_string(TransformerVariant variant) {
    switch (variant) {
        case TransformerVariant::AttentionOnly: return "attention_only";
        case TransformerVariant::PositionalOnly: return "positional_only";
        case TransformerVariant::Full: return "full";
    }
    return "unknown";
}

TransformerVariant transformer_variant_from_string(const std::string& name) {
    if (name == "attention_only") return TransformerVariant::AttentionOnly;
    if (name == "positional_only") return TransformerVariant::PositionalOnly;
    if (name == "full") return TransformerVariant::Full;
    throw Error(ErrorCode::InvalidConfig, "unknown transformer variant " + name);
}

Tensor positional_encoding(std::size_t seq_len, std::size_t d_model) {
    if (d_model % 2 != 0)
        throw Error(ErrorCode::OddDModel, "positional encoding needs even d_model");
    Tensor pe({seq_len, d_model});
    for (std::size_t pos = 0; pos < seq_len; ++pos) {
        for (std::size_t i = 0; i < d_model / 2; ++i) {
            const double angle =
                static_cast<double>(pos) /
                std::pow(10000.0, 2.0 * static_cast<double>(i) / static_cast<double>(d_model));
            pe.at(pos, 2 * i) = std::sin(angle);
            pe.at(pos, 2 * i + 1) = std::cos(angle);
        }
    }
    return pe;
}

namespace {

Param make_param(const std::string& name, std::vector<std::size_t> shape) {
    return {name, Tensor(shape), Tensor(std::move(shape))};
}

void check_bsd(const Tensor& t, std::size_t d_model, const char* what) {
    if (t.rank() != 3 || t.dim(2) != d_model)
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(what) + " must be (batch, seq, d_model)");
}

// y = x W + b over the last dim of a (batch, seq, d) tensor.
Tensor project(const Tensor& x, const Param& W, const Param& b, std::size_t d_in,
               std::size_t d_out) {
    const std::size_t rows = x.size() / d_in;
    auto shape = x.shape();
    shape.back() = d_out;
    Tensor out(shape);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t o = 0; o < d_out; ++o) {
            double acc = b.value[o];
            for (std::size_t k = 0; k < d_in; ++k)
                acc += x[i * d_in + k] * W.value[k * d_out + o];
            out.data()[i * d_out + o] = acc;
        }
    return out;
}

// Accumulates dW, db and returns dx for the projection above.
Tensor project_backward(const Tensor& x, const Tensor& grad_out, Param& W, Param& b,
                        std::size_t d_in, std::size_t d_out) {
    const std::size_t rows = x.size() / d_in;
    Tensor dx(x.shape(), 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t o = 0; o < d_out; ++o) {
            const double go = grad_out[i * d_out + o];
            b.grad.data()[o] += go;
            for (std::size_t k = 0; k < d_in; ++k) {
                W.grad.data()[k * d_out + o] += x[i * d_in + k] * go;
                dx.data()[i * d_in + k] += W.value[k * d_out + o] * go;
            }
        }
    return dx;
}

}  // namespace

MultiHeadAttention::MultiHeadAttention(std::size_t d_model, std::size_t n_heads,
                                       std::mt19937_64& rng)
    : d_model_(d_model), n_heads_(n_heads) {
    if (n_heads == 0 || d_model % n_heads != 0)
        throw Error(ErrorCode::HeadDivisibility, "n_heads must divide d_model");
    d_head_ = d_model / n_heads;
    Wq_ = make_param("Wq", {d_model, d_model});
    Wk_ = make_param("Wk", {d_model, d_model});
    Wv_ = make_param("Wv", {d_model, d_model});
    Wo_ = make_param("Wo", {d_model, d_model});
    bq_ = make_param("bq", {d_model});
    bk_ = make_param("bk", {d_model});
    bv_ = make_param("bv", {d_model});
    bo_ = make_param("bo", {d_model});
    for (Param* p : {&Wq_, &Wk_, &Wv_, &Wo_}) glorot_uniform(p->value, d_model, d_model, rng);
}

std::vector<Param*> MultiHeadAttention::params() {
    return {&Wq_, &Wk_, &Wv_, &Wo_, &bq_, &bk_, &bv_, &bo_};
}

Tensor MultiHeadAttention::forward(const Tensor& q, const Tensor& k, const Tensor& v) {
    check_bsd(q, d_model_, "q");
    check_bsd(k, d_model_, "k");
    check_bsd(v, d_model_, "v");
    if (q.dim(0) != k.dim(0) || q.dim(0) != v.dim(0) || k.dim(1) != v.dim(1))
        throw Error(ErrorCode::ShapeMismatch, "inconsistent attention batch/seq dims");

    q_in_ = q;
    k_in_ = k;
    v_in_ = v;
    Q_ = project(q, Wq_, bq_, d_model_, d_model_);
    K_ = project(k, Wk_, bk_, d_model_, d_model_);
    V_ = project(v, Wv_, bv_, d_model_, d_model_);

    const std::size_t batch = q.dim(0), sq = q.dim(1), skv = k.dim(1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_head_));

    // attention weights live in a rank-3 tensor (batch*heads, sq, skv);
    // attention_weights() reports the logical (batch, heads, sq, skv) layout
    attn_ = Tensor({batch * n_heads_, sq, skv});
    context_ = Tensor({batch, sq, d_model_});

    auto at3 = [&](const Tensor& t, std::size_t b, std::size_t s, std::size_t h,
                   std::size_t c) {  // head h, channel c within head
        return t.at(b, s, h * d_head_ + c);
    };

    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t h = 0; h < n_heads_; ++h) {
            for (std::size_t i = 0; i < sq; ++i) {
                // scaled dot-product logits, then a max-shifted softmax row
                double row_max = -std::numeric_limits<double>::infinity();
                std::vector<double> logits(skv);
                for (std::size_t j = 0; j < skv; ++j) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < d_head_; ++c)
                        dot += at3(Q_, b, i, h, c) * at3(K_, b, j, h, c);
                    logits[j] = dot * scale;
                    row_max = std::max(row_max, logits[j]);
                }
                double denom = 0.0;
                for (std::size_t j = 0; j < skv; ++j) {
                    logits[j] = std::exp(logits[j] - row_max);
                    denom += logits[j];
                }
                for (std::size_t j = 0; j < skv; ++j)
                    attn_.at(b * n_heads_ + h, i, j) = logits[j] / denom;

                for (std::size_t c = 0; c < d_head_; ++c) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < skv; ++j)
                        acc += attn_.at(b * n_heads_ + h, i, j) * at3(V_, b, j, h, c);
                    context_.at(b, i, h * d_head_ + c) = acc;
                }
            }
        }
    }
    return project(context_, Wo_, bo_, d_model_, d_model_);
}

std::tuple<Tensor, Tensor, Tensor> MultiHeadAttention::backward(const Tensor& grad_out) {
    const std::size_t batch = q_in_.dim(0), sq = q_in_.dim(1), skv = k_in_.dim(1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_head_));

    const Tensor d_context =
        project_backward(context_, grad_out, Wo_, bo_, d_model_, d_model_);

    Tensor dQ(Q_.shape(), 0.0), dK(K_.shape(), 0.0), dV(V_.shape(), 0.0);

    auto at3 = [&](const Tensor& t, std::size_t b, std::size_t s, std::size_t h,
                   std::size_t c) { return t.at(b, s, h * d_head_ + c); };

    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t h = 0; h < n_heads_; ++h) {
            for (std::size_t i = 0; i < sq; ++i) {
                // dA = d_context V^T; dV += A^T d_context
                std::vector<double> dA(skv, 0.0);
                for (std::size_t j = 0; j < skv; ++j) {
                    const double a = attn_.at(b * n_heads_ + h, i, j);
                    for (std::size_t c = 0; c < d_head_; ++c) {
                        const double dc = d_context.at(b, i, h * d_head_ + c);
                        dA[j] += dc * at3(V_, b, j, h, c);
                        dV.at(b, j, h * d_head_ + c) += a * dc;
                    }
                }
                // softmax backward: dS = A o (dA - sum(dA o A))
                double dot = 0.0;
                for (std::size_t j = 0; j < skv; ++j)
                    dot += dA[j] * attn_.at(b * n_heads_ + h, i, j);
                for (std::size_t j = 0; j < skv; ++j) {
                    const double a = attn_.at(b * n_heads_ + h, i, j);
                    const double dS = a * (dA[j] - dot) * scale;
                    for (std::size_t c = 0; c < d_head_; ++c) {
                        dQ.at(b, i, h * d_head_ + c) += dS * at3(K_, b, j, h, c);
                        dK.at(b, j, h * d_head_ + c) += dS * at3(Q_, b, i, h, c);
                    }
                }
            }
        }
    }

    Tensor dq = project_backward(q_in_, dQ, Wq_, bq_, d_model_, d_model_);
    Tensor dk = project_backward(k_in_, dK, Wk_, bk_, d_model_, d_model_);
    Tensor dv = project_backward(v_in_, dV, Wv_, bv_, d_model_, d_model_);
    return {std::move(dq), std::move(dk), std::move(dv)};
}

Tensor SelfAttentionLayer::forward(const Tensor& x, bool) {
    return mha_.forward(x, x, x);
}

Tensor SelfAttentionLayer::backward(const Tensor& grad_out) {
    for (Param* p : mha_.params())
        std::fill(p->grad.data().begin(), p->grad.data().end(), 0.0);
    auto [dq, dk, dv] = mha_.backward(grad_out);
    Tensor dx = dq;
    for (std::size_t i = 0; i < dx.size(); ++i) dx.data()[i] += dk[i] + dv[i];
    return dx;
}

PositionalEncodingLayer::PositionalEncodingLayer(std::size_t max_seq_len, std::size_t d_model,
                                                 bool learned, std::mt19937_64& rng)
    : learned_(learned) {
    table_ = positional_encoding(max_seq_len, d_model);
    embedding_ = make_param("pos_embedding", {max_seq_len, d_model});
    if (learned_) glorot_uniform(embedding_.value, max_seq_len, d_model, rng);
}

Tensor PositionalEncodingLayer::forward(const Tensor& x, bool) {
    const std::size_t seq = x.dim(1), d = x.dim(2);
    if (seq > table_.dim(0))
        throw Error(ErrorCode::ShapeMismatch, "sequence longer than positional table");
    if (d != table_.dim(1))
        throw Error(ErrorCode::ShapeMismatch, "positional encoding d_model mismatch");
    batch_ = x.dim(0);
    if (!enabled) return x;
    const Tensor& pe = learned_ ? embedding_.value : table_;
    Tensor out = x;
    for (std::size_t b = 0; b < batch_; ++b)
        for (std::size_t s = 0; s < seq; ++s)
            for (std::size_t c = 0; c < d; ++c) out.at(b, s, c) += pe.at(s, c);
    return out;
}

Tensor PositionalEncodingLayer::backward(const Tensor& grad_out) {
    if (learned_ && enabled) {
        std::fill(embedding_.grad.data().begin(), embedding_.grad.data().end(), 0.0);
        for (std::size_t b = 0; b < grad_out.dim(0); ++b)
            for (std::size_t s = 0; s < grad_out.dim(1); ++s)
                for (std::size_t c = 0; c < grad_out.dim(2); ++c)
                    embedding_.grad.at(s, c) += grad_out.at(b, s, c);
    }
    return grad_out;
}

std::vector<Param*> PositionalEncodingLayer::params() {
    if (learned_) return {&embedding_};
    return {};
}

DropoutLayer::DropoutLayer(double rate, std::uint64_t seed) : rate_(rate), rng_(seed) {
    if (rate < 0.0 || rate >= 1.0)
        throw Error(ErrorCode::InvalidConfig, "dropout rate must be in [0, 1)");
}

Tensor DropoutLayer::forward(const Tensor& x, bool training) {
    active_ = training && rate_ > 0.0;
    if (!active_) return x;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - rate_);
    mask_ = Tensor(x.shape());
    Tensor out = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = unit(rng_) < rate_ ? 0.0 : keep_scale;
        mask_.data()[i] = m;
        out.data()[i] *= m;
    }
    return out;
}

Tensor DropoutLayer::backward(const Tensor& grad_out) {
    if (!active_) return grad_out;
    Tensor out = grad_out;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= mask_[i];
    return out;
}

LayerNormLayer::LayerNormLayer(std::size_t dim, double eps) : dim_(dim), eps_(eps) {
    gain_ = make_param("gain", {dim});
    bias_ = make_param("bias", {dim});
    std::fill(gain_.value.data().begin(), gain_.value.data().end(), 1.0);
}

Tensor LayerNormLayer::forward(const Tensor& x, bool) {
    if (x.shape().back() != dim_)
        throw Error(ErrorCode::ShapeMismatch, "layer norm dim mismatch");
    input_ = x;
    const std::size_t rows = x.size() / dim_;
    normed_ = Tensor(x.shape());
    inv_std_.assign(rows, 0.0);
    Tensor out(x.shape());
    for (std::size_t i = 0; i < rows; ++i) {
        double mean = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) mean += x[i * dim_ + c];
        mean /= static_cast<double>(dim_);
        double var = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            const double d = x[i * dim_ + c] - mean;
            var += d * d;
        }
        var /= static_cast<double>(dim_);
        const double inv = 1.0 / std::sqrt(var + eps_);
        inv_std_[i] = inv;
        for (std::size_t c = 0; c < dim_; ++c) {
            const double nv = (x[i * dim_ + c] - mean) * inv;
            normed_.data()[i * dim_ + c] = nv;
            out.data()[i * dim_ + c] = nv * gain_.value[c] + bias_.value[c];
        }
    }
    return out;
}

Tensor LayerNormLayer::backward(const Tensor& grad_out) {
    const std::size_t rows = grad_out.size() / dim_;
    std::fill(gain_.grad.data().begin(), gain_.grad.data().end(), 0.0);
    std::fill(bias_.grad.data().begin(), bias_.grad.data().end(), 0.0);
    Tensor dx(grad_out.shape());
    const double inv_dim = 1.0 / static_cast<double>(dim_);
    for (std::size_t i = 0; i < rows; ++i) {
        double sum_dn = 0.0, sum_dn_n = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            const double go = grad_out[i * dim_ + c];
            const double nv = normed_[i * dim_ + c];
            gain_.grad.data()[c] += go * nv;
            bias_.grad.data()[c] += go;
            const double dn = go * gain_.value[c];
            sum_dn += dn;
            sum_dn_n += dn * nv;
        }
        for (std::size_t c = 0; c < dim_; ++c) {
            const double dn = grad_out[i * dim_ + c] * gain_.value[c];
            dx.data()[i * dim_ + c] =
                inv_std_[i] * (dn - inv_dim * sum_dn - normed_[i * dim_ + c] * inv_dim * sum_dn_n);
        }
    }
    return dx;
}

Tensor ResidualBlock::forward(const Tensor& x, bool training) {
    Tensor y = inner_.forward(x, training);
    if (y.shape() != x.shape())
        throw Error(ErrorCode::ShapeMismatch, "residual branch changed the shape");
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += x[i];
    return y;
}

Tensor ResidualBlock::backward(const Tensor& grad_out) {
    Tensor dx = inner_.backward(grad_out);
    for (std::size_t i = 0; i < dx.size(); ++i) dx.data()[i] += grad_out[i];
    return dx;
}

Sequential build_transformer(std::size_t input_dim, const TransformerConfig& config) {
    if (input_dim < 1) throw Error(ErrorCode::InvalidConfig, "input_dim must be >= 1");
    if (config.d_model == 0 || config.n_heads == 0 || config.d_model % config.n_heads != 0)
        throw Error(ErrorCode::InvalidConfig, "n_heads must divide d_model");
    if (config.hidden_units < 2)
        throw Error(ErrorCode::InvalidConfig, "hidden_units must be >= 2");

    std::mt19937_64 rng(config.seed);
    std::mt19937_64 dropout_rng(config.seed ^ 0xd1b54a32d192ed03ULL);
    Sequential net;
    // learned linear projection of the raw features into d_model
    net.add(std::make_unique<DenseLayer>(input_dim, config.d_model, Activation::Identity, rng));

    switch (config.variant) {
        case TransformerVariant::AttentionOnly: {
            auto block = std::make_unique<ResidualBlock>();
            block->add(std::make_unique<SelfAttentionLayer>(config.d_model, config.n_heads, rng));
            block->add(std::make_unique<DropoutLayer>(config.dropout_rate, dropout_rng()));
            net.add(std::move(block));
            net.add(std::make_unique<LayerNormLayer>(config.d_model));
            net.add(std::make_unique<DenseLayer>(config.d_model, config.hidden_units,
                                                 Activation::Relu, rng));
            net.add(std::make_unique<DenseLayer>(config.hidden_units, config.hidden_units / 2,
                                                 Activation::Relu, rng));
            net.add(std::make_unique<DenseLayer>(config.hidden_units / 2, 1,
                                                 Activation::Identity, rng));
            break;
        }
        case TransformerVariant::PositionalOnly: {
            net.add(std::make_unique<PositionalEncodingLayer>(
                config.max_seq_len, config.d_model, config.learned_positional, rng));
            net.add(std::make_unique<DropoutLayer>(config.dropout_rate, dropout_rng()));
            net.add(std::make_unique<LayerNormLayer>(config.d_model));
            net.add(std::make_unique<DenseLayer>(config.d_model, config.hidden_units,
                                                 Activation::Relu, rng));
            net.add(std::make_unique<DenseLayer>(config.hidden_units, config.hidden_units,
                                                 Activation::Relu, rng));
            net.add(std::make_unique<DenseLayer>(config.hidden_units, 1,
                                                 Activation::Identity, rng));
            break;
        }
        case TransformerVariant::Full: {
            net.add(std::make_unique<PositionalEncodingLayer>(
                config.max_seq_len, config.d_model, config.learned_positional, rng));
            net.add(std::make_unique<DropoutLayer>(config.dropout_rate, dropout_rng()));
            auto block = std::make_unique<ResidualBlock>();
            block->add(std::make_unique<SelfAttentionLayer>(config.d_model, config.n_heads, rng));
            net.add(std::move(block));
            net.add(std::make_unique<LayerNormLayer>(config.d_model));
            net.add(std::make_unique<DenseLayer>(config.d_model, config.hidden_units,
                                                 Activation::Relu, rng));
            net.add(std::make_unique<DenseLayer>(config.hidden_units, 1,
                                                 Activation::Identity, rng));
            break;
        }
    }
    return net;
}

namespace {

std::pair<double, double> target_stats(const Vector& y) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    return {mean, var > 0.0 ? std::sqrt(var) : 1.0};
}

Vector scale_target(const Vector& y, double mean, double std) {
    Vector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (y[i] - mean) / std;
    return out;
}

}  // namespace

std::string TransformerModel::name() const {
    switch (config_.variant) {
        case TransformerVariant::AttentionOnly: return "Transformer (Self-Attention)";
        case TransformerVariant::PositionalOnly: return "Transformer (Positional Encoding)";
        case TransformerVariant::Full:
            return "Transformer (Self-Attention + Positional Encoding)";
    }
    return "Transformer";
}

void TransformerModel::fit(const Matrix& X, const Vector& y) {
    auto [train_part, val_part] = holdout_split(X, y, 0.15, config_.seed);
    fit_with_validation(train_part.first, train_part.second, val_part.first, val_part.second);
}

void TransformerModel::fit_with_validation(const Matrix& X, const Vector& y,
                                           const Matrix& X_val, const Vector& y_val) {
    input_dim_ = X.cols;
    std::tie(y_mean_, y_std_) = target_stats(y);
    net_ = build_transformer(input_dim_, config_);
    Adam optimizer(adam_config_);
    TrainConfig config = train_config_;
    config.shuffle_seed = config_.seed ^ 0x9e3779b97f4a7c15ULL;
    history_ = train(net_, X, scale_target(y, y_mean_, y_std_), X_val,
                     scale_target(y_val, y_mean_, y_std_), config, optimizer);
    fitted_ = true;
}

Vector TransformerModel::predict(const Matrix& X) const {
    require_fitted();
    if (X.cols != input_dim_)
        throw Error(ErrorCode::DimensionMismatch, "feature count mismatch");
    Tensor out = net_.forward(reshape_input(X), false);
    Vector pred(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) pred[i] = out[i] * y_std_ + y_mean_;
    return pred;
}

Tensor TransformerModel::last_attention_weights() const {
    for (Layer* layer : net_.layers()) {
        if (auto* block = dynamic_cast<ResidualBlock*>(layer)) {
            for (Layer* inner : block->inner().layers())
                if (auto* attn = dynamic_cast<SelfAttentionLayer*>(inner))
                    return attn->mha().attention_weights();
        }
        if (auto* attn = dynamic_cast<SelfAttentionLayer*>(layer))
            return attn->mha().attention_weights();
    }
    return {};
}

void TransformerModel::attention_weights_to_csv(const Tensor& weights, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot open " + path + " for writing");
    out << "batch_head,query_pos,key_pos,weight\n";
    char buf[64];
    if (weights.size() == 0) return;
    for (std::size_t bh = 0; bh < weights.dim(0); ++bh)
        for (std::size_t i = 0; i < weights.dim(1); ++i)
            for (std::size_t j = 0; j < weights.dim(2); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", weights.at(bh, i, j));
                out << bh << ',' << i << ',' << j << ',' << buf << '\n';
            }
}

nlohmann::json TransformerModel::to_json() const {
    return {{"type", "transformer"},
            {"variant", soc::to_string(config_.variant)},
            {"d_model", config_.d_model},
            {"n_heads", config_.n_heads},
            {"dropout_rate", config_.dropout_rate},
            {"hidden_units", config_.hidden_units},
            {"seed", config_.seed},
            {"learned_positional", config_.learned_positional},
            {"max_seq_len", config_.max_seq_len},
            {"input_dim", input_dim_},
            {"y_mean", y_mean_},
            {"y_std", y_std_},
            {"epochs", train_config_.epochs},
            {"batch_size", train_config_.batch_size},
            {"patience", train_config_.patience},
            {"min_delta", train_config_.min_delta},
            {"learning_rate", adam_config_.learning_rate},
            {"params", net_.flat_params()}};
}

TransformerModel TransformerModel::from_json(const nlohmann::json& doc) {
    TransformerConfig config;
    config.variant = transformer_variant_from_string(doc.at("variant").get<std::string>());
    config.d_model = doc.at("d_model").get<std::size_t>();
    config.n_heads = doc.at("n_heads").get<std::size_t>();
    config.dropout_rate = doc.at("dropout_rate").get<double>();
    config.hidden_units = doc.at("hidden_units").get<std::size_t>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.learned_positional = doc.at("learned_positional").get<bool>();
    config.max_seq_len = doc.at("max_seq_len").get<std::size_t>();
    TrainConfig tc;
    tc.epochs = doc.at("epochs").get<std::size_t>();
    tc.batch_size = doc.at("batch_size").get<std::size_t>();
    tc.patience = doc.at("patience").get<std::size_t>();
    tc.min_delta = doc.at("min_delta").get<double>();
    AdamConfig ac;
    ac.learning_rate = doc.at("learning_rate").get<double>();
    TransformerModel m(config, tc, ac);
    m.input_dim_ = doc.at("input_dim").get<std::size_t>();
    m.y_mean_ = doc.at("y_mean").get<double>();
    m.y_std_ = doc.at("y_std").get<double>();
    m.net_ = build_transformer(m.input_dim_, config);
    m.net_.set_flat_params(doc.at("params").get<std::vector<double>>());
    m.fitted_ = true;
    return m;
}

}  // namespace soc
