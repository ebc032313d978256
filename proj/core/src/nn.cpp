#include "socbench/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace soc {

Tensor relu(const Tensor& z) {
    Tensor out = z;
    for (double& x : out.data()) x = std::max(0.0, x);
    return out;
}

Tensor relu_backward(const Tensor& z, const Tensor& grad_out) {
    if (z.shape() != grad_out.shape())
        throw Error(ErrorCode::ShapeMismatch, "relu_backward shapes differ");
    Tensor out = grad_out;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (z[i] <= 0.0) out.data()[i] = 0.0;
    return out;
}

std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target) {
    if (pred.shape() != target.shape())
        throw Error(ErrorCode::ShapeMismatch, "mse_loss shapes differ");
    const double inv_n = 1.0 / static_cast<double>(pred.size());
    double loss = 0.0;
    Tensor grad = pred;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        loss += d * d;
        grad.data()[i] = 2.0 * d * inv_n;
    }
    return {loss * inv_n, std::move(grad)};
}

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& x : t.data()) x = dist(rng);
}

namespace {

// Folds leading dims: (a, b, c) -> rows a*b, cols c; (a, b) -> rows a.
std::pair<std::size_t, std::size_t> folded(const Tensor& t) {
    const auto& s = t.shape();
    std::size_t rows = 1;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) rows *= s[i];
    return {rows, s.back()};
}

}  // namespace

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation act,
                       std::mt19937_64& rng)
    : in_dim_(in_dim), out_dim_(out_dim), act_(act) {
    W_ = {"W", Tensor({in_dim, out_dim}), Tensor({in_dim, out_dim})};
    // small positive bias keeps narrow relu layers from starting dead
    b_ = {"b", Tensor({out_dim}, act == Activation::Relu ? 0.01 : 0.0), Tensor({out_dim})};
    glorot_uniform(W_.value, in_dim, out_dim, rng);
}

Tensor DenseLayer::forward(const Tensor& x, bool) {
    const auto [rows, cols] = folded(x);
    if (cols != in_dim_)
        throw Error(ErrorCode::ShapeMismatch, "dense input last dim mismatch");
    input_ = x;

    auto shape = x.shape();
    shape.back() = out_dim_;
    Tensor z(shape);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t o = 0; o < out_dim_; ++o) {
            double acc = b_.value[o];
            for (std::size_t k = 0; k < in_dim_; ++k)
                acc += x[i * in_dim_ + k] * W_.value[k * out_dim_ + o];
            z.data()[i * out_dim_ + o] = acc;
        }
    }
    preact_ = z;
    return act_ == Activation::Relu ? relu(z) : z;
}

Tensor DenseLayer::backward(const Tensor& grad_out) {
    Tensor g = act_ == Activation::Relu ? relu_backward(preact_, grad_out) : grad_out;
    const auto [rows, cols] = folded(g);

    std::fill(W_.grad.data().begin(), W_.grad.data().end(), 0.0);
    std::fill(b_.grad.data().begin(), b_.grad.data().end(), 0.0);
    Tensor dx(input_.shape(), 0.0);

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t o = 0; o < out_dim_; ++o) {
            const double go = g[i * out_dim_ + o];
            b_.grad.data()[o] += go;
            for (std::size_t k = 0; k < in_dim_; ++k) {
                W_.grad.data()[k * out_dim_ + o] += input_[i * in_dim_ + k] * go;
                dx.data()[i * in_dim_ + k] += W_.value[k * out_dim_ + o] * go;
            }
        }
    }
    return dx;
}

Tensor Sequential::forward(const Tensor& x, bool training) {
    Tensor h = x;
    for (auto& layer : layers_) h = layer->forward(h, training);
    return h;
}

Tensor Sequential::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

std::vector<Param*> Sequential::params() {
    std::vector<Param*> out;
    for (auto& layer : layers_)
        for (Param* p : layer->params()) out.push_back(p);
    return out;
}

std::vector<Layer*> Sequential::layers() {
    std::vector<Layer*> out;
    for (auto& layer : layers_) out.push_back(layer.get());
    return out;
}

std::vector<Tensor> Sequential::snapshot() const {
    std::vector<Tensor> out;
    for (const auto& layer : layers_)
        for (Param* p : const_cast<Layer&>(*layer).params()) out.push_back(p->value);
    return out;
}

void Sequential::restore(const std::vector<Tensor>& weights) {
    std::size_t i = 0;
    for (auto& layer : layers_)
        for (Param* p : layer->params()) p->value = weights.at(i++);
}

std::vector<double> Sequential::flat_params() const {
    std::vector<double> out;
    for (const auto& t : snapshot())
        out.insert(out.end(), t.data().begin(), t.data().end());
    return out;
}

void Sequential::set_flat_params(const std::vector<double>& values) {
    std::size_t pos = 0;
    for (auto& layer : layers_) {
        for (Param* p : layer->params()) {
            if (pos + p->value.size() > values.size())
                throw Error(ErrorCode::ShapeMismatch, "flat parameter vector too short");
            std::copy(values.begin() + static_cast<std::ptrdiff_t>(pos),
                      values.begin() + static_cast<std::ptrdiff_t>(pos + p->value.size()),
                      p->value.data().begin());
            pos += p->value.size();
        }
    }
    if (pos != values.size())
        throw Error(ErrorCode::ShapeMismatch, "flat parameter vector too long");
}

void Adam::step(const std::vector<Param*>& params) {
    if (m_.empty()) {
        for (Param* p : params) {
            m_.emplace_back(p->value.shape(), 0.0);
            v_.emplace_back(p->value.shape(), 0.0);
        }
    }
    if (m_.size() != params.size())
        throw Error(ErrorCode::ShapeMismatch, "optimizer state / parameter count mismatch");

    ++t_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& value = params[i]->value.data();
        const auto& grad = params[i]->grad.data();
        auto& m = m_[i].data();
        auto& v = v_[i].data();
        for (std::size_t j = 0; j < value.size(); ++j) {
            m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * grad[j];
            v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * grad[j] * grad[j];
            const double m_hat = m[j] / bc1;
            const double v_hat = v[j] / bc2;
            value[j] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

void history_to_csv(const TrainingHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot open " + path + " for writing");
    out << "epoch,train_loss,val_loss\n";
    char buf[64];
    for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
        out << (e + 1) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", history.train_loss[e]);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", history.val_loss[e]);
        out << buf << '\n';
    }
}

namespace {

double eval_loss(Sequential& net, const Matrix& X, const Vector& y) {
    Tensor pred = net.forward(reshape_input(X), false);
    Tensor target({X.rows, 1, 1}, y);
    return mse_loss(pred, target).first;
}

}  // namespace

TrainingHistory train(Sequential& net, const Matrix& X_train, const Vector& y_train,
                      const Matrix& X_val, const Vector& y_val,
                      const TrainConfig& config, Adam& optimizer) {
    if (X_train.rows == 0 || X_val.rows == 0)
        throw Error(ErrorCode::EmptyInput, "train needs non-empty splits");
    if (config.epochs < 1 || config.batch_size < 1 || config.patience < 1)
        throw Error(ErrorCode::InvalidConfig, "epochs, batch_size, patience must be >= 1");

    const std::size_t n = X_train.rows;
    std::mt19937_64 shuffle_rng(config.shuffle_seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    TrainingHistory history;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<Tensor> best_weights = net.snapshot();
    std::size_t epochs_without_improvement = 0;
    auto params = net.params();

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, n - start);
            Matrix xb(len, X_train.cols);
            Vector yb(len);
            for (std::size_t i = 0; i < len; ++i) {
                const std::size_t src = order[start + i];
                for (std::size_t j = 0; j < X_train.cols; ++j) xb(i, j) = X_train(src, j);
                yb[i] = y_train[src];
            }
            Tensor pred = net.forward(reshape_input(xb), true);
            Tensor target({len, 1, 1}, yb);
            auto [loss, grad] = mse_loss(pred, target);
            net.backward(grad);
            optimizer.step(params);
            epoch_loss += loss;
            ++n_batches;
        }
        history.train_loss.push_back(epoch_loss / static_cast<double>(n_batches));

        const double val_loss = eval_loss(net, X_val, y_val);
        history.val_loss.push_back(val_loss);

        if (val_loss < best_val - config.min_delta) {
            best_val = val_loss;
            best_weights = net.snapshot();
            history.best_epoch = epoch;
            epochs_without_improvement = 0;
        } else {
            ++epochs_without_improvement;
        }
        if (epochs_without_improvement >= config.patience) {
            history.early_stopped = true;
            break;
        }
    }

    net.restore(best_weights);
    return history;
}

Sequential build_mlp(std::size_t input_dim, std::mt19937_64& rng) {
    if (input_dim < 1) throw Error(ErrorCode::InvalidConfig, "input_dim must be >= 1");
    Sequential net;
    net.add(std::make_unique<DenseLayer>(input_dim, 32, Activation::Relu, rng));
    net.add(std::make_unique<DenseLayer>(32, 8, Activation::Relu, rng));
    net.add(std::make_unique<DenseLayer>(8, 2, Activation::Relu, rng));
    net.add(std::make_unique<DenseLayer>(2, 1, Activation::Identity, rng));
    return net;
}

std::pair<std::pair<Matrix, Vector>, std::pair<Matrix, Vector>>
holdout_split(const Matrix& X, const Vector& y, double val_fraction, std::uint64_t seed) {
    const std::size_t n = X.rows;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::size_t n_val = static_cast<std::size_t>(val_fraction * static_cast<double>(n));
    n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
    const std::size_t n_train = n - n_val;

    auto take = [&](std::size_t begin, std::size_t len) {
        Matrix Xs(len, X.cols);
        Vector ys(len);
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t src = order[begin + i];
            for (std::size_t j = 0; j < X.cols; ++j) Xs(i, j) = X(src, j);
            ys[i] = y[src];
        }
        return std::make_pair(std::move(Xs), std::move(ys));
    };
    return {take(0, n_train), take(n_train, n_val)};
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

void MlpModel::fit(const Matrix& X, const Vector& y) {
    auto [train_part, val_part] = holdout_split(X, y, 0.15, seed_);
    fit_with_validation(train_part.first, train_part.second, val_part.first, val_part.second);
}

void MlpModel::fit_with_validation(const Matrix& X, const Vector& y,
                                   const Matrix& X_val, const Vector& y_val) {
    input_dim_ = X.cols;
    std::tie(y_mean_, y_std_) = target_stats(y);

    std::mt19937_64 rng(seed_);
    net_ = build_mlp(input_dim_, rng);
    Adam optimizer(adam_config_);
    TrainConfig config = train_config_;
    config.shuffle_seed = seed_ ^ 0x9e3779b97f4a7c15ULL;
    history_ = train(net_, X, scale_target(y, y_mean_, y_std_), X_val,
                     scale_target(y_val, y_mean_, y_std_), config, optimizer);
    fitted_ = true;
}

Vector MlpModel::predict(const Matrix& X) const {
    require_fitted();
    if (X.cols != input_dim_)
        throw Error(ErrorCode::DimensionMismatch, "feature count mismatch");
    Tensor out = net_.forward(reshape_input(X), false);
    Vector pred(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) pred[i] = out[i] * y_std_ + y_mean_;
    return pred;
}

nlohmann::json MlpModel::to_json() const {
    return {{"type", "mlp"},
            {"seed", seed_},
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

MlpModel MlpModel::from_json(const nlohmann::json& doc) {
    TrainConfig tc;
    tc.epochs = doc.at("epochs").get<std::size_t>();
    tc.batch_size = doc.at("batch_size").get<std::size_t>();
    tc.patience = doc.at("patience").get<std::size_t>();
    tc.min_delta = doc.at("min_delta").get<double>();
    AdamConfig ac;
    ac.learning_rate = doc.at("learning_rate").get<double>();
    MlpModel m(tc, ac, doc.at("seed").get<std::uint64_t>());
    m.input_dim_ = doc.at("input_dim").get<std::size_t>();
    m.y_mean_ = doc.at("y_mean").get<double>();
    m.y_std_ = doc.at("y_std").get<double>();
    std::mt19937_64 rng(m.seed_);
    m.net_ = build_mlp(m.input_dim_, rng);
    m.net_.set_flat_params(doc.at("params").get<std::vector<double>>());
    m.fitted_ = true;
    return m;
}

}  // namespace soc
