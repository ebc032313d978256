#include "socbench/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace soc {

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_sse = 0.0;
};

double node_sse(const Vector& y, const std::vector<std::size_t>& idx, double mean) {
    double sse = 0.0;
    for (std::size_t i : idx) sse += (y[i] - mean) * (y[i] - mean);
    return sse;
}

double subset_mean(const Vector& y, const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += y[i];
    return sum / static_cast<double>(idx.size());
}

// Order-independent SSE of one candidate split: each side is accumulated in
// ascending node-index order, so two splits inducing the same partition get
// bitwise-identical values regardless of which feature produced them.
double exact_split_sse(const Matrix& X, const Vector& y, const std::vector<std::size_t>& idx,
                       std::size_t feature, double threshold) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i : idx)
            if ((X(i, feature) <= threshold) == (side == 0)) {
                sum += y[i];
                ++count;
            }
        const double mean = sum / static_cast<double>(count);
        for (std::size_t i : idx)
            if ((X(i, feature) <= threshold) == (side == 0)) {
                const double d = y[i] - mean;
                total += d * d;
            }
    }
    return total;
}

// Best split over all features and midpoint thresholds. A sorted prefix-sum
// scan finds the approximate minimum cheaply; candidates within rounding
// distance of it are then re-scored with the exact order-independent SSE so
// ties break deterministically on lowest feature index, then lowest
// threshold.
SplitChoice best_split(const Matrix& X, const Vector& y,
                       const std::vector<std::size_t>& idx, std::size_t min_samples_leaf) {
    SplitChoice best;
    const std::size_t m = idx.size();
    std::vector<std::size_t> order(m);
    std::vector<double> values(m);

    struct Boundary {
        std::size_t feature;
        double threshold;
        double approx_sse;
    };
    std::vector<Boundary> boundaries;
    double min_approx = std::numeric_limits<double>::infinity();
    double sq_scale = 0.0;

    for (std::size_t f = 0; f < X.cols; ++f) {
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i < m; ++i) values[i] = X(idx[i], f);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values[a] < values[b];
        });

        double right_sum = 0.0, right_sq = 0.0;
        for (std::size_t i : idx) {
            right_sum += y[i];
            right_sq += y[i] * y[i];
        }
        sq_scale = right_sq;
        double left_sum = 0.0, left_sq = 0.0;

        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double yv = y[idx[order[i]]];
            left_sum += yv;
            left_sq += yv * yv;
            right_sum -= yv;
            right_sq -= yv * yv;

            const double lo = values[order[i]];
            const double hi = values[order[i + 1]];
            if (lo == hi) continue;  // not a boundary between distinct values
            const std::size_t n_left = i + 1, n_right = m - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;

            const double sse_left = left_sq - left_sum * left_sum / static_cast<double>(n_left);
            const double sse_right =
                right_sq - right_sum * right_sum / static_cast<double>(n_right);
            const double total = sse_left + sse_right;
            boundaries.push_back({f, lo + (hi - lo) / 2.0, total});
            min_approx = std::min(min_approx, total);
        }
    }
    if (boundaries.empty()) return best;

    // anything within the prefix-sum formula's rounding error of the minimum
    // is a potential exact tie and gets the deterministic re-score
    const double band = 1e-10 * (sq_scale + 1.0);
    for (const Boundary& b : boundaries) {
        if (b.approx_sse > min_approx + band) continue;
        const double exact = exact_split_sse(X, y, idx, b.feature, b.threshold);
        if (!best.found || exact < best.weighted_sse) {
            best.found = true;
            best.feature = b.feature;
            best.threshold = b.threshold;
            best.weighted_sse = exact;
        }
    }
    return best;
}

std::unique_ptr<TreeNode> build(const Matrix& X, const Vector& y,
                                std::vector<std::size_t> idx, const TreeConfig& config,
                                std::size_t depth) {
    auto node = std::make_unique<TreeNode>();
    node->n_samples = idx.size();
    node->value = subset_mean(y, idx);

    if (config.max_depth && depth >= *config.max_depth) return node;
    if (idx.size() < config.min_samples_split) return node;
    const double sse = node_sse(y, idx, node->value);
    if (sse <= 0.0) return node;  // zero-variance node

    const SplitChoice choice = best_split(X, y, idx, config.min_samples_leaf);
    if (!choice.found || choice.weighted_sse >= sse) return node;  // no gain

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        if (X(i, choice.feature) <= choice.threshold)
            left_idx.push_back(i);
        else
            right_idx.push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    node->is_leaf = false;
    node->feature_index = choice.feature;
    node->threshold = choice.threshold;
    node->left = build(X, y, std::move(left_idx), config, depth + 1);
    node->right = build(X, y, std::move(right_idx), config, depth + 1);
    return node;
}

}  // namespace

std::unique_ptr<TreeNode> tree_fit(const Matrix& X, const Vector& y, const TreeConfig& config) {
    if (X.rows == 0 || X.rows != y.size())
        throw Error(ErrorCode::EmptyInput, "tree_fit needs matching non-empty X and y");
    std::vector<std::size_t> idx(X.rows);
    std::iota(idx.begin(), idx.end(), 0);
    return build(X, y, std::move(idx), config, 0);
}

Vector tree_predict(const TreeNode& tree, const Matrix& X) {
    Vector out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const TreeNode* node = &tree;
        while (!node->is_leaf) {
            if (node->feature_index >= X.cols)
                throw Error(ErrorCode::DimensionMismatch, "split feature beyond input width");
            node = X(i, node->feature_index) <= node->threshold ? node->left.get()
                                                                : node->right.get();
        }
        out[i] = node->value;
    }
    return out;
}

nlohmann::json tree_to_json(const TreeNode& tree) {
    if (tree.is_leaf)
        return {{"leaf", true}, {"value", tree.value}, {"n_samples", tree.n_samples}};
    return {{"leaf", false},
            {"feature_index", tree.feature_index},
            {"threshold", tree.threshold},
            {"n_samples", tree.n_samples},
            {"left", tree_to_json(*tree.left)},
            {"right", tree_to_json(*tree.right)}};
}

std::unique_ptr<TreeNode> tree_from_json(const nlohmann::json& doc) {
    auto node = std::make_unique<TreeNode>();
    node->n_samples = doc.at("n_samples").get<std::size_t>();
    if (doc.at("leaf").get<bool>()) {
        node->value = doc.at("value").get<double>();
        return node;
    }
    node->is_leaf = false;
    node->feature_index = doc.at("feature_index").get<std::size_t>();
    node->threshold = doc.at("threshold").get<double>();
    node->left = tree_from_json(doc.at("left"));
    node->right = tree_from_json(doc.at("right"));
    return node;
}

namespace {

void render(const TreeNode& node, std::ostringstream& out, std::size_t depth) {
    out << std::string(depth * 2, ' ');
    if (node.is_leaf) {
        out << "leaf value=" << node.value << " n=" << node.n_samples << '\n';
    } else {
        out << "x[" << node.feature_index << "] <= " << node.threshold
            << " n=" << node.n_samples << '\n';
        render(*node.left, out, depth + 1);
        render(*node.right, out, depth + 1);
    }
}

}  // namespace

std::string tree_render(const TreeNode& tree) {
    std::ostringstream out;
    render(tree, out, 0);
    return out.str();
}

void DecisionTreeModel::fit(const Matrix& X, const Vector& y) {
    root_ = tree_fit(X, y, config_);
    fitted_ = true;
}

Vector DecisionTreeModel::predict(const Matrix& X) const {
    require_fitted();
    return tree_predict(*root_, X);
}

nlohmann::json DecisionTreeModel::to_json() const {
    nlohmann::json depth;
    if (config_.max_depth) depth = *config_.max_depth;
    return {{"type", "tree"},
            {"max_depth", depth},
            {"min_samples_split", config_.min_samples_split},
            {"min_samples_leaf", config_.min_samples_leaf},
            {"root", tree_to_json(*root_)}};
}

DecisionTreeModel DecisionTreeModel::from_json(const nlohmann::json& doc) {
    TreeConfig config;
    if (!doc.at("max_depth").is_null())
        config.max_depth = doc.at("max_depth").get<std::size_t>();
    config.min_samples_split = doc.at("min_samples_split").get<std::size_t>();
    config.min_samples_leaf = doc.at("min_samples_leaf").get<std::size_t>();
    DecisionTreeModel m(config);
    m.root_ = tree_from_json(doc.at("root"));
    m.fitted_ = true;
    return m;
}

}  // namespace soc
