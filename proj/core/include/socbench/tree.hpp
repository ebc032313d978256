#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "socbench/model.hpp"

namespace soc {

struct TreeConfig {
    std::optional<std::size_t> max_depth;  // nullopt = unlimited
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
};

/// Leaf or binary split node. Splits route x[feature] <= threshold left,
/// > threshold right; leaf values are the mean of the training targets
/// routed to them.
struct TreeNode {
    bool is_leaf = true;
    double value = 0.0;           // leaf prediction
    std::size_t n_samples = 0;    // training samples at this node
    std::size_t feature_index = 0;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
};

/// Greedy CART regression: at each node pick the (feature, threshold) pair
/// minimizing weighted child SSE; candidate thresholds are midpoints between
/// consecutive distinct sorted feature values. Ties break on lowest feature
/// index, then lowest threshold.
std::unique_ptr<TreeNode> tree_fit(const Matrix& X, const Vector& y, const TreeConfig& config);

Vector tree_predict(const TreeNode& tree, const Matrix& X);

nlohmann::json tree_to_json(const TreeNode& tree);  // preorder
std::unique_ptr<TreeNode> tree_from_json(const nlohmann::json& doc);
std::string tree_render(const TreeNode& tree);      // text dump for docs

class DecisionTreeModel : public Model {
  public:
    DecisionTreeModel() = default;
    explicit DecisionTreeModel(TreeConfig config) : config_(config) {}

    void fit(const Matrix& X, const Vector& y) override;
    Vector predict(const Matrix& X) const override;
    std::string name() const override { return "Decision Tree"; }
    nlohmann::json to_json() const override;
    static DecisionTreeModel from_json(const nlohmann::json& doc);

    const TreeNode& root() const { return *root_; }
    const TreeConfig& config() const { return config_; }

  private:
    TreeConfig config_;
    std::unique_ptr<TreeNode> root_;
};

}  // namespace soc
