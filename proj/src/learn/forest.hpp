#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "features.hpp"

#include "json.hpp"

namespace proxsim::learn {

inline constexpr const char* kForestSchema = "proxsim-forest-v1";

struct ForestParams {
    int n_trees = 200;
    int max_depth = 16;
    int min_samples_leaf = 5;
    int histogram_bins = 256;  // quantile bins for threshold search
    uint64_t seed = 0;

    static ForestParams from_settings(const ForestSettings& s, uint64_t seed) {
        return ForestParams{s.n_trees, s.max_depth, s.min_samples_leaf, s.histogram_bins, seed};
    }
};

/// One CART node. feature < 0 marks a leaf; `value` is then an index into the
/// tree's flat leaf-probability array, otherwise the split threshold
/// (x < threshold goes left).
struct TreeNode {
    int32_t feature = -1;
    float threshold = 0.0f;
    int32_t left = -1;
    int32_t right = -1;
    int32_t leaf = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::vector<float> leaf_probs;  // n_leaves x n_classes
};

/// Bootstrap-aggregated Gini CART ensemble. Immutable after training; safe
/// for concurrent prediction.
class ForestModel {
public:
    ForestModel() = default;

    /// Class-probability rows (n x n_classes), averaged over trees.
    std::vector<float> predict_proba(const features::FeatureMatrix& m) const;
    std::vector<float> predict_proba(const float* x, size_t n_rows, size_t n_cols) const;

    /// Argmax with ties broken toward the lowest class index.
    std::vector<int8_t> predict(const features::FeatureMatrix& m) const;

    const std::vector<int>& classes() const { return classes_; }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<Tree>& trees() const { return trees_; }
    const ForestParams& params() const { return params_; }

    nlohmann::json to_json() const;
    static ForestModel from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static ForestModel load(const std::string& path);

    friend ForestModel train_forest(const features::FeatureMatrix&, const ForestParams&);

private:
    ForestParams params_;
    std::vector<int> classes_;          // ascending label values
    std::vector<std::string> columns_;
    std::vector<Tree> trees_;
};

/// Grows params.n_trees CART trees on bootstrap resamples, Gini-impurity
/// splits over ceil(sqrt(d)) candidate columns per node. Thresholds come from
/// per-feature quantile bins computed on the training matrix; stored splits
/// are plain real-valued cutpoints. Deterministic for a fixed seed, with
/// per-tree RNG streams so parallel training is order-independent.
ForestModel train_forest(const features::FeatureMatrix& m, const ForestParams& params);

}  // namespace proxsim::learn
