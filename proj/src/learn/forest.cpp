#include "learn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace proxsim::learn {

namespace {

struct BinnedData {
    size_t n_rows = 0;
    size_t n_cols = 0;
    std::vector<uint8_t> bins;                   // row-major
    std::vector<std::vector<float>> edges;       // per feature, ascending
    uint8_t bin_of(size_t r, size_t c) const { return bins[r * n_cols + c]; }
};

/// Quantile bin edges per feature from a strided subsample; bin(x) counts
/// edges <= x, so "bin <= b" is exactly "x < edges[b]".
BinnedData bin_matrix(const features::FeatureMatrix& m, int n_bins) {
    BinnedData b;
    b.n_rows = m.n_rows;
    b.n_cols = m.n_cols;
    b.edges.resize(m.n_cols);
    b.bins.resize(m.n_rows * m.n_cols);

    const size_t max_sample = 1 << 18;
    const size_t stride = std::max<size_t>(1, m.n_rows / max_sample);
    std::vector<float> vals;
    for (size_t c = 0; c < m.n_cols; ++c) {
        vals.clear();
        for (size_t r = 0; r < m.n_rows; r += stride) vals.push_back(m.at(r, c));
        std::sort(vals.begin(), vals.end());
        std::vector<float>& edges = b.edges[c];
        for (int q = 1; q < n_bins; ++q) {
            const float e = vals[static_cast<size_t>(q) * vals.size() / static_cast<size_t>(n_bins)];
            if (edges.empty() || e > edges.back()) edges.push_back(e);
        }
    }
    parallel_for(m.n_rows, [&](size_t r) {
        for (size_t c = 0; c < m.n_cols; ++c) {
            const auto& e = b.edges[c];
            const float x = m.at(r, c);
            const size_t bin = std::upper_bound(e.begin(), e.end(), x) - e.begin();
            b.bins[r * m.n_cols + c] = static_cast<uint8_t>(bin);
        }
    });
    return b;
}

double gini(const std::vector<int64_t>& counts, int64_t total) {
    if (total == 0) return 0.0;
    double s = 0.0;
    for (int64_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        s += p * p;
    }
    return 1.0 - s;
}

struct NodeTask {
    size_t begin, end;  // range in the tree's row-index array
    int depth;
    int32_t node_id;
};

Tree grow_tree(const BinnedData& data, const std::vector<int8_t>& y_idx, size_t n_classes,
               const ForestParams& params, Rng& rng) {
    const size_t n = data.n_rows;
    const size_t d = data.n_cols;
    const size_t m_try = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

    // Bootstrap resample.
    std::vector<uint32_t> rows(n);
    for (size_t i = 0; i < n; ++i)
        rows[i] = static_cast<uint32_t>(rng.u01() * static_cast<double>(n));

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<NodeTask> stack{{0, n, 0, 0}};
    std::vector<size_t> feat_pool(d);
    for (size_t i = 0; i < d; ++i) feat_pool[i] = i;
    std::vector<int64_t> hist(static_cast<size_t>(256) * n_classes);
    std::vector<int64_t> node_counts(n_classes), left_counts(n_classes);

    while (!stack.empty()) {
        const NodeTask task = stack.back();
        stack.pop_back();
        const size_t count = task.end - task.begin;

        std::fill(node_counts.begin(), node_counts.end(), 0);
        for (size_t i = task.begin; i < task.end; ++i) node_counts[y_idx[rows[i]]]++;
        const double node_gini = gini(node_counts, static_cast<int64_t>(count));

        auto make_leaf = [&] {
            TreeNode& leaf = tree.nodes[task.node_id];
            leaf.feature = -1;
            leaf.leaf = static_cast<int32_t>(tree.leaf_probs.size() / n_classes);
            for (size_t k = 0; k < n_classes; ++k)
                tree.leaf_probs.push_back(
                    static_cast<float>(static_cast<double>(node_counts[k]) /
                                       static_cast<double>(count)));
        };

        if (task.depth >= params.max_depth || count < 2 * static_cast<size_t>(params.min_samples_leaf) ||
            node_gini == 0.0) {
            make_leaf();
            continue;
        }

        // Candidate features without replacement.
        for (size_t j = 0; j < m_try; ++j) {
            const size_t k = j + static_cast<size_t>(rng.u01() * static_cast<double>(d - j));
            std::swap(feat_pool[j], feat_pool[std::min(k, d - 1)]);
        }

        int best_feat = -1;
        int best_bin = -1;
        double best_score = node_gini - 1e-12;
        for (size_t j = 0; j < m_try; ++j) {
            const size_t f = feat_pool[j];
            const size_t n_edges = data.edges[f].size();
            if (n_edges == 0) continue;
            std::fill(hist.begin(), hist.begin() + static_cast<long>((n_edges + 1) * n_classes), 0);
            for (size_t i = task.begin; i < task.end; ++i) {
                const uint32_t r = rows[i];
                hist[data.bin_of(r, f) * n_classes + y_idx[r]]++;
            }
            std::fill(left_counts.begin(), left_counts.end(), 0);
            int64_t n_left = 0;
            for (size_t b = 0; b < n_edges; ++b) {
                for (size_t k = 0; k < n_classes; ++k) {
                    left_counts[k] += hist[b * n_classes + k];
                }
                n_left = 0;
                for (int64_t c : left_counts) n_left += c;
                const int64_t n_right = static_cast<int64_t>(count) - n_left;
                if (n_left < params.min_samples_leaf || n_right < params.min_samples_leaf) continue;
                double g_right = 0.0;
                {
                    double s_l = 0.0, s_r = 0.0;
                    for (size_t k = 0; k < n_classes; ++k) {
                        const double cl = static_cast<double>(left_counts[k]);
                        const double cr = static_cast<double>(node_counts[k]) - cl;
                        s_l += cl * cl;
                        s_r += cr * cr;
                    }
                    const double gl = 1.0 - s_l / (static_cast<double>(n_left) * n_left);
                    const double gr = 1.0 - s_r / (static_cast<double>(n_right) * n_right);
                    g_right = (static_cast<double>(n_left) * gl + static_cast<double>(n_right) * gr) /
                              static_cast<double>(count);
                }
                if (g_right < best_score) {
                    best_score = g_right;
                    best_feat = static_cast<int>(f);
                    best_bin = static_cast<int>(b);
                }
            }
        }

        if (best_feat < 0) {
            make_leaf();
            continue;
        }

        // Partition node rows on the chosen bin.
        const auto mid_it = std::partition(rows.begin() + static_cast<long>(task.begin),
                                           rows.begin() + static_cast<long>(task.end),
                                           [&](uint32_t r) {
                                               return data.bin_of(r, static_cast<size_t>(best_feat)) <=
                                                      static_cast<uint8_t>(best_bin);
                                           });
        const size_t mid = static_cast<size_t>(mid_it - rows.begin());

        const int32_t left_id = static_cast<int32_t>(tree.nodes.size());
        const int32_t right_id = left_id + 1;
        {
            TreeNode& node = tree.nodes[task.node_id];
            node.feature = best_feat;
            node.threshold =
                data.edges[static_cast<size_t>(best_feat)][static_cast<size_t>(best_bin)];
            node.left = left_id;
            node.right = right_id;
        }
        tree.nodes.emplace_back();  // may reallocate; node reference is dead now
        tree.nodes.emplace_back();
        stack.push_back({task.begin, mid, task.depth + 1, left_id});
        stack.push_back({mid, task.end, task.depth + 1, right_id});
    }
    return tree;
}

}  // namespace

ForestModel train_forest(const features::FeatureMatrix& m, const ForestParams& params) {
    require(m.n_rows > 0 && m.n_cols > 0, ErrorKind::Invalid, "train_forest: empty matrix");
    require(m.labels.size() == m.n_rows, ErrorKind::Invalid, "train_forest: label length mismatch");
    require(params.n_trees >= 1 && params.max_depth >= 1, ErrorKind::Invalid,
            "train_forest: bad params");

    ForestModel model;
    model.params_ = params;
    model.columns_ = m.columns;

    // Class list: ascending distinct labels.
    std::vector<int> classes(m.labels.begin(), m.labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    model.classes_ = classes;
    const size_t n_classes = classes.size();
    std::vector<int8_t> y_idx(m.n_rows);
    for (size_t i = 0; i < m.n_rows; ++i) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), m.labels[i]);
        y_idx[i] = static_cast<int8_t>(it - classes.begin());
    }

    const BinnedData data = bin_matrix(m, params.histogram_bins);
    model.trees_.resize(static_cast<size_t>(params.n_trees));
    parallel_for(static_cast<size_t>(params.n_trees), [&](size_t t) {
        Rng rng(derive_seed(params.seed, t, 0x7ee5));
        model.trees_[t] = grow_tree(data, y_idx, n_classes, params, rng);
    });
    return model;
}

std::vector<float> ForestModel::predict_proba(const float* x, size_t n_rows, size_t n_cols) const {
    require(n_cols == columns_.size(), ErrorKind::Invalid,
            "predict_proba: column count mismatch with the model manifest");
    const size_t k = classes_.size();
    std::vector<float> out(n_rows * k, 0.0f);
    const float inv = 1.0f / static_cast<float>(trees_.size());
    parallel_for(n_rows, [&](size_t r) {
        const float* row = x + r * n_cols;
        float* dst = out.data() + r * k;
        for (const Tree& tree : trees_) {
            int32_t node = 0;
            while (tree.nodes[static_cast<size_t>(node)].feature >= 0) {
                const TreeNode& nd = tree.nodes[static_cast<size_t>(node)];
                node = row[nd.feature] < nd.threshold ? nd.left : nd.right;
            }
            const TreeNode& leaf = tree.nodes[static_cast<size_t>(node)];
            const float* probs = tree.leaf_probs.data() + static_cast<size_t>(leaf.leaf) * k;
            for (size_t c = 0; c < k; ++c) dst[c] += probs[c];
        }
        for (size_t c = 0; c < k; ++c) dst[c] *= inv;
    });
    return out;
}

std::vector<float> ForestModel::predict_proba(const features::FeatureMatrix& m) const {
    require(m.columns == columns_, ErrorKind::Invalid,
            "predict_proba: feature columns do not match the model manifest");
    return predict_proba(m.x.data(), m.n_rows, m.n_cols);
}

std::vector<int8_t> ForestModel::predict(const features::FeatureMatrix& m) const {
    const std::vector<float> probs = predict_proba(m);
    const size_t k = classes_.size();
    std::vector<int8_t> out(m.n_rows);
    for (size_t r = 0; r < m.n_rows; ++r) {
        size_t best = 0;
        for (size_t c = 1; c < k; ++c)
            if (probs[r * k + c] > probs[r * k + best]) best = c;  // ties -> lowest index
        out[r] = static_cast<int8_t>(classes_[best]);
    }
    return out;
}

nlohmann::json ForestModel::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kForestSchema;
    j["classes"] = classes_;
    j["columns"] = columns_;
    j["params"] = {{"n_trees", params_.n_trees},
                   {"max_depth", params_.max_depth},
                   {"min_samples_leaf", params_.min_samples_leaf},
                   {"histogram_bins", params_.histogram_bins},
                   {"seed", params_.seed}};
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& t : trees_) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const TreeNode& n : t.nodes)
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf});
        trees.push_back({{"nodes", std::move(nodes)}, {"leaf_probs", t.leaf_probs}});
    }
    j["trees"] = std::move(trees);
    return j;
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
    const std::string schema = j.value("schema_version", "");
    require(schema == kForestSchema, ErrorKind::Invalid,
            "forest schema mismatch: '" + schema + "'");
    ForestModel m;
    m.classes_ = j.at("classes").get<std::vector<int>>();
    m.columns_ = j.at("columns").get<std::vector<std::string>>();
    const auto& p = j.at("params");
    m.params_ = ForestParams{p.at("n_trees").get<int>(), p.at("max_depth").get<int>(),
                             p.at("min_samples_leaf").get<int>(), p.at("histogram_bins").get<int>(),
                             p.at("seed").get<uint64_t>()};
    for (const auto& tj : j.at("trees")) {
        Tree t;
        for (const auto& nj : tj.at("nodes")) {
            TreeNode n;
            n.feature = nj.at(0).get<int32_t>();
            n.threshold = nj.at(1).get<float>();
            n.left = nj.at(2).get<int32_t>();
            n.right = nj.at(3).get<int32_t>();
            n.leaf = nj.at(4).get<int32_t>();
            t.nodes.push_back(n);
        }
        t.leaf_probs = tj.at("leaf_probs").get<std::vector<float>>();
        m.trees_.push_back(std::move(t));
    }
    return m;
}

void ForestModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write model: " + path);
    out << to_json().dump() << "\n";
}

ForestModel ForestModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot read model: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw_io("model parse error: " + std::string(e.what()));
    }
    return from_json(j);
}

}  // namespace proxsim::learn
