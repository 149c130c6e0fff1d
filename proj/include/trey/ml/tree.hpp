#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "trey/util/rng.hpp"

namespace trey::ml {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf payload: positive fraction (Gini) or mean target (SSE)
    int count = 0;       // training rows (bootstrap multiplicity included)
};

struct Tree {
    std::vector<TreeNode> nodes;

    bool empty() const { return nodes.empty(); }

    // Traverses with the row's stored feature values.
    double predict_row(const Eigen::MatrixXd& x, int row) const;
    double predict(const Eigen::VectorXd& row) const;

    // Same traversal with feature `override_col` read from `override_value`
    // instead of the matrix. Used by OOB permutation importance.
    double predict_row_override(const Eigen::MatrixXd& x, int row, int override_col,
                                double override_value) const;

    std::vector<bool> features_used(int n_features) const;
};

enum class SplitCriterion { Gini, Sse };

struct TreeParams {
    SplitCriterion criterion = SplitCriterion::Gini;
    int min_leaf = 1;
    int max_depth = -1;  // -1 = unlimited
    int mtry = 0;        // columns sampled per node; 0 = all
};

// Deterministic CART builder over pre-sorted per-column row orderings.
// Rows are given as a multiset (bootstrap duplicates repeat); each column
// keeps its segment sorted across splits, so split search is a linear scan.
// Ties in gain resolve to the lowest column index, then lowest threshold.
class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, TreeParams params);

    Tree build(std::span<const int> rows, util::Rng& rng);

private:
    struct Segment {
        int lo, hi, depth, node;
    };
    struct SplitChoice {
        int col = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    double node_impurity_stats(int lo, int hi, double* out_aux) const;
    SplitChoice best_split(int lo, int hi, util::Rng& rng);
    void scan_column(int col, int lo, int hi, SplitChoice& best) const;
    void partition(int lo, int hi, int split_col, double threshold, int* out_mid);
    double leaf_value(int lo, int hi) const;

    const Eigen::MatrixXd& x_;
    const Eigen::VectorXd& y_;
    TreeParams params_;
    int n_cols_;

    // order_[c] holds the current row multiset sorted by column c; segments
    // [lo,hi) are aligned across all columns.
    std::vector<std::vector<int>> order_;
    std::vector<int> scratch_left_;
    std::vector<int> scratch_right_;
    std::vector<int> candidate_cols_;
    std::vector<char> side_;  // per row id: 1 = left of current split
    std::vector<TreeNode> nodes_;
};

}  // namespace trey::ml
