#include "trey/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace trey::ml {

double Tree::predict_row(const Eigen::MatrixXd& x, int row) const {
    int node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& n = nodes[node];
        node = x(row, n.feature) < n.threshold ? n.left : n.right;
    }
    return nodes[node].value;
}

double Tree::predict(const Eigen::VectorXd& row) const {
    int node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& n = nodes[node];
        node = row(n.feature) < n.threshold ? n.left : n.right;
    }
    return nodes[node].value;
}

double Tree::predict_row_override(const Eigen::MatrixXd& x, int row, int override_col,
                                  double override_value) const {
    int node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& n = nodes[node];
        const double v = n.feature == override_col ? override_value : x(row, n.feature);
        node = v < n.threshold ? n.left : n.right;
    }
    return nodes[node].value;
}

std::vector<bool> Tree::features_used(int n_features) const {
    std::vector<bool> used(n_features, false);
    for (const auto& n : nodes)
        if (n.feature >= 0) used[n.feature] = true;
    return used;
}

TreeBuilder::TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, TreeParams params)
    : x_(x), y_(y), params_(params), n_cols_(static_cast<int>(x.cols())) {
    order_.resize(n_cols_);
    side_.resize(static_cast<std::size_t>(x.rows()), 0);
}

namespace {

inline double gini(double n, double pos) {
    const double p = pos / n;
    const double q = 1.0 - p;
    return 1.0 - p * p - q * q;
}

}  // namespace

// out_aux: Gini -> positive count; SSE -> sum of y.
double TreeBuilder::node_impurity_stats(int lo, int hi, double* out_aux) const {
    const auto& ord = order_[0];
    if (params_.criterion == SplitCriterion::Gini) {
        double pos = 0.0;
        for (int k = lo; k < hi; ++k) pos += y_(ord[k]) > 0.5 ? 1.0 : 0.0;
        *out_aux = pos;
        return gini(static_cast<double>(hi - lo), pos);
    }
    double sum = 0.0, sumsq = 0.0;
    for (int k = lo; k < hi; ++k) {
        const double v = y_(ord[k]);
        sum += v;
        sumsq += v * v;
    }
    *out_aux = sum;
    return sumsq - sum * sum / static_cast<double>(hi - lo);  // node SSE
}

void TreeBuilder::scan_column(int col, int lo, int hi, SplitChoice& best) const {
    const auto& ord = order_[col];
    const int n = hi - lo;
    const double nd = static_cast<double>(n);

    if (params_.criterion == SplitCriterion::Gini) {
        double total_pos = 0.0;
        for (int k = lo; k < hi; ++k) total_pos += y_(ord[k]) > 0.5 ? 1.0 : 0.0;
        const double parent = gini(nd, total_pos);

        double left_n = 0.0, left_pos = 0.0;
        double prev_v = x_(ord[lo], col);
        for (int k = lo; k < hi; ++k) {
            const int row = ord[k];
            const double v = x_(row, col);
            if (k > lo && v > prev_v) {
                const double right_n = nd - left_n;
                if (left_n >= params_.min_leaf && right_n >= params_.min_leaf) {
                    const double thr = (prev_v + v) * 0.5;
                    if (thr > prev_v) {
                        const double gain = parent - (left_n / nd) * gini(left_n, left_pos) -
                                            (right_n / nd) * gini(right_n, total_pos - left_pos);
                        if (gain > best.gain) best = {col, thr, gain};
                    }
                }
                prev_v = v;
            }
            left_n += 1.0;
            left_pos += y_(row) > 0.5 ? 1.0 : 0.0;
        }
    } else {
        double total_sum = 0.0, total_sumsq = 0.0;
        for (int k = lo; k < hi; ++k) {
            const double yv = y_(ord[k]);
            total_sum += yv;
            total_sumsq += yv * yv;
        }
        const double parent_sse = total_sumsq - total_sum * total_sum / nd;

        double left_n = 0.0, left_sum = 0.0, left_sumsq = 0.0;
        double prev_v = x_(ord[lo], col);
        for (int k = lo; k < hi; ++k) {
            const int row = ord[k];
            const double v = x_(row, col);
            if (k > lo && v > prev_v) {
                const double right_n = nd - left_n;
                if (left_n >= params_.min_leaf && right_n >= params_.min_leaf) {
                    const double thr = (prev_v + v) * 0.5;
                    if (thr > prev_v) {
                        const double left_sse = left_sumsq - left_sum * left_sum / left_n;
                        const double rs = total_sum - left_sum;
                        const double right_sse =
                            (total_sumsq - left_sumsq) - rs * rs / right_n;
                        const double gain = parent_sse - left_sse - right_sse;
                        if (gain > best.gain) best = {col, thr, gain};
                    }
                }
                prev_v = v;
            }
            const double yv = y_(row);
            left_n += 1.0;
            left_sum += yv;
            left_sumsq += yv * yv;
        }
    }
}

TreeBuilder::SplitChoice TreeBuilder::best_split(int lo, int hi, util::Rng& rng) {
    SplitChoice best;  // gain 0: only strictly positive gains are splits

    int n_candidates = params_.mtry;
    if (n_candidates <= 0 || n_candidates > n_cols_) n_candidates = n_cols_;

    candidate_cols_.resize(n_cols_);
    std::iota(candidate_cols_.begin(), candidate_cols_.end(), 0);
    if (n_candidates < n_cols_) {
        // partial Fisher-Yates, then ascending order so gain ties resolve to
        // the lowest column index
        for (int i = 0; i < n_candidates; ++i) {
            int j = i + rng.below_int(n_cols_ - i);
            std::swap(candidate_cols_[i], candidate_cols_[j]);
        }
        candidate_cols_.resize(n_candidates);
        std::sort(candidate_cols_.begin(), candidate_cols_.end());
    }

    for (int col : candidate_cols_) scan_column(col, lo, hi, best);
    return best;
}

void TreeBuilder::partition(int lo, int hi, int split_col, double threshold, int* out_mid) {
    // Mark sides once per row id (bootstrap duplicates share the row id).
    int left_count = 0;
    for (int k = lo; k < hi; ++k) {
        const int row = order_[split_col][k];
        const bool left = x_(row, split_col) < threshold;
        side_[row] = left ? 1 : 0;
        if (left) ++left_count;
    }
    // Stable two-way split of every column segment keeps each sorted.
    scratch_left_.clear();
    scratch_right_.clear();
    for (int c = 0; c < n_cols_; ++c) {
        auto& ord = order_[c];
        scratch_left_.clear();
        scratch_right_.clear();
        for (int k = lo; k < hi; ++k) {
            if (side_[ord[k]]) scratch_left_.push_back(ord[k]);
            else scratch_right_.push_back(ord[k]);
        }
        std::copy(scratch_left_.begin(), scratch_left_.end(), ord.begin() + lo);
        std::copy(scratch_right_.begin(), scratch_right_.end(),
                  ord.begin() + lo + static_cast<int>(scratch_left_.size()));
    }
    *out_mid = lo + left_count;
}

double TreeBuilder::leaf_value(int lo, int hi) const {
    const auto& ord = order_[0];
    double acc = 0.0;
    if (params_.criterion == SplitCriterion::Gini) {
        for (int k = lo; k < hi; ++k) acc += y_(ord[k]) > 0.5 ? 1.0 : 0.0;
    } else {
        for (int k = lo; k < hi; ++k) acc += y_(ord[k]);
    }
    return acc / static_cast<double>(hi - lo);
}

Tree TreeBuilder::build(std::span<const int> rows, util::Rng& rng) {
    if (rows.empty()) throw std::invalid_argument("build_tree: no rows");
    const int n = static_cast<int>(rows.size());

    for (int c = 0; c < n_cols_; ++c) {
        auto& ord = order_[c];
        ord.assign(rows.begin(), rows.end());
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            const double va = x_(a, c), vb = x_(b, c);
            return va != vb ? va < vb : a < b;
        });
    }

    nodes_.clear();
    nodes_.push_back(TreeNode{});
    std::vector<Segment> stack;
    stack.push_back({0, n, 0, 0});

    while (!stack.empty()) {
        Segment seg = stack.back();
        stack.pop_back();
        TreeNode& node = nodes_[seg.node];
        node.count = seg.hi - seg.lo;

        bool make_leaf = node.count < 2 * params_.min_leaf ||
                         (params_.max_depth >= 0 && seg.depth >= params_.max_depth);
        if (!make_leaf) {
            double aux = 0.0;
            const double impurity = node_impurity_stats(seg.lo, seg.hi, &aux);
            make_leaf = impurity <= 0.0;  // pure node
        }

        SplitChoice split;
        if (!make_leaf) {
            split = best_split(seg.lo, seg.hi, rng);
            make_leaf = split.col < 0;
        }

        if (make_leaf) {
            node.feature = -1;
            node.value = leaf_value(seg.lo, seg.hi);
            continue;
        }

        int mid = 0;
        partition(seg.lo, seg.hi, split.col, split.threshold, &mid);

        node.feature = split.col;
        node.threshold = split.threshold;
        node.left = static_cast<int>(nodes_.size());
        node.right = node.left + 1;
        nodes_.push_back(TreeNode{});
        nodes_.push_back(TreeNode{});

        const int left_idx = nodes_[seg.node].left;
        const int right_idx = nodes_[seg.node].right;
        stack.push_back({mid, seg.hi, seg.depth + 1, right_idx});
        stack.push_back({seg.lo, mid, seg.depth + 1, left_idx});
    }

    Tree tree;
    tree.nodes = std::move(nodes_);
    nodes_.clear();
    return tree;
}

}  // namespace trey::ml
