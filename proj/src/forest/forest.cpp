#include "trey/forest/forest.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

#include "trey/util/parallel.hpp"
#include "trey/util/rng.hpp"

namespace trey::forest {

double Forest::predict_proba(const Eigen::VectorXd& row) const {
    double acc = 0.0;
    for (const auto& t : trees) acc += t.predict(row);
    return acc / static_cast<double>(trees.size());
}

double Forest::predict_proba_row(const Eigen::MatrixXd& x, int row) const {
    double acc = 0.0;
    for (const auto& t : trees) acc += t.predict_row(x, row);
    return acc / static_cast<double>(trees.size());
}

double Forest::predict_proba_named(const std::map<std::string, double>& row) const {
    Eigen::VectorXd v(static_cast<int>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
        auto it = row.find(columns[i]);
        if (it == row.end())
            throw std::runtime_error("predict: missing column '" + columns[i] + "'");
        v(static_cast<int>(i)) = it->second;
    }
    return predict_proba(v);
}

Forest train_forest(const ml::Dataset& data, const ForestConfig& config, int threads) {
    const int n = data.n_rows();
    const int p = data.n_cols();
    if (n < 2) throw std::invalid_argument("train_forest: need at least 2 rows");
    if (config.n_trees < 1) throw std::invalid_argument("train_forest: n_trees must be >= 1");

    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) (data.y(i) > 0.5 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw std::invalid_argument("train_forest: degenerate target");

    Forest forest;
    forest.config = config;
    if (forest.config.mtry <= 0)
        forest.config.mtry = std::max(1, static_cast<int>(std::floor(std::sqrt(p))));
    forest.config.mtry = std::min(forest.config.mtry, p);
    forest.columns = data.columns;
    forest.trees.resize(config.n_trees);
    forest.oob_rows.resize(config.n_trees);

    ml::TreeParams params;
    params.criterion = ml::SplitCriterion::Gini;
    params.min_leaf = config.min_leaf;
    params.max_depth = config.max_depth;
    params.mtry = forest.config.mtry;

    util::parallel_for(config.n_trees, threads, [&](int t) {
        util::Rng rng(util::derive_seed(config.seed, "forest-tree", static_cast<std::uint64_t>(t)));
        std::vector<int> slots(n);
        std::vector<bool> in_bag(n, false);
        for (int i = 0; i < n; ++i) {
            int r = rng.below_int(n);
            slots[i] = r;
            in_bag[r] = true;
        }
        std::vector<int> oob;
        for (int i = 0; i < n; ++i)
            if (!in_bag[i]) oob.push_back(i);

        ml::TreeBuilder builder(data.x, data.y, params);
        forest.trees[t] = builder.build(slots, rng);
        forest.oob_rows[t] = std::move(oob);
    });

    return forest;
}

double oob_accuracy(const Forest& forest, const ml::Dataset& data) {
    const int n = data.n_rows();
    std::vector<double> vote_sum(n, 0.0);
    std::vector<int> vote_count(n, 0);
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        for (int row : forest.oob_rows[t]) {
            vote_sum[row] += forest.trees[t].predict_row(data.x, row);
            vote_count[row]++;
        }
    }
    int covered = 0, correct = 0;
    for (int i = 0; i < n; ++i) {
        if (vote_count[i] == 0) continue;
        ++covered;
        const bool pred = vote_sum[i] / vote_count[i] > 0.5;
        if (pred == (data.y(i) > 0.5)) ++correct;
    }
    if (covered == 0) throw std::runtime_error("oob_accuracy: no out-of-bag rows");
    return static_cast<double>(correct) / covered;
}

namespace {

double tree_oob_error(const ml::Tree& tree, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const std::vector<int>& oob) {
    int wrong = 0;
    for (int row : oob) {
        const bool pred = tree.predict_row(x, row) > 0.5;
        if (pred != (y(row) > 0.5)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(oob.size());
}

}  // namespace

ImportanceResult permutation_importance(const Forest& forest, const ml::Dataset& data,
                                        std::uint64_t seed, int threads) {
    const int n_trees = static_cast<int>(forest.trees.size());
    const int p = data.n_cols();

    ImportanceResult result;
    result.per_tree = Eigen::MatrixXd::Zero(n_trees, p);

    util::parallel_for(n_trees, threads, [&](int t) {
        const auto& tree = forest.trees[t];
        const auto& oob = forest.oob_rows[t];
        if (oob.empty()) return;  // contributes exact zeros

        util::Rng rng(util::derive_seed(seed, "perm-tree", static_cast<std::uint64_t>(t)));
        const auto used = tree.features_used(p);
        const double base_err = tree_oob_error(tree, data.x, data.y, oob);

        std::vector<double> shuffled(oob.size());
        for (int j = 0; j < p; ++j) {
            // A feature the tree never splits on cannot change predictions.
            if (!used[j]) continue;
            for (std::size_t k = 0; k < oob.size(); ++k) shuffled[k] = data.x(oob[k], j);
            rng.shuffle(std::span<double>(shuffled));
            int wrong = 0;
            for (std::size_t k = 0; k < oob.size(); ++k) {
                const int row = oob[k];
                const bool pred = tree.predict_row_override(data.x, row, j, shuffled[k]) > 0.5;
                if (pred != (data.y(row) > 0.5)) ++wrong;
            }
            const double perm_err = static_cast<double>(wrong) / static_cast<double>(oob.size());
            result.per_tree(t, j) = perm_err - base_err;
        }
    });

    result.mean = result.per_tree.colwise().mean();
    result.sd = Eigen::VectorXd::Zero(p);
    if (n_trees > 1) {
        for (int j = 0; j < p; ++j) {
            double acc = 0.0;
            for (int t = 0; t < n_trees; ++t) {
                const double d = result.per_tree(t, j) - result.mean(j);
                acc += d * d;
            }
            result.sd(j) = std::sqrt(acc / static_cast<double>(n_trees - 1));
        }
    }
    return result;
}

std::string forest_to_json(const Forest& forest) {
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    doc["config"] = {{"n_trees", forest.config.n_trees},
                     {"mtry", forest.config.mtry},
                     {"min_leaf", forest.config.min_leaf},
                     {"max_depth", forest.config.max_depth},
                     {"seed", forest.config.seed}};
    doc["columns"] = forest.columns;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& t : forest.trees) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const auto& n : t.nodes)
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.count});
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    doc["trees"] = std::move(trees);
    return doc.dump();
}

}  // namespace trey::forest
