#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trey/ml/dataset.hpp"
#include "trey/ml/tree.hpp"

namespace trey::forest {

struct ForestConfig {
    int n_trees = 500;
    int mtry = 0;  // 0 resolves to floor(sqrt(n_features)) at training time
    int min_leaf = 5;
    int max_depth = -1;  // unlimited
    std::uint64_t seed = 0;
};

// Bagged Gini decision trees over a binary 0/1 target. Per-tree RNG streams
// are derived from (seed, tree index), so the result is identical for any
// thread count.
struct Forest {
    ForestConfig config;  // with mtry resolved
    std::vector<std::string> columns;
    std::vector<ml::Tree> trees;
    std::vector<std::vector<int>> oob_rows;  // per tree, ascending row ids

    // Mean of per-tree leaf positive-class fractions, in [0,1].
    double predict_proba(const Eigen::VectorXd& row) const;
    double predict_proba_row(const Eigen::MatrixXd& x, int row) const;
    // Validates the row by column name; throws naming any missing column.
    double predict_proba_named(const std::map<std::string, double>& row) const;
};

Forest train_forest(const ml::Dataset& data, const ForestConfig& config, int threads = 1);

// OOB accuracy over rows that are out-of-bag for at least one tree.
double oob_accuracy(const Forest& forest, const ml::Dataset& data);

struct ImportanceResult {
    Eigen::MatrixXd per_tree;  // n_trees x n_features error increases
    Eigen::VectorXd mean;      // over trees
    Eigen::VectorXd sd;        // sample sd over trees
};

// Breiman permutation importance: per tree, the increase in OOB
// misclassification rate when one feature is shuffled within the OOB rows.
ImportanceResult permutation_importance(const Forest& forest, const ml::Dataset& data,
                                        std::uint64_t seed, int threads = 1);

// Versioned JSON document (config + flat node arrays). Debug/inspection aid.
std::string forest_to_json(const Forest& forest);

}  // namespace trey::forest
