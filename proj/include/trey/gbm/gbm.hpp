#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trey/ml/dataset.hpp"
#include "trey/ml/tree.hpp"

namespace trey::gbm {

struct GbmConfig {
    int n_iters = 300;
    double learning_rate = 0.05;
    int max_depth = 3;
    int min_leaf = 3;
    double subsample = 0.8;  // row fraction per iteration, sampled without replacement
    std::uint64_t seed = 0;
};

// Squared-error gradient boosting: F_t = F_{t-1} + lr * tree_t where tree_t
// is a variance-reduction regression tree fit to residuals.
struct GbmModel {
    GbmConfig config;
    std::vector<std::string> columns;
    double base = 0.0;  // training-target mean
    std::vector<ml::Tree> trees;

    double predict(const Eigen::VectorXd& row) const;
    double predict_row(const Eigen::MatrixXd& x, int row) const;
    double predict_named(const std::map<std::string, double>& row) const;
};

GbmModel train_gbm(const ml::Dataset& data, const GbmConfig& config);

// (rmse, r2) with SST about the mean of y_true. SST == 0 maps to r2 = 1 when
// SSE == 0 and -inf otherwise.
std::pair<double, double> rmse_r2(const std::vector<double>& y_true,
                                  const std::vector<double>& y_pred);

std::string gbm_to_json(const GbmModel& model);

}  // namespace trey::gbm
