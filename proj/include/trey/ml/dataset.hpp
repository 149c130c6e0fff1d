#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace trey::ml {

// Dense numeric training table: one column per named feature, one target.
struct Dataset {
    Eigen::MatrixXd x;  // n_rows x n_features
    Eigen::VectorXd y;
    std::vector<std::string> columns;

    int n_rows() const { return static_cast<int>(x.rows()); }
    int n_cols() const { return static_cast<int>(x.cols()); }

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw std::runtime_error("missing column: " + name);
    }
};

}  // namespace trey::ml
