#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trey/forest/forest.hpp"
#include "trey/ml/dataset.hpp"

namespace trey::boruta {

struct BorutaConfig {
    int max_runs = 100;    // decision-loop cap
    double alpha = 0.01;   // two-sided, Bonferroni-corrected over live features
    int n_repeats = 30;    // distribution-assembly runs over the full table
    forest::ForestConfig forest;
    std::uint64_t seed = 0;
};

enum class Decision { Confirmed, Rejected, Tentative };

std::string to_string(Decision d);

struct FeatureReport {
    std::string name;
    Decision decision = Decision::Tentative;
    int hits = 0;            // runs where z exceeded the max shadow z, while live
    int runs = 0;            // decision runs the feature participated in
    int decided_at_run = 0;  // 0 while tentative
    std::vector<double> z_samples;  // one per distribution run
};

struct ImportanceReport {
    std::vector<FeatureReport> features;
    std::vector<double> shadow_min_z;   // per distribution run
    std::vector<double> shadow_mean_z;
    std::vector<double> shadow_max_z;
    int decision_runs = 0;
    int distribution_runs = 0;

    const FeatureReport& feature(const std::string& name) const;
};

// All-relevant feature selection. Each decision run appends one freshly
// shuffled shadow per live feature, trains a forest, standardizes
// permutation importances to z = mean / (sd / sqrt(n_trees)), and records a
// hit for every feature whose z beats the best shadow. Binomial tests decide
// Confirmed/Rejected; rejected features drop out of later runs. A second
// phase of n_repeats full-table runs assembles the z distributions reported
// for every feature.
ImportanceReport run_boruta(const ml::Dataset& data, const BorutaConfig& config,
                            int threads = 1);

// Long-format distribution rows (feature,run,z), shadow aggregates included
// as pseudo-features shadow_min / shadow_mean / shadow_max.
std::string importance_distribution_csv(const ImportanceReport& report);

// Per-feature summary: feature,decision,hits,runs,median_z.
std::string decision_summary_csv(const ImportanceReport& report);

// Exact binomial tail probabilities at p = 1/2.
double binom_tail_ge(int n, int k);
double binom_tail_le(int n, int k);

// Within-column shuffle used for shadow features; exposed for tests.
Eigen::VectorXd make_shadow(const Eigen::VectorXd& source, util::Rng& rng);

}  // namespace trey::boruta
