#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "trey/core/types.hpp"
#include "trey/ml/dataset.hpp"

namespace trey::features {

// Per-play strategy features of the make-miss model, in fixed column order.
// W = play window, R = release moment.
inline const std::vector<std::string>& feature_columns() {
    static const std::vector<std::string> cols = {
        "ndd_median",         // median shooter-to-nearest-defender distance over W
        "ndd_min",
        "ndd_mean",
        "ndd_release",
        "off_hull_area_mean", // mean 5-player offensive hull area over W
        "def_hull_area_mean",
        "ball_path_len",
        "ball_mean_speed",
        "touch_changes",      // nearest-offensive-player handoffs (hysteresis-debounced)
        "shooter_path_len",
        "shot_clock_release", // 24.0 when absent
        "game_clock_release",
        "period",
        "shot_dist",
        "corner_flag",
        "height_diff_cm",     // shooter minus nearest defender at R
        "weight_diff_kg",
        "exp_diff_yr",
        "pos_match",
        "shooter_enc",        // out-of-fold smoothed make rate
    };
    return cols;
}

inline constexpr int kShooterEncColumn = 19;
// Aggregate means for the player model cover everything before shooter_enc.
inline constexpr int kAggregateColumns = 19;

struct FeatureVector {
    Eigen::VectorXd values;  // aligned with feature_columns()
    bool made = false;

    double operator[](const std::string& name) const;
};

struct PlayKey {
    std::string game_id;
    long event_id = 0;
    std::string shooter_id;
};

struct FeatureTable {
    std::vector<std::string> columns;
    Eigen::MatrixXd x;      // n_plays x columns
    Eigen::VectorXd made;   // 0/1 target
    std::vector<PlayKey> keys;

    int n_rows() const { return static_cast<int>(x.rows()); }
    int column_index(const std::string& name) const;

    // Forest/Boruta view: features as given, made as the target.
    ml::Dataset to_dataset() const;
};

struct FeatureConfig {
    int encode_folds = 5;
    double encode_smoothing = 10.0;  // pseudo-attempts of the global rate
    double touch_hysteresis_ft = 1.5;
    core::CourtSpec court;
};

struct ExtractStats {
    int plays_dropped = 0;
    int missing_bio = 0;
};

using BioIndex = std::map<std::string, core::PlayerBio>;

// Computes every feature except shooter_enc (filled by encode_shooters).
// Throws when the window has fewer than 2 frames.
FeatureVector extract_features(const core::ThreePointPlay& play, const BioIndex& bios,
                               const FeatureConfig& config, ExtractStats* stats = nullptr);

// Deterministic fold id from the play key; folds never depend on row order.
int fold_of(const std::string& game_id, long event_id, int folds);

// Fills shooter_enc with (makes_excl + m * global_rate) / (attempts_excl + m)
// where the shooter's counts exclude the row's own fold.
void encode_shooters(FeatureTable& table, int folds, double smoothing);

// One row per play that extracts cleanly; failing plays are dropped and
// counted. Throws "empty dataset" when nothing remains.
FeatureTable assemble_dataset(const std::vector<core::ThreePointPlay>& plays,
                              const BioIndex& bios, const FeatureConfig& config,
                              ExtractStats* stats = nullptr);

// CSV: feature columns, made, then game_id,event_id,shooter_id; floats with
// six decimals.
std::string feature_table_csv(const FeatureTable& table);
FeatureTable load_feature_table_csv(const std::filesystem::path& path);
FeatureTable parse_feature_table_csv(const std::string& content, const std::string& source_name);

}  // namespace trey::features
