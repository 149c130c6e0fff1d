#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trey/features/features.hpp"
#include "trey/gbm/gbm.hpp"

namespace trey::player {

struct PlayerModelConfig {
    int min_attempts = 20;      // floor below which a player is not scored
    double test_fraction = 0.2;
    int top_k = 10;
    gbm::GbmConfig gbm;
    std::uint64_t seed = 0;
};

struct GamesIndexEntry {
    std::string name;
    int games_played = 0;  // games with the player present in tracking
};
using GamesIndex = std::map<std::string, GamesIndexEntry>;

// One observation per shooter: play counts plus the mean of every numeric
// play feature (made and shooter_enc excluded).
struct PlayerAggregate {
    std::string player_id;
    std::string name;
    int games_played = 0;
    int attempts_total = 0;
    int makes_total = 0;
    double actual_3pa_per_game = 0.0;
    double three_pct = 0.0;
    Eigen::VectorXd feature_means;
};

struct AggregateResult {
    std::vector<PlayerAggregate> players;       // ascending player_id
    std::vector<std::string> feature_names;
    std::vector<std::string> filtered_players;  // below min_attempts
};

AggregateResult aggregate_players(const features::FeatureTable& table, const GamesIndex& games,
                                  const PlayerModelConfig& config);

// Deterministic seeded shuffle into disjoint, exhaustive (train, holdout)
// sets. Throws below 10 aggregates.
std::pair<std::vector<PlayerAggregate>, std::vector<PlayerAggregate>> split_train_test(
    const std::vector<PlayerAggregate>& aggregates, double test_fraction, std::uint64_t seed);

struct PlayerScore {
    std::string player_id;
    std::string name;
    int attempts = 0;
    double three_pct = 0.0;
    double actual_3pa_per_game = 0.0;
    double predicted_3pa_per_game = 0.0;
    double deviation = 0.0;
    double propensity = 0.0;
    double model_rmse_on_holdout = 0.0;
    double model_r2_on_holdout = 0.0;
    bool holdout_player = false;
};

struct ModelMetric {
    std::string player_id;  // the left-out player whose model this is
    double rmse = 0.0;
    double r2 = 0.0;
};

struct LooResult {
    std::vector<PlayerScore> scores;       // ascending player_id, train + holdout
    std::vector<ModelMetric> metrics;      // one per train player
    // id trace: per train player, the exact ids the scoring model trained on;
    // holdout players are scored by a model trained on the full train set.
    std::vector<std::vector<std::string>> loo_train_ids;
    std::vector<std::string> full_train_ids;
};

// Trains one GBM per train player on everything but that player (target:
// actual 3PA per game; predictors: feature means plus three_pct), scores the
// player on it, and evaluates each model on the shared holdout. Holdout
// players are scored by the full-train model, so nobody is scored by a model
// that saw them.
LooResult loo_harness(const std::vector<PlayerAggregate>& train,
                      const std::vector<PlayerAggregate>& holdout,
                      const std::vector<std::string>& feature_names,
                      const PlayerModelConfig& config, int threads = 1);

double deviation(double actual_3pa, double predicted_3pa);

// deviation * three_pct^3; throws when three_pct is outside [0,1].
double propensity(double deviation, double three_pct);

struct RankReport {
    std::vector<PlayerScore> by_propensity;      // descending, ties by player_id
    std::vector<PlayerScore> top_positive_dev;   // descending deviation
    std::vector<PlayerScore> top_negative_dev;   // ascending deviation
};

RankReport rank_players(const std::vector<PlayerScore>& scores, int top_k);

std::string scores_csv(const std::vector<PlayerScore>& scores);
std::string metrics_csv(const std::vector<ModelMetric>& metrics);
std::string games_index_csv(const GamesIndex& games);
GamesIndex parse_games_index_csv(const std::string& content, const std::string& source_name);

}  // namespace trey::player
