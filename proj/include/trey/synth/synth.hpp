#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "trey/core/types.hpp"
#include "trey/features/features.hpp"
#include "trey/ml/dataset.hpp"

namespace trey::synth {

struct MakeModel {
    double intercept = 1.2;
    // feature name -> logit weight; names must come from the plantable set
    std::vector<std::pair<std::string, double>> weights = {{"ndd_median", -0.35},
                                                           {"off_hull_area_mean", 0.002}};
};

// Feature names the play scripter can realize exactly.
const std::vector<std::string>& plantable_features();

struct SynthConfig {
    int n_games = 20;
    int n_players_per_team = 15;  // roster size; 5 per side take the court each game
    int plays_per_game = 20;
    MakeModel make_model;
    std::map<std::string, double> skill_offsets;    // player_id -> logit offset override
    std::map<std::string, double> usage_overrides;  // player_id -> usage score in [0,1]
    std::map<std::string, double> suppression;      // player_id -> attempt factor in (0,1]
    double base_suppression = 1.0;                  // factor for unlisted players
    int noise_features = 0;                         // table-level generation only
    std::uint64_t seed = 0;

    // play scripting
    double pre_release_s = 2.0;  // scripted lead before release (the feature window)
    double jitter_ft = 0.05;     // bounded jitter on the defender gap
    double usage_min = 0.10, usage_max = 0.95;
    double ndd_min = 1.0, ndd_max = 11.0;
    double hull_area_min = 140.0, hull_area_max = 420.0;
    double ball_path_min = 25.0, ball_path_max = 70.0;
    double shot_clock_min = 2.0, shot_clock_max = 21.0;
    double corner_probability = 0.15;
    int filler_events_per_game = 2;  // non-three play-by-play rows without tracking
};

// Throws on invalid or court-infeasible targets.
void validate_config(const SynthConfig& config, const core::CourtSpec& court = {});

struct ManifestPlay {
    std::string game_id;
    long event_id = 0;
    std::string shooter_id;
    int period = 0;
    std::map<std::string, double> features;  // planted true values
    double p_make = 0.0;
    bool made = false;
};

struct ManifestPlayer {
    std::string player_id;
    std::string name;
    std::string team_id;
    double usage_score = 0.0;
    double skill_offset = 0.0;
    double suppression = 1.0;
    int attempts = 0;      // realized
    int makes = 0;         // realized
    int games_played = 0;  // realized
};

struct GroundTruthManifest {
    int schema_version = 1;
    std::uint64_t seed = 0;
    MakeModel make_model;
    std::vector<std::string> informative_features;
    std::vector<std::string> noise_features;
    std::vector<ManifestPlayer> players;
    std::vector<ManifestPlay> plays;
};

struct SeasonPaths {
    std::vector<std::filesystem::path> tracking;
    std::filesystem::path playbyplay;
    std::filesystem::path bios;
    std::filesystem::path manifest;
};

// Writes tracking JSON per game, one play-by-play CSV, one bio CSV, and the
// manifest. Byte-identical for a fixed config and seed.
SeasonPaths generate_season(const SynthConfig& config, const std::filesystem::path& out_dir,
                            GroundTruthManifest* out_manifest = nullptr,
                            const core::CourtSpec& court = {});

std::string manifest_to_json(const GroundTruthManifest& manifest);
GroundTruthManifest parse_manifest(const std::string& content, const std::string& source_name);
GroundTruthManifest load_manifest(const std::filesystem::path& path);

struct TableTruth {
    MakeModel make_model;
    std::vector<std::string> informative_features;
    std::vector<std::string> noise_features;
    std::vector<double> p_make;
};

// Feature-level generator for the statistical tests: informative columns
// drawn uniform over their configured ranges, noise columns standard normal,
// target drawn from the logistic make-model.
ml::Dataset generate_feature_table(const SynthConfig& config, int n_rows,
                                   TableTruth* truth = nullptr);

struct VerifyTolerances {
    std::map<std::string, double> per_feature;
    double default_tolerance = 0.25;
    int max_missing_plays = 0;

    static VerifyTolerances defaults();
    double tolerance_for(const std::string& feature) const;
};

struct FeatureCheck {
    std::string feature;
    double p50 = 0.0, p90 = 0.0, max = 0.0;  // absolute-error quantiles
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<FeatureCheck> checks;
    int table_rows = 0;
    int manifest_plays = 0;
    int matched = 0;
    bool pass = false;

    std::string to_text() const;
};

// Joins pipeline rows onto manifest plays by (game_id, event_id) and checks
// the planted features against tolerances. A table row with no manifest
// counterpart is an error (wrong manifest for this dataset).
VerifyReport verify_manifest(const features::FeatureTable& table,
                             const GroundTruthManifest& manifest,
                             const VerifyTolerances& tolerances = VerifyTolerances::defaults());

}  // namespace trey::synth
