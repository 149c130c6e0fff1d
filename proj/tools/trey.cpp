// treyline: tracking-data three-point analytics pipeline.
//
// Subcommands: synth, ingest, features, importance, playermodel, verify.
// All randomness flows from --seed; --deterministic strips timestamps from
// SVG outputs so reruns are byte-identical.

#include <CLI11.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "trey/cli/commands.hpp"
#include "trey/util/log.hpp"

namespace {

struct SuppressionEntry {
    std::string player_id;
    double factor;
};

void parse_pairs(const std::vector<std::string>& raw, std::map<std::string, double>& out,
                 const std::string& flag) {
    for (const auto& item : raw) {
        const auto pos = item.find(':');
        if (pos == std::string::npos)
            throw CLI::ValidationError(flag, "expected <player_id>:<value>, got '" + item + "'");
        out[item.substr(0, pos)] = std::stod(item.substr(pos + 1));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"treyline: three-point tracking analytics pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style config file; CLI flags override file values");

    trey::cli::GlobalOptions global;
    bool seed_set = false;
    app.add_option("--seed", global.seed, "Root seed for all randomness")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--out", global.out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", global.threads, "Worker threads")->capture_default_str();
    app.add_flag("--deterministic", global.deterministic,
                 "Suppress timestamps so outputs are byte-identical");
    app.add_option("--log-level", global.log_level, "debug|info|warn|error")
        ->capture_default_str();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic season with ground truth");
    trey::synth::SynthConfig synth_config;
    std::vector<std::string> suppress_raw, usage_raw, skill_raw;
    synth_cmd->add_option("--games", synth_config.n_games, "Games to generate")
        ->capture_default_str();
    synth_cmd->add_option("--roster", synth_config.n_players_per_team, "Players per team roster")
        ->capture_default_str();
    synth_cmd->add_option("--plays-per-game", synth_config.plays_per_game, "Three-point plays per game")
        ->capture_default_str();
    synth_cmd->add_option("--intercept", synth_config.make_model.intercept, "Make-model intercept")
        ->capture_default_str();
    synth_cmd->add_option("--noise-features", synth_config.noise_features,
                          "Pure-noise columns (table generation)")
        ->capture_default_str();
    synth_cmd->add_option("--base-suppression", synth_config.base_suppression,
                          "Attempt factor for unlisted players")
        ->capture_default_str();
    synth_cmd->add_option("--suppress", suppress_raw,
                          "Per-player attempt suppression, player_id:factor (repeatable)");
    synth_cmd->add_option("--usage", usage_raw, "Per-player usage override, player_id:score");
    synth_cmd->add_option("--skill", skill_raw, "Per-player skill offset, player_id:logit");
    synth_cmd->add_option("--pre-release", synth_config.pre_release_s,
                          "Scripted seconds before release")
        ->capture_default_str();
    synth_cmd->add_option("--jitter", synth_config.jitter_ft, "Defender-gap jitter (ft)")
        ->capture_default_str();

    // shared ingest inputs
    trey::cli::IngestOptions ingest_options;
    auto add_ingest_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--tracking", ingest_options.tracking,
                        "Tracking JSON files or directories")
            ->required();
        cmd->add_option("--pbp", ingest_options.playbyplay, "Play-by-play CSV")->required();
        cmd->add_option("--bios", ingest_options.bios, "Player bio CSV")->required();
        cmd->add_option("--sides", ingest_options.sides_override,
                        "Optional attacking-sides override CSV (game_id,team_id,L|R)");
        cmd->add_option("--window", ingest_options.segment.window_s, "Play window seconds")
            ->capture_default_str();
        cmd->add_option("--min-lead", ingest_options.segment.min_lead_s,
                        "Minimum tracking seconds before release")
            ->capture_default_str();
        cmd->add_option("--release-radius", ingest_options.segment.release_radius_ft,
                        "Ball-to-shooter release radius (ft)")
            ->capture_default_str();
        cmd->add_option("--encode-folds", ingest_options.features.encode_folds,
                        "Folds for the shooter encoding")
            ->capture_default_str();
        cmd->add_option("--encode-smoothing", ingest_options.features.encode_smoothing,
                        "Smoothing pseudo-attempts for the shooter encoding")
            ->capture_default_str();
    };

    auto* ingest_cmd = app.add_subcommand("ingest", "Parse, join and summarize a season");
    add_ingest_inputs(ingest_cmd);
    auto* features_cmd =
        app.add_subcommand("features", "Extract the per-play feature table CSV");
    add_ingest_inputs(features_cmd);

    // importance
    auto* importance_cmd =
        app.add_subcommand("importance", "Boruta feature importance over the feature table");
    trey::cli::ImportanceOptions importance_options;
    importance_cmd->add_option("--features", importance_options.features_csv, "Feature table CSV")
        ->required();
    importance_cmd->add_option("--max-runs", importance_options.boruta.max_runs, "Decision-run cap")
        ->capture_default_str();
    importance_cmd->add_option("--alpha", importance_options.boruta.alpha, "Two-sided test level")
        ->capture_default_str();
    importance_cmd
        ->add_option("--repeats", importance_options.boruta.n_repeats,
                     "Distribution-assembly runs")
        ->capture_default_str();
    importance_cmd
        ->add_option("--trees", importance_options.boruta.forest.n_trees, "Trees per forest")
        ->capture_default_str();
    importance_cmd->add_option("--mtry", importance_options.boruta.forest.mtry,
                               "Columns per split (0 = sqrt)")
        ->capture_default_str();
    importance_cmd
        ->add_option("--min-leaf", importance_options.boruta.forest.min_leaf, "Minimum leaf rows")
        ->capture_default_str();
    importance_cmd
        ->add_option("--max-depth", importance_options.boruta.forest.max_depth,
                     "Tree depth cap (-1 = unlimited)")
        ->capture_default_str();

    // playermodel
    auto* player_cmd = app.add_subcommand(
        "playermodel", "Leave-one-out player attempt model, deviation and propensity");
    trey::cli::PlayerModelOptions player_options;
    player_cmd->add_option("--features", player_options.features_csv, "Feature table CSV")
        ->required();
    player_cmd->add_option("--games-index", player_options.games_index_csv,
                           "Games index CSV from the features step")
        ->required();
    player_cmd->add_option("--min-attempts", player_options.model.min_attempts,
                           "Attempt floor for scoring a player")
        ->capture_default_str();
    player_cmd
        ->add_option("--test-fraction", player_options.model.test_fraction, "Holdout fraction")
        ->capture_default_str();
    player_cmd->add_option("--top-k", player_options.model.top_k, "Rows in the deviation tables")
        ->capture_default_str();
    player_cmd->add_option("--iters", player_options.model.gbm.n_iters, "Boosting iterations")
        ->capture_default_str();
    player_cmd
        ->add_option("--learning-rate", player_options.model.gbm.learning_rate, "Shrinkage")
        ->capture_default_str();
    player_cmd->add_option("--gbm-depth", player_options.model.gbm.max_depth, "Tree depth")
        ->capture_default_str();
    player_cmd->add_option("--gbm-min-leaf", player_options.model.gbm.min_leaf, "Minimum leaf rows")
        ->capture_default_str();
    player_cmd->add_option("--subsample", player_options.model.gbm.subsample,
                           "Row fraction per iteration")
        ->capture_default_str();

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "Check a feature table against a ground-truth manifest");
    trey::cli::VerifyOptions verify_options;
    verify_cmd->add_option("--features", verify_options.features_csv, "Feature table CSV")
        ->required();
    verify_cmd->add_option("--manifest", verify_options.manifest, "Ground-truth manifest JSON")
        ->required();
    std::vector<std::string> tolerance_raw;
    verify_cmd->add_option("--tolerance", tolerance_raw,
                           "Per-feature tolerance override, feature:value (repeatable)");
    verify_cmd->add_option("--max-missing", verify_options.tolerances.max_missing_plays,
                           "Allowed manifest plays missing from the table")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    trey::util::log_level() = trey::util::parse_log_level(global.log_level);

    const bool needs_seed = synth_cmd->parsed() || importance_cmd->parsed() ||
                            player_cmd->parsed();
    if (needs_seed && !seed_set) {
        std::fprintf(stderr,
                     "{\"error\":{\"code\":1,\"message\":\"--seed is required for statistical "
                     "subcommands\"}}\n");
        return trey::cli::kExitError;
    }

    try {
        if (synth_cmd->parsed()) {
            parse_pairs(suppress_raw, synth_config.suppression, "--suppress");
            parse_pairs(usage_raw, synth_config.usage_overrides, "--usage");
            parse_pairs(skill_raw, synth_config.skill_offsets, "--skill");
            return trey::cli::run_synth(global, synth_config);
        }
        if (ingest_cmd->parsed()) return trey::cli::run_ingest(global, ingest_options);
        if (features_cmd->parsed()) return trey::cli::run_features(global, ingest_options);
        if (importance_cmd->parsed()) return trey::cli::run_importance(global, importance_options);
        if (player_cmd->parsed()) return trey::cli::run_playermodel(global, player_options);
        if (verify_cmd->parsed()) {
            std::map<std::string, double> tol;
            parse_pairs(tolerance_raw, tol, "--tolerance");
            for (const auto& [k, v] : tol) verify_options.tolerances.per_feature[k] = v;
            return trey::cli::run_verify(global, verify_options);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }
    return trey::cli::kExitError;
}
