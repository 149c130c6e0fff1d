#include "trey/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "trey/report/svg.hpp"
#include "trey/util/csv.hpp"
#include "trey/util/io.hpp"
#include "trey/util/log.hpp"

namespace trey::cli {

namespace fs = std::filesystem;

namespace {

struct EmptyResult : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit_error(int code, const std::string& message) {
    nlohmann::ordered_json line;
    line["error"] = {{"code", code}, {"message", message}};
    std::fprintf(stderr, "%s\n", line.dump().c_str());
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const EmptyResult& e) {
        emit_error(kExitEmpty, e.what());
        return kExitEmpty;
    } catch (const std::exception& e) {
        emit_error(kExitError, e.what());
        return kExitError;
    }
}

std::vector<fs::path> expand_tracking_paths(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> files;
    for (const auto& p : inputs) {
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.path().extension() == ".json") files.push_back(entry.path());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no tracking files found");
    return files;
}

std::map<std::string, core::GameSides> load_sides_override(const fs::path& path) {
    std::map<std::string, core::GameSides> sides;
    if (path.empty()) return sides;
    std::istringstream in(util::read_file(path));
    std::string line;
    std::getline(in, line);  // header game_id,team_id,side
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = util::csv_split(line);
        if (fields.size() < 3) throw std::runtime_error("bad sides row: " + line);
        auto& gs = sides[fields[0]];
        gs.game_id = fields[0];
        gs.first_half_attack[fields[1]] =
            fields[2] == "L" ? core::Side::Left : core::Side::Right;
    }
    return sides;
}

struct LoadedSeason {
    std::vector<ingest::GameBundle> games;
    features::BioIndex bios;
    player::GamesIndex games_index;
    std::vector<core::ThreePointPlay> plays;
    ingest::SegmentStats seg_stats;
    ingest::TrackingStats tracking_stats;
    ingest::PbpStats pbp_stats;
    ingest::BioStats bio_stats;
    int unmatched_tracking_events = 0;
};

LoadedSeason load_season(const IngestOptions& options) {
    LoadedSeason season;

    const auto pbp = ingest::parse_playbyplay(options.playbyplay);
    season.pbp_stats = pbp.stats;
    std::map<std::string, std::vector<core::PlayEvent>> events_by_game;
    for (const auto& ev : pbp.events) events_by_game[ev.game_id].push_back(ev);

    auto bio = ingest::parse_player_bio(options.bios);
    season.bio_stats = bio.stats;
    season.bios = std::move(bio.bios);

    const auto overrides = load_sides_override(options.sides_override);
    const core::CourtSpec& court = options.features.court;

    for (const auto& path : expand_tracking_paths(options.tracking)) {
        ingest::TrackingData tracking = ingest::parse_tracking_file(path, court);
        season.tracking_stats.moments_seen += tracking.stats.moments_seen;
        season.tracking_stats.moments_skipped += tracking.stats.moments_skipped;
        season.tracking_stats.duplicate_frames_dropped += tracking.stats.duplicate_frames_dropped;

        auto events_it = events_by_game.find(tracking.game_id);
        if (events_it == events_by_game.end())
            throw std::runtime_error("no play-by-play rows for game " + tracking.game_id);

        ingest::GameBundle bundle = ingest::join_game(std::move(tracking), events_it->second);
        season.unmatched_tracking_events += bundle.unmatched_tracking_events;

        core::GameSides sides;
        if (auto it = overrides.find(bundle.game_id); it != overrides.end()) sides = it->second;
        else sides = ingest::infer_attacking_sides(bundle, court);

        auto plays = ingest::segment_three_point_plays(bundle, sides, court, options.segment,
                                                       &season.seg_stats);
        for (auto& play : plays) season.plays.push_back(std::move(play));

        for (const auto& [team, roster] : bundle.rosters) {
            (void)team;
            for (const auto& player_id : roster) {
                auto& entry = season.games_index[player_id];
                entry.games_played++;
                if (entry.name.empty()) {
                    auto b = season.bios.find(player_id);
                    entry.name = b != season.bios.end() ? b->second.name : player_id;
                }
            }
        }
        season.games.push_back(std::move(bundle));
    }
    return season;
}

void write_atomic(const fs::path& path, const std::string& content) {
    util::atomic_write(path, content);
    TREY_LOG_INFO("wrote %s", path.string().c_str());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v.size() % 2 == 1 ? v[v.size() / 2]
                             : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

int run_synth(const GlobalOptions& global, synth::SynthConfig config) {
    return guarded([&] {
        config.seed = global.seed;
        synth::GroundTruthManifest manifest;
        const auto paths = synth::generate_season(config, global.out_dir, &manifest);
        std::printf("season: games=%zu plays=%zu players=%zu\n", paths.tracking.size(),
                    manifest.plays.size(), manifest.players.size());
        std::printf("tracking: %s\n", (global.out_dir / "tracking").string().c_str());
        std::printf("playbyplay: %s\n", paths.playbyplay.string().c_str());
        std::printf("bios: %s\n", paths.bios.string().c_str());
        std::printf("manifest: %s\n", paths.manifest.string().c_str());
        return kExitOk;
    });
}

int run_ingest(const GlobalOptions& global, const IngestOptions& options) {
    (void)global;
    return guarded([&] {
        const LoadedSeason season = load_season(options);
        int three = 0;
        int events = 0;
        for (const auto& g : season.games) {
            events += static_cast<int>(g.events.size());
            for (const auto& ev : g.events) three += ev.is_three ? 1 : 0;
        }
        std::printf("games: %zu\n", season.games.size());
        std::printf("play events: %d (three-point: %d)\n", events, three);
        std::printf("moments: seen=%d skipped=%d duplicates=%d\n",
                    season.tracking_stats.moments_seen, season.tracking_stats.moments_skipped,
                    season.tracking_stats.duplicate_frames_dropped);
        std::printf("plays segmented: %zu\n", season.plays.size());
        std::printf(
            "plays dropped: no_tracking=%d release=%d short_window=%d clock=%d shooter=%d\n",
            season.seg_stats.dropped_no_tracking, season.seg_stats.dropped_release,
            season.seg_stats.dropped_short_window, season.seg_stats.dropped_clock_reset,
            season.seg_stats.dropped_shooter_missing);
        std::printf("warnings: pbp_skipped=%d bio_rejected=%d bio_duplicates=%d unmatched_tracking=%d\n",
                    season.pbp_stats.rows_skipped, season.bio_stats.rows_rejected,
                    season.bio_stats.duplicates, season.unmatched_tracking_events);
        return kExitOk;
    });
}

int run_features(const GlobalOptions& global, const IngestOptions& options) {
    return guarded([&] {
        const LoadedSeason season = load_season(options);
        if (season.plays.empty())
            throw EmptyResult("no three-point events with sufficient window");

        features::ExtractStats stats;
        const auto table =
            features::assemble_dataset(season.plays, season.bios, options.features, &stats);

        write_atomic(global.out_dir / "features.csv", features::feature_table_csv(table));
        write_atomic(global.out_dir / "games_index.csv",
                     player::games_index_csv(season.games_index));
        std::printf("features: rows=%d dropped=%d missing_bio=%d\n", table.n_rows(),
                    stats.plays_dropped, stats.missing_bio);
        return kExitOk;
    });
}

int run_importance(const GlobalOptions& global, const ImportanceOptions& options) {
    return guarded([&] {
        const auto table = features::load_feature_table_csv(options.features_csv);
        boruta::BorutaConfig config = options.boruta;
        config.seed = global.seed;

        const auto report = boruta::run_boruta(table.to_dataset(), config, global.threads);

        write_atomic(global.out_dir / "importance_decisions.csv",
                     boruta::decision_summary_csv(report));
        write_atomic(global.out_dir / "importance_distribution.csv",
                     boruta::importance_distribution_csv(report));

        // shadows leftmost, then features by ascending median z
        std::vector<report::BoxSeries> series = {
            {"shadow_min", report.shadow_min_z},
            {"shadow_mean", report.shadow_mean_z},
            {"shadow_max", report.shadow_max_z},
        };
        std::vector<std::pair<double, const boruta::FeatureReport*>> ordered;
        for (const auto& f : report.features) ordered.push_back({median_of(f.z_samples), &f});
        std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second->name < b.second->name;
        });
        for (const auto& [median, f] : ordered) {
            (void)median;
            series.push_back({f->name, f->z_samples});
        }
        write_atomic(global.out_dir / "importance_box.svg",
                     report::box_plot_svg(series, "Feature importance distributions", "z score",
                                          !global.deterministic));

        int confirmed = 0, rejected = 0, tentative = 0;
        for (const auto& f : report.features) {
            if (f.decision == boruta::Decision::Confirmed) confirmed++;
            else if (f.decision == boruta::Decision::Rejected) rejected++;
            else tentative++;
        }
        std::printf("boruta: runs=%d confirmed=%d rejected=%d tentative=%d\n",
                    report.decision_runs, confirmed, rejected, tentative);
        return kExitOk;
    });
}

int run_playermodel(const GlobalOptions& global, const PlayerModelOptions& options) {
    return guarded([&] {
        const auto table = features::load_feature_table_csv(options.features_csv);
        const auto games = player::parse_games_index_csv(
            util::read_file(options.games_index_csv), options.games_index_csv.string());

        player::PlayerModelConfig config = options.model;
        config.seed = global.seed;

        const auto aggregates = player::aggregate_players(table, games, config);
        if (aggregates.players.empty()) throw EmptyResult("no players above the attempt floor");

        const auto [train, holdout] =
            player::split_train_test(aggregates.players, config.test_fraction, config.seed);
        const auto loo =
            player::loo_harness(train, holdout, aggregates.feature_names, config, global.threads);
        const auto ranked = player::rank_players(loo.scores, config.top_k);

        write_atomic(global.out_dir / "player_scores.csv",
                     player::scores_csv(ranked.by_propensity));
        write_atomic(global.out_dir / "player_metrics.csv", player::metrics_csv(loo.metrics));
        write_atomic(global.out_dir / "top_positive_deviation.csv",
                     player::scores_csv(ranked.top_positive_dev));
        write_atomic(global.out_dir / "top_negative_deviation.csv",
                     player::scores_csv(ranked.top_negative_dev));

        std::vector<double> rmse, r2;
        for (const auto& m : loo.metrics) {
            rmse.push_back(m.rmse);
            r2.push_back(m.r2);
        }
        write_atomic(global.out_dir / "player_metrics_hist.svg",
                     report::histogram_svg({{"RMSE", rmse, 12}, {"R^2", r2, 12}},
                                           "Holdout metrics across player models",
                                           !global.deterministic));

        std::printf("playermodel: scored=%zu train=%zu holdout=%zu filtered=%zu\n",
                    loo.scores.size(), train.size(), holdout.size(),
                    aggregates.filtered_players.size());
        return kExitOk;
    });
}

int run_verify(const GlobalOptions& global, const VerifyOptions& options) {
    (void)global;
    return guarded([&] {
        const auto table = features::load_feature_table_csv(options.features_csv);
        const auto manifest = synth::load_manifest(options.manifest);
        const auto report = synth::verify_manifest(table, manifest, options.tolerances);
        std::fputs(report.to_text().c_str(), stdout);
        return report.pass ? kExitOk : kExitError;
    });
}

}  // namespace trey::cli
