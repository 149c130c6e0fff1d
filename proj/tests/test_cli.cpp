#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "testutil.hpp"
#include "trey/cli/commands.hpp"
#include "trey/util/io.hpp"

using namespace trey;
namespace fs = std::filesystem;

namespace {

const char* kSampleTracking =
    R"({"gameid":"0021500001","events":[{"eventId":2,"moments":[[1,1446000000000,717.2,23.1,null,)"
    R"([[-1,-1,47.0,25.0,7.50],[10,101,40.0,20.0,0.0],[10,102,42.0,30.0,0.0],[10,103,60.0,25.0,0.0],)"
    R"([10,104,55.0,10.0,0.0],[10,105,55.0,40.0,0.0],[20,201,45.0,22.0,0.0],[20,202,44.0,28.0,0.0],)"
    R"([20,203,58.0,25.0,0.0],[20,204,53.0,12.0,0.0],[20,205,53.0,38.0,0.0]]]]}]})";

cli::GlobalOptions global_for(const fs::path& out, std::uint64_t seed, int threads = 1) {
    cli::GlobalOptions g;
    g.out_dir = out;
    g.seed = seed;
    g.threads = threads;
    g.deterministic = true;
    return g;
}

synth::SynthConfig mini_season() {
    synth::SynthConfig config;
    config.n_games = 4;
    config.n_players_per_team = 7;
    config.plays_per_game = 16;
    config.usage_min = 0.3;
    return config;
}

cli::IngestOptions ingest_options_for(const fs::path& season_dir) {
    cli::IngestOptions options;
    options.tracking = {season_dir / "tracking"};
    options.playbyplay = season_dir / "pbp.csv";
    options.bios = season_dir / "bios.csv";
    return options;
}

}  // namespace

TEST_CASE("the single-moment sample yields the empty-window error with exit code 2") {
    const auto dir = testutil::scratch_dir("cli_sample");
    util::atomic_write(dir / "game.json", kSampleTracking);
    util::atomic_write(dir / "pbp.csv",
                       "GAME_ID,EVENTNUM,EVENTMSGTYPE,PERIOD,GAME_CLOCK_S,TEAM_ID,PLAYER1_ID,"
                       "DESCRIPTION\n"
                       "0021500001,2,1,1,717.2,10,101,Player 25' 3PT Jump Shot\n");
    util::atomic_write(dir / "bios.csv",
                       "PLAYER_ID,NAME,HEIGHT_CM,WEIGHT_KG,EXPERIENCE_YR,POSITION\n"
                       "101,Player,191,86,6,G\n");

    cli::IngestOptions options;
    options.tracking = {dir / "game.json"};
    options.playbyplay = dir / "pbp.csv";
    options.bios = dir / "bios.csv";
    const int code = cli::run_features(global_for(dir, 1), options);
    CHECK(code == cli::kExitEmpty);
    CHECK(!fs::exists(dir / "features.csv"));
    fs::remove_all(dir);
}

TEST_CASE("synth -> features -> importance -> playermodel -> verify, end to end") {
    const auto dir = testutil::scratch_dir("cli_e2e");
    const auto global = global_for(dir, 2024);

    REQUIRE(cli::run_synth(global, mini_season()) == cli::kExitOk);
    REQUIRE(fs::exists(dir / "manifest.json"));

    const auto options = ingest_options_for(dir);
    REQUIRE(cli::run_ingest(global, options) == cli::kExitOk);
    REQUIRE(cli::run_features(global, options) == cli::kExitOk);
    REQUIRE(fs::exists(dir / "features.csv"));
    REQUIRE(fs::exists(dir / "games_index.csv"));

    cli::ImportanceOptions importance;
    importance.features_csv = dir / "features.csv";
    importance.boruta.max_runs = 12;
    importance.boruta.n_repeats = 3;
    importance.boruta.forest.n_trees = 40;
    importance.boruta.forest.min_leaf = 8;
    REQUIRE(cli::run_importance(global, importance) == cli::kExitOk);
    CHECK(fs::exists(dir / "importance_decisions.csv"));
    CHECK(fs::exists(dir / "importance_distribution.csv"));
    CHECK(fs::exists(dir / "importance_box.svg"));

    cli::PlayerModelOptions player_options;
    player_options.features_csv = dir / "features.csv";
    player_options.games_index_csv = dir / "games_index.csv";
    player_options.model.min_attempts = 1;
    player_options.model.gbm.n_iters = 40;
    player_options.model.gbm.min_leaf = 2;
    REQUIRE(cli::run_playermodel(global, player_options) == cli::kExitOk);
    CHECK(fs::exists(dir / "player_scores.csv"));
    CHECK(fs::exists(dir / "player_metrics.csv"));
    CHECK(fs::exists(dir / "player_metrics_hist.svg"));
    CHECK(fs::exists(dir / "top_positive_deviation.csv"));
    CHECK(fs::exists(dir / "top_negative_deviation.csv"));

    // scores are ordered by propensity: the first data row carries the max
    const std::string scores = util::read_file(dir / "player_scores.csv");
    std::istringstream in(scores);
    std::string line;
    std::getline(in, line);  // header
    double first = 0.0, value = 0.0;
    bool first_row = true;
    int row = 0;
    while (std::getline(in, line)) {
        const auto fields = trey::util::csv_split(line);
        value = trey::util::parse_double(fields[7], "propensity");
        if (first_row) {
            first = value;
            first_row = false;
        }
        CHECK(value <= first);
        ++row;
    }
    CHECK(row >= 10);

    cli::VerifyOptions verify;
    verify.features_csv = dir / "features.csv";
    verify.manifest = dir / "manifest.json";
    CHECK(cli::run_verify(global, verify) == cli::kExitOk);

    // a corrupted manifest fails verification with a non-zero exit
    auto manifest = synth::load_manifest(dir / "manifest.json");
    for (auto& play : manifest.plays) play.features["ndd_median"] += 5.0;
    util::atomic_write(dir / "bad_manifest.json", synth::manifest_to_json(manifest));
    verify.manifest = dir / "bad_manifest.json";
    CHECK(cli::run_verify(global, verify) != cli::kExitOk);

    fs::remove_all(dir);
}

TEST_CASE("reruns with the same seed produce byte-identical outputs") {
    const auto dir_a = testutil::scratch_dir("cli_det_a");
    const auto dir_b = testutil::scratch_dir("cli_det_b");

    for (const auto& dir : {dir_a, dir_b}) {
        const auto global = global_for(dir, 99, dir == dir_a ? 1 : 4);
        REQUIRE(cli::run_synth(global, mini_season()) == cli::kExitOk);
        const auto options = ingest_options_for(dir);
        REQUIRE(cli::run_features(global, options) == cli::kExitOk);

        cli::ImportanceOptions importance;
        importance.features_csv = dir / "features.csv";
        importance.boruta.max_runs = 10;
        importance.boruta.n_repeats = 2;
        importance.boruta.forest.n_trees = 30;
        importance.boruta.forest.min_leaf = 8;
        REQUIRE(cli::run_importance(global, importance) == cli::kExitOk);

        cli::PlayerModelOptions player_options;
        player_options.features_csv = dir / "features.csv";
        player_options.games_index_csv = dir / "games_index.csv";
        player_options.model.min_attempts = 1;
        player_options.model.gbm.n_iters = 25;
        player_options.model.gbm.min_leaf = 2;
        REQUIRE(cli::run_playermodel(global, player_options) == cli::kExitOk);
    }

    for (const char* name :
         {"features.csv", "games_index.csv", "importance_decisions.csv",
          "importance_distribution.csv", "importance_box.svg", "player_scores.csv",
          "player_metrics.csv", "player_metrics_hist.svg"}) {
        CHECK(util::read_file(dir_a / name) == util::read_file(dir_b / name));
    }

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
