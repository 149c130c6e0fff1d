#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "trey/boruta/boruta.hpp"
#include "trey/core/types.hpp"
#include "trey/features/features.hpp"
#include "trey/ingest/segment.hpp"
#include "trey/player/player_model.hpp"
#include "trey/synth/synth.hpp"

namespace trey::cli {

// Exit codes: 0 success, 1 runtime/data error, 2 empty result (e.g. no
// segmentable three-point plays).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitEmpty = 2;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";
    int threads = 1;
    bool deterministic = false;  // suppress SVG timestamp comments
    std::string log_level = "info";
};

struct IngestOptions {
    std::vector<std::filesystem::path> tracking;  // files or directories
    std::filesystem::path playbyplay;
    std::filesystem::path bios;
    std::filesystem::path sides_override;  // optional CSV game_id,team_id,side
    ingest::SegmentParams segment;
    features::FeatureConfig features;
};

int run_synth(const GlobalOptions& global, synth::SynthConfig config);
int run_ingest(const GlobalOptions& global, const IngestOptions& options);
int run_features(const GlobalOptions& global, const IngestOptions& options);

struct ImportanceOptions {
    std::filesystem::path features_csv;
    boruta::BorutaConfig boruta;
};

int run_importance(const GlobalOptions& global, const ImportanceOptions& options);

struct PlayerModelOptions {
    std::filesystem::path features_csv;
    std::filesystem::path games_index_csv;
    player::PlayerModelConfig model;
};

int run_playermodel(const GlobalOptions& global, const PlayerModelOptions& options);

struct VerifyOptions {
    std::filesystem::path features_csv;
    std::filesystem::path manifest;
    synth::VerifyTolerances tolerances = synth::VerifyTolerances::defaults();
};

int run_verify(const GlobalOptions& global, const VerifyOptions& options);

}  // namespace trey::cli
