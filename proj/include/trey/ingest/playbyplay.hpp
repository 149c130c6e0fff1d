#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "trey/core/types.hpp"

namespace trey::ingest {

struct PbpStats {
    int rows_seen = 0;
    int rows_skipped = 0;
};

struct PbpResult {
    std::vector<core::PlayEvent> events;
    PbpStats stats;
};

// CSV with header GAME_ID,EVENTNUM,EVENTMSGTYPE,PERIOD,GAME_CLOCK_S,TEAM_ID,
// PLAYER1_ID,DESCRIPTION. Missing columns raise an error naming the column;
// unparseable rows are skipped and counted. Event code 1 -> MadeShot,
// 2 -> MissedShot, anything else -> Other. A play is a three-point attempt
// iff the description contains the exact token "3PT" (and the row is a shot
// with a shooter, per the PlayEvent invariant).
PbpResult parse_playbyplay(const std::filesystem::path& path);
PbpResult parse_playbyplay_string(const std::string& content, const std::string& source_name);

struct BioStats {
    int rows_seen = 0;
    int rows_rejected = 0;   // invariant violations
    int duplicates = 0;      // later row replaced an earlier one
};

struct BioResult {
    std::map<std::string, core::PlayerBio> bios;  // by player_id, later rows win
    BioStats stats;
};

// CSV with header PLAYER_ID,NAME,HEIGHT_CM,WEIGHT_KG,EXPERIENCE_YR,POSITION.
// Height within [150,240] cm, weight within [50,180] kg, experience >= 0;
// positions collapse to their first letter (G/F/C).
BioResult parse_player_bio(const std::filesystem::path& path);
BioResult parse_player_bio_string(const std::string& content, const std::string& source_name);

}  // namespace trey::ingest
