#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "trey/core/types.hpp"
#include "trey/ingest/playbyplay.hpp"
#include "trey/ingest/tracking.hpp"

namespace trey::ingest {

// Tracking + play-by-play for one game, joined on the event id.
struct GameBundle {
    std::string game_id;
    TrackingData tracking;
    std::vector<core::PlayEvent> events;
    std::map<std::string, std::set<std::string>> rosters;  // team_id -> players seen in tracking
    int unmatched_tracking_events = 0;  // tracking events with no play-by-play row (dropped)
};

// Joins one game's tracking and events; tracking events without a matching
// play-by-play row are dropped with a counted warning so moment event ids
// stay a subset of the play events.
GameBundle join_game(TrackingData tracking, std::vector<core::PlayEvent> events);

struct SegmentParams {
    double window_s = 5.0;         // trailing play window before release
    double min_lead_s = 1.0;       // minimum usable tracking before release
    double release_radius_ft = 2.5;
};

struct SegmentStats {
    int three_point_events = 0;
    int dropped_no_tracking = 0;
    int dropped_release = 0;       // release detection failed (mis-joined event)
    int dropped_short_window = 0;
    int dropped_clock_reset = 0;
    int dropped_shooter_missing = 0;

    int dropped_total() const {
        return dropped_no_tracking + dropped_release + dropped_short_window +
               dropped_clock_reset + dropped_shooter_missing;
    }
};

// Release instant: the last moment, before the ball first rises above rim
// height, at which the ball is within release_radius of the shooter. Without
// a rim crossing, the moment of maximum ball height. Throws when the ball is
// never near the shooter (a mis-joined event).
int detect_release(std::span<const core::Moment> moments, const std::string& shooter_id,
                   const core::CourtSpec& court, double release_radius_ft = 2.5);

// First-half attacking side per team, inferred from where that team's
// period-1 shot events finish (the ball ends at the attacked basket). A
// sides override replaces inference entirely.
core::GameSides infer_attacking_sides(const GameBundle& bundle, const core::CourtSpec& court);

std::vector<core::ThreePointPlay> segment_three_point_plays(const GameBundle& bundle,
                                                            const core::GameSides& sides,
                                                            const core::CourtSpec& court,
                                                            const SegmentParams& params,
                                                            SegmentStats* stats);

}  // namespace trey::ingest
