#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trey/core/types.hpp"

namespace trey::ingest {

struct TrackedEvent {
    long event_id = 0;
    std::vector<core::Moment> moments;  // file order preserved
};

struct TrackingStats {
    int moments_seen = 0;
    int moments_skipped = 0;        // failed Moment invariants (player count, bounds)
    int duplicate_frames_dropped = 0;

    int total_warnings() const { return moments_skipped + duplicate_frames_dropped; }
};

// One tracking game file: 25 Hz moments grouped by event.
struct TrackingData {
    std::string game_id;
    std::vector<TrackedEvent> events;
    double nominal_hz = 25.0;
    TrackingStats stats;

    const TrackedEvent* find_event(long event_id) const;
};

// Parses the tracking game JSON. Structural problems raise errors carrying
// the byte offset; moments violating invariants are skipped and counted.
// Coordinates up to 2 ft out of bounds are clamped (tracking jitter); worse
// excursions invalidate the moment.
TrackingData parse_tracking_string(const std::string& content, const std::string& source_name,
                                   const core::CourtSpec& court = {});
TrackingData parse_tracking_file(const std::filesystem::path& path,
                                 const core::CourtSpec& court = {});

// Canonical serialization: fixed key order, shortest round-trip floats.
// parse(canonical(parse(f))) == parse(f) byte-for-byte after one pass.
std::string canonical_tracking_json(const TrackingData& data);

}  // namespace trey::ingest
