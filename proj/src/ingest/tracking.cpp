#include "trey/ingest/tracking.hpp"

#include <json.hpp>

#include <stdexcept>

#include "trey/core/validate.hpp"
#include "trey/util/csv.hpp"
#include "trey/util/io.hpp"

namespace trey::ingest {

using nlohmann::json;
using nlohmann::ordered_json;

const TrackedEvent* TrackingData::find_event(long event_id) const {
    for (const auto& e : events)
        if (e.event_id == event_id) return &e;
    return nullptr;
}

namespace {

constexpr double kClampSlack = 2.0;  // ft of out-of-bounds jitter we repair

// Clamps v into [lo, hi] when within slack of the range; otherwise leaves it
// so validation rejects the moment.
double clamp_coord(double v, double lo, double hi) {
    if (v < lo && v >= lo - kClampSlack) return lo;
    if (v > hi && v <= hi + kClampSlack) return hi;
    return v;
}

core::Moment parse_moment(const json& m, const std::string& where) {
    if (!m.is_array() || m.size() < 6)
        throw std::runtime_error("malformed moment record (" + where + "): expected 6 fields");
    core::Moment out;
    out.period = m[0].get<int>();
    out.wall_clock_ms = m[1].get<std::int64_t>();
    out.game_clock_s = m[2].get<double>();
    if (!m[3].is_null()) out.shot_clock_s = m[3].get<double>();
    // m[4] is an unused placeholder in the feed
    const json& entries = m[5];
    if (!entries.is_array())
        throw std::runtime_error("malformed moment record (" + where + "): positions not an array");
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 5)
            throw std::runtime_error("malformed position entry (" + where + ")");
        const long team = e[0].get<long>();
        const long player = e[1].get<long>();
        if (team == -1 && player == -1) {
            out.ball_x = e[2].get<double>();
            out.ball_y = e[3].get<double>();
            out.ball_z = e[4].get<double>();
        } else {
            core::PlayerOnCourt p;
            p.team_id = std::to_string(team);
            p.player_id = std::to_string(player);
            p.x = e[2].get<double>();
            p.y = e[3].get<double>();
            out.players.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

TrackingData parse_tracking_string(const std::string& content, const std::string& source_name,
                                   const core::CourtSpec& court) {
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("tracking parse error in " + source_name + " at byte " +
                                 std::to_string(e.byte) + ": " + e.what());
    }

    TrackingData data;
    try {
        data.game_id = doc.at("gameid").get<std::string>();
        const json& events = doc.at("events");
        if (!events.is_array()) throw std::runtime_error("'events' is not an array");

        for (std::size_t ei = 0; ei < events.size(); ++ei) {
            const json& ev = events[ei];
            TrackedEvent te;
            te.event_id = ev.at("eventId").get<long>();
            const json& moments = ev.at("moments");
            for (std::size_t mi = 0; mi < moments.size(); ++mi) {
                const std::string where =
                    "event " + std::to_string(te.event_id) + ", moment " + std::to_string(mi);
                core::Moment m = parse_moment(moments[mi], where);
                data.stats.moments_seen++;

                m.ball_x = clamp_coord(m.ball_x, 0.0, court.length);
                m.ball_y = clamp_coord(m.ball_y, 0.0, court.width);
                if (m.ball_z < 0.0 && m.ball_z >= -kClampSlack) m.ball_z = 0.0;
                for (auto& p : m.players) {
                    p.x = clamp_coord(p.x, 0.0, court.length);
                    p.y = clamp_coord(p.y, 0.0, court.width);
                }

                if (!core::validate_moment(m, court).empty()) {
                    data.stats.moments_skipped++;
                    continue;
                }
                if (!te.moments.empty() && te.moments.back().wall_clock_ms == m.wall_clock_ms) {
                    data.stats.duplicate_frames_dropped++;
                    continue;
                }
                te.moments.push_back(std::move(m));
            }
            data.events.push_back(std::move(te));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("tracking structure error in " + source_name + ": " + e.what());
    }
    return data;
}

TrackingData parse_tracking_file(const std::filesystem::path& path, const core::CourtSpec& court) {
    return parse_tracking_string(util::read_file(path), path.string(), court);
}

std::string canonical_tracking_json(const TrackingData& data) {
    ordered_json doc;
    doc["gameid"] = data.game_id;
    ordered_json events = ordered_json::array();
    for (const auto& ev : data.events) {
        ordered_json moments = ordered_json::array();
        for (const auto& m : ev.moments) {
            ordered_json entries = ordered_json::array();
            ordered_json ball = ordered_json::array();
            ball.push_back(-1);
            ball.push_back(-1);
            ball.push_back(m.ball_x);
            ball.push_back(m.ball_y);
            ball.push_back(m.ball_z);
            entries.push_back(std::move(ball));
            for (const auto& p : m.players) {
                ordered_json e = ordered_json::array();
                e.push_back(util::parse_long(p.team_id, "team_id"));
                e.push_back(util::parse_long(p.player_id, "player_id"));
                e.push_back(p.x);
                e.push_back(p.y);
                e.push_back(0.0);
                entries.push_back(std::move(e));
            }
            ordered_json row = ordered_json::array();
            row.push_back(m.period);
            row.push_back(m.wall_clock_ms);
            row.push_back(m.game_clock_s);
            if (m.shot_clock_s) row.push_back(*m.shot_clock_s);
            else row.push_back(nullptr);
            row.push_back(nullptr);
            row.push_back(std::move(entries));
            moments.push_back(std::move(row));
        }
        ordered_json evj;
        evj["eventId"] = ev.event_id;
        evj["moments"] = std::move(moments);
        events.push_back(std::move(evj));
    }
    doc["events"] = std::move(events);
    return doc.dump();
}

}  // namespace trey::ingest
