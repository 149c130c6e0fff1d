#include "trey/ingest/segment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trey/core/validate.hpp"

namespace trey::ingest {

namespace {

const core::PlayerOnCourt* find_player(const core::Moment& m, const std::string& player_id) {
    for (const auto& p : m.players)
        if (p.player_id == player_id) return &p;
    return nullptr;
}

}  // namespace

GameBundle join_game(TrackingData tracking, std::vector<core::PlayEvent> events) {
    GameBundle bundle;
    bundle.game_id = tracking.game_id;
    bundle.events = std::move(events);

    std::set<long> known_events;
    for (const auto& ev : bundle.events) known_events.insert(ev.event_id);

    std::vector<TrackedEvent> kept;
    for (auto& te : tracking.events) {
        if (!known_events.count(te.event_id)) {
            bundle.unmatched_tracking_events++;
            continue;
        }
        for (const auto& m : te.moments)
            for (const auto& p : m.players) bundle.rosters[p.team_id].insert(p.player_id);
        kept.push_back(std::move(te));
    }
    tracking.events = std::move(kept);
    bundle.tracking = std::move(tracking);
    return bundle;
}

int detect_release(std::span<const core::Moment> moments, const std::string& shooter_id,
                   const core::CourtSpec& court, double release_radius_ft) {
    if (moments.empty()) throw std::runtime_error("detect_release: no moments");

    int first_cross = -1;
    for (std::size_t i = 0; i < moments.size(); ++i) {
        if (moments[i].ball_z > court.rim_height) {
            first_cross = static_cast<int>(i);
            break;
        }
    }

    const auto near_shooter = [&](const core::Moment& m) {
        const auto* p = find_player(m, shooter_id);
        if (!p) return false;
        return (m.ball_xy() - p->pos()).norm() <= release_radius_ft;
    };

    bool any_proximity = false;
    for (const auto& m : moments) any_proximity |= near_shooter(m);
    if (!any_proximity)
        throw std::runtime_error("detect_release: ball never within " +
                                 std::to_string(release_radius_ft) +
                                 " ft of shooter " + shooter_id + " (mis-joined event?)");

    if (first_cross >= 0) {
        for (int i = first_cross - 1; i >= 0; --i)
            if (near_shooter(moments[i])) return i;
        throw std::runtime_error("detect_release: no release point before rim crossing");
    }

    // No rim crossing: fall back to the ball's apex.
    int best = 0;
    for (std::size_t i = 1; i < moments.size(); ++i)
        if (moments[i].ball_z > moments[best].ball_z) best = static_cast<int>(i);
    return best;
}

core::GameSides infer_attacking_sides(const GameBundle& bundle, const core::CourtSpec& court) {
    core::GameSides sides;
    sides.game_id = bundle.game_id;

    std::map<std::string, std::pair<int, int>> votes;  // team -> (left, right)
    for (const auto& ev : bundle.events) {
        if (ev.period != 1) continue;
        if (ev.event_type != core::EventType::MadeShot &&
            ev.event_type != core::EventType::MissedShot)
            continue;
        const auto* te = bundle.tracking.find_event(ev.event_id);
        if (!te || te->moments.empty()) continue;

        std::string team = ev.team_id;
        if (team.empty() && !ev.shooter_id.empty()) {
            for (const auto& m : te->moments)
                if (const auto* p = find_player(m, ev.shooter_id)) {
                    team = p->team_id;
                    break;
                }
        }
        if (team.empty()) continue;

        const bool left_half = te->moments.back().ball_x < court.length * 0.5;
        if (left_half) votes[team].first++;
        else votes[team].second++;
    }

    for (const auto& [team, v] : votes) {
        if (v.first == v.second) continue;  // tie: leave for the opposite-team rule
        sides.first_half_attack[team] = v.first > v.second ? core::Side::Left : core::Side::Right;
    }

    // Two teams per game; an undetermined team takes the side opposite its
    // opponent.
    std::vector<std::string> teams;
    for (const auto& [team, roster] : bundle.rosters) teams.push_back(team);
    if (teams.size() == 2) {
        for (int i = 0; i < 2; ++i) {
            const std::string& a = teams[i];
            const std::string& b = teams[1 - i];
            if (!sides.first_half_attack.count(a) && sides.first_half_attack.count(b)) {
                sides.first_half_attack[a] = sides.first_half_attack[b] == core::Side::Left
                                                 ? core::Side::Right
                                                 : core::Side::Left;
            }
        }
        if (sides.first_half_attack.size() == 2 &&
            sides.first_half_attack[teams[0]] == sides.first_half_attack[teams[1]])
            throw std::runtime_error("infer_attacking_sides: both teams voted for the same basket in game " +
                                     bundle.game_id);
    }

    if (sides.first_half_attack.size() < bundle.rosters.size())
        throw std::runtime_error("infer_attacking_sides: no period-1 shot evidence in game " +
                                 bundle.game_id);
    return sides;
}

std::vector<core::ThreePointPlay> segment_three_point_plays(const GameBundle& bundle,
                                                            const core::GameSides& sides,
                                                            const core::CourtSpec& court,
                                                            const SegmentParams& params,
                                                            SegmentStats* stats) {
    std::vector<core::ThreePointPlay> plays;
    SegmentStats local;
    SegmentStats& s = stats ? *stats : local;

    for (const auto& ev : bundle.events) {
        if (!ev.is_three) continue;
        s.three_point_events++;

        const auto* te = bundle.tracking.find_event(ev.event_id);
        if (!te || te->moments.size() < 2) {
            s.dropped_no_tracking++;
            continue;
        }

        int release;
        try {
            release = detect_release(te->moments, ev.shooter_id, court, params.release_radius_ft);
        } catch (const std::exception&) {
            s.dropped_release++;
            continue;
        }

        const std::int64_t release_ms = te->moments[release].wall_clock_ms;
        const std::int64_t window_start_ms =
            release_ms - static_cast<std::int64_t>(params.window_s * 1000.0);
        int begin = 0;
        while (begin < release && te->moments[begin].wall_clock_ms < window_start_ms) ++begin;

        const double lead_s =
            static_cast<double>(release_ms - te->moments[begin].wall_clock_ms) / 1000.0;
        if (lead_s < params.min_lead_s) {
            s.dropped_short_window++;
            continue;
        }

        // The window must be one contiguous stretch of game time.
        bool clock_ok = true;
        for (int i = begin + 1; i <= release && clock_ok; ++i) {
            const auto& prev = te->moments[i - 1];
            const auto& cur = te->moments[i];
            if (cur.period != prev.period || cur.wall_clock_ms <= prev.wall_clock_ms ||
                cur.game_clock_s > prev.game_clock_s + 1e-9)
                clock_ok = false;
        }
        if (!clock_ok) {
            s.dropped_clock_reset++;
            continue;
        }

        bool shooter_everywhere = true;
        std::string shooter_team;
        for (int i = begin; i <= release; ++i) {
            const auto* p = find_player(te->moments[i], ev.shooter_id);
            if (!p) {
                shooter_everywhere = false;
                break;
            }
            shooter_team = p->team_id;
        }
        if (!shooter_everywhere) {
            s.dropped_shooter_missing++;
            continue;
        }

        core::ThreePointPlay play;
        play.game_id = bundle.game_id;
        play.event_id = ev.event_id;
        play.shooter_id = ev.shooter_id;
        play.shooter_team_id = shooter_team;
        play.made = ev.event_type == core::EventType::MadeShot;
        play.window.assign(te->moments.begin() + begin, te->moments.begin() + release + 1);
        play.release_index = static_cast<int>(play.window.size()) - 1;
        play.attacking_basket =
            core::attacking_basket(sides, shooter_team, te->moments[release].period, court);
        plays.push_back(std::move(play));
    }
    return plays;
}

}  // namespace trey::ingest
