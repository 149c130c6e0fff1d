#include "trey/core/validate.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

namespace trey::core {

namespace {

std::string fmt(const char* pattern, const std::string& a, double v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), pattern, a.c_str(), v);
    return buf;
}

}  // namespace

std::vector<std::string> validate_moment(const Moment& m, const CourtSpec& court) {
    std::vector<std::string> violations;

    if (m.players.size() != 10) {
        violations.push_back("player count " + std::to_string(m.players.size()) + " != 10");
    } else {
        std::map<std::string, int> per_team;
        for (const auto& p : m.players) per_team[p.team_id]++;
        if (per_team.size() != 2) {
            violations.push_back("expected exactly 2 teams, found " +
                                 std::to_string(per_team.size()));
        } else {
            for (const auto& [team, count] : per_team) {
                if (count != 5)
                    violations.push_back("team " + team + " has " + std::to_string(count) +
                                         " players, expected 5");
            }
        }
    }

    for (const auto& p : m.players) {
        if (p.x < 0.0 || p.x > court.length)
            violations.push_back(fmt("player %s x out of bounds: %.3f", p.player_id, p.x));
        if (p.y < 0.0 || p.y > court.width)
            violations.push_back(fmt("player %s y out of bounds: %.3f", p.player_id, p.y));
    }
    if (m.ball_x < 0.0 || m.ball_x > court.length)
        violations.push_back(fmt("ball %s x out of bounds: %.3f", "", m.ball_x));
    if (m.ball_y < 0.0 || m.ball_y > court.width)
        violations.push_back(fmt("ball %s y out of bounds: %.3f", "", m.ball_y));
    if (m.ball_z < 0.0) violations.push_back("ball z negative");

    if (m.period < 1) violations.push_back("period < 1");
    if (m.period >= 1 && m.period <= 4 && (m.game_clock_s < 0.0 || m.game_clock_s > 720.0))
        violations.push_back("game clock out of range");
    if (m.shot_clock_s && (*m.shot_clock_s < 0.0 || *m.shot_clock_s > 24.0))
        violations.push_back("shot clock out of range");

    return violations;
}

Point attacking_basket(const GameSides& sides, const std::string& team_id, int period,
                       const CourtSpec& court) {
    auto it = sides.first_half_attack.find(team_id);
    if (it == sides.first_half_attack.end())
        throw std::runtime_error("attacking_basket: unknown team_id '" + team_id +
                                 "' in game " + sides.game_id);
    Side side = it->second;
    if (period >= 3) side = (side == Side::Left) ? Side::Right : Side::Left;  // halftime swap
    return side == Side::Left ? court.basket_left : court.basket_right;
}

}  // namespace trey::core
