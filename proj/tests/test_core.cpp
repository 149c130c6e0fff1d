#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "trey/core/validate.hpp"

using namespace trey;

namespace {

core::Moment valid_moment() {
    core::Moment m;
    m.period = 1;
    m.wall_clock_ms = 1446000000000;
    m.game_clock_s = 717.2;
    m.shot_clock_s = 23.1;
    m.ball_x = 47.0;
    m.ball_y = 25.0;
    m.ball_z = 7.5;
    for (int i = 0; i < 5; ++i)
        m.players.push_back({"10", std::to_string(101 + i), 40.0 + i, 20.0 + i});
    for (int i = 0; i < 5; ++i)
        m.players.push_back({"20", std::to_string(201 + i), 45.0 + i, 22.0 + i});
    return m;
}

bool has_violation(const std::vector<std::string>& violations, const std::string& needle) {
    for (const auto& v : violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("a valid moment has no violations") {
    const core::CourtSpec court;
    CHECK(core::validate_moment(valid_moment(), court).empty());
}

TEST_CASE("nine players is a player-count violation") {
    const core::CourtSpec court;
    auto m = valid_moment();
    m.players.pop_back();
    const auto v = core::validate_moment(m, court);
    REQUIRE(!v.empty());
    CHECK(has_violation(v, "player count 9 != 10"));
}

TEST_CASE("coordinates past the clamp slack are out of bounds") {
    const core::CourtSpec court;
    auto m = valid_moment();
    m.players[0].x = 100.0;
    CHECK(has_violation(core::validate_moment(m, court), "x out of bounds"));

    m = valid_moment();
    m.players[3].y = -4.0;
    CHECK(has_violation(core::validate_moment(m, court), "y out of bounds"));

    m = valid_moment();
    m.ball_z = -1.0;
    CHECK(has_violation(core::validate_moment(m, court), "ball z negative"));
}

TEST_CASE("team imbalance is a violation") {
    const core::CourtSpec court;
    auto m = valid_moment();
    m.players[9].team_id = "10";  // 6 vs 4
    const auto v = core::validate_moment(m, court);
    CHECK(has_violation(v, "team 10 has 6 players"));
    CHECK(has_violation(v, "team 20 has 4 players"));
}

TEST_CASE("clock violations") {
    const core::CourtSpec court;
    auto m = valid_moment();
    m.game_clock_s = 900.0;
    CHECK(has_violation(core::validate_moment(m, court), "game clock out of range"));

    m = valid_moment();
    m.shot_clock_s = 30.0;
    CHECK(has_violation(core::validate_moment(m, court), "shot clock out of range"));

    m = valid_moment();
    m.period = 0;
    CHECK(has_violation(core::validate_moment(m, court), "period < 1"));
}

TEST_CASE("validate_moment is pure") {
    const core::CourtSpec court;
    auto m = valid_moment();
    m.players[0].x = 100.0;
    const auto a = core::validate_moment(m, court);
    const auto b = core::validate_moment(m, court);
    CHECK(a == b);
}

TEST_CASE("both team groups partition five and five on valid moments") {
    const core::CourtSpec court;
    const auto m = valid_moment();
    REQUIRE(core::validate_moment(m, court).empty());
    int team10 = 0, team20 = 0;
    for (const auto& p : m.players) (p.team_id == "10" ? team10 : team20)++;
    CHECK(team10 == 5);
    CHECK(team20 == 5);
}

TEST_CASE("attacking basket swaps exactly once at halftime") {
    const core::CourtSpec court;
    core::GameSides sides;
    sides.game_id = "g1";
    sides.first_half_attack["home"] = core::Side::Right;
    sides.first_half_attack["away"] = core::Side::Left;

    CHECK(core::attacking_basket(sides, "home", 1, court) == court.basket_right);
    CHECK(core::attacking_basket(sides, "home", 2, court) == court.basket_right);
    CHECK(core::attacking_basket(sides, "home", 3, court) == court.basket_left);
    CHECK(core::attacking_basket(sides, "home", 4, court) == court.basket_left);
    // overtime keeps the second-half orientation
    CHECK(core::attacking_basket(sides, "home", 5, court) == court.basket_left);
    CHECK(core::attacking_basket(sides, "home", 6, court) == court.basket_left);

    CHECK(core::attacking_basket(sides, "away", 1, court) == court.basket_left);
    CHECK(core::attacking_basket(sides, "away", 5, court) == court.basket_right);

    // within a half, two periods apart agree; across halves they differ
    CHECK(core::attacking_basket(sides, "home", 3, court) ==
          core::attacking_basket(sides, "home", 5, court));
    CHECK(core::attacking_basket(sides, "home", 1, court) !=
          core::attacking_basket(sides, "home", 3, court));

    CHECK_THROWS(core::attacking_basket(sides, "nobody", 1, court));
}
