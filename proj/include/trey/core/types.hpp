#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trey::core {

using Point = Eigen::Vector2d;

// NBA court geometry in feet, origin at one baseline corner, x along the
// court length. All downstream distances are in feet.
struct CourtSpec {
    double length = 94.0;
    double width = 50.0;
    Point basket_left{5.25, 25.0};
    Point basket_right{88.75, 25.0};
    double rim_height = 10.0;
    double arc_radius = 23.75;
    double corner_distance = 22.0;
    double corner_zone_depth = 14.0;
};

struct PlayerOnCourt {
    std::string team_id;
    std::string player_id;
    double x = 0.0;
    double y = 0.0;

    Point pos() const { return Point(x, y); }
};

// One 25 Hz tracking snapshot: clocks, ball XYZ, and ten player XY entries.
struct Moment {
    int period = 0;
    std::int64_t wall_clock_ms = 0;
    double game_clock_s = 0.0;
    std::optional<double> shot_clock_s;
    double ball_x = 0.0;
    double ball_y = 0.0;
    double ball_z = 0.0;
    std::vector<PlayerOnCourt> players;  // exactly 10 when valid, 5 per team

    Point ball_xy() const { return Point(ball_x, ball_y); }
};

enum class EventType { MadeShot, MissedShot, Other };

struct PlayEvent {
    std::string game_id;
    long event_id = 0;  // join key onto tracking moments
    EventType event_type = EventType::Other;
    bool is_three = false;
    std::string shooter_id;  // empty when absent
    std::string team_id;     // empty when absent
    int period = 0;
    double game_clock_s = 0.0;
    std::string description;
};

enum class Position { G, F, C };

inline char position_letter(Position p) {
    switch (p) {
        case Position::G: return 'G';
        case Position::F: return 'F';
        case Position::C: return 'C';
    }
    return '?';
}

struct PlayerBio {
    std::string player_id;
    std::string name;
    double height_cm = 0.0;
    double weight_kg = 0.0;
    int experience_yr = 0;
    Position position = Position::G;
};

// A segmented play: the trailing window of moments ending at shot release.
struct ThreePointPlay {
    std::string game_id;
    long event_id = 0;
    std::string shooter_id;
    std::string shooter_team_id;
    bool made = false;
    int release_index = 0;  // index into window
    std::vector<Moment> window;
    Point attacking_basket{0.0, 0.0};
};

enum class Side { Left, Right };

// Which basket each team attacks in the first half; the sides swap at
// halftime and overtime keeps the second-half orientation.
struct GameSides {
    std::string game_id;
    std::map<std::string, Side> first_half_attack;
};

}  // namespace trey::core
