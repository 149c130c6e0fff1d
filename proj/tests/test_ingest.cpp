#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "trey/core/validate.hpp"
#include "trey/ingest/playbyplay.hpp"
#include "trey/ingest/segment.hpp"
#include "trey/ingest/tracking.hpp"

using namespace trey;

namespace {

const char* kSampleTracking =
    R"({"gameid":"0021500001","events":[{"eventId":2,"moments":[[1,1446000000000,717.2,23.1,null,)"
    R"([[-1,-1,47.0,25.0,7.50],[10,101,40.0,20.0,0.0],[10,102,42.0,30.0,0.0],[10,103,60.0,25.0,0.0],)"
    R"([10,104,55.0,10.0,0.0],[10,105,55.0,40.0,0.0],[20,201,45.0,22.0,0.0],[20,202,44.0,28.0,0.0],)"
    R"([20,203,58.0,25.0,0.0],[20,204,53.0,12.0,0.0],[20,205,53.0,38.0,0.0]]]]}]})";

// One tracking moment with the shooter (101) and ball at given spots.
core::Moment frame(int i, double game_clock, const core::Point& shooter, const core::Point& ball,
                   double ball_z) {
    core::Moment m;
    m.period = 1;
    m.wall_clock_ms = 1446000000000LL + 40LL * i;
    m.game_clock_s = game_clock;
    m.shot_clock_s = 20.0;
    m.ball_x = ball.x();
    m.ball_y = ball.y();
    m.ball_z = ball_z;
    m.players.push_back({"10", "101", shooter.x(), shooter.y()});
    m.players.push_back({"10", "102", 60.0, 20.0});
    m.players.push_back({"10", "103", 60.0, 30.0});
    m.players.push_back({"10", "104", 65.0, 25.0});
    m.players.push_back({"10", "105", 55.0, 25.0});
    m.players.push_back({"20", "201", 75.0, 25.0});
    m.players.push_back({"20", "202", 74.0, 20.0});
    m.players.push_back({"20", "203", 74.0, 30.0});
    m.players.push_back({"20", "204", 70.0, 15.0});
    m.players.push_back({"20", "205", 70.0, 35.0});
    return m;
}

}  // namespace

TEST_CASE("the sample tracking file parses to one moment with ball z 7.5") {
    const auto data = ingest::parse_tracking_string(kSampleTracking, "sample");
    CHECK(data.game_id == "0021500001");
    REQUIRE(data.events.size() == 1);
    CHECK(data.events[0].event_id == 2);
    REQUIRE(data.events[0].moments.size() == 1);
    const auto& m = data.events[0].moments[0];
    CHECK(m.ball_z == 7.5);
    CHECK(m.players.size() == 10);
    CHECK(m.shot_clock_s.has_value());
    CHECK(*m.shot_clock_s == 23.1);
    CHECK(data.stats.moments_skipped == 0);
}

TEST_CASE("canonical serialization round-trips byte for byte") {
    const auto first = ingest::parse_tracking_string(kSampleTracking, "sample");
    const std::string canon1 = ingest::canonical_tracking_json(first);
    const auto second = ingest::parse_tracking_string(canon1, "canon1");
    const std::string canon2 = ingest::canonical_tracking_json(second);
    CHECK(canon1 == canon2);
}

TEST_CASE("empty events array parses without error") {
    const auto data = ingest::parse_tracking_string(R"({"gameid":"g","events":[]})", "empty");
    CHECK(data.events.empty());
    CHECK(data.stats.moments_seen == 0);
}

TEST_CASE("a moment with eleven players is skipped with a counted warning") {
    // 12 position entries: ball + 11 players
    std::string doc =
        R"({"gameid":"g","events":[{"eventId":1,"moments":[[1,1446000000000,700.0,20.0,null,[)"
        R"([-1,-1,47.0,25.0,7.5])";
    for (int i = 0; i < 11; ++i)
        doc += ",[10," + std::to_string(101 + i) + ",40.0,20.0,0.0]";
    doc += R"(]]]}]})";
    const auto data = ingest::parse_tracking_string(doc, "eleven");
    REQUIRE(data.events.size() == 1);
    CHECK(data.events[0].moments.empty());
    CHECK(data.stats.moments_skipped == 1);
}

TEST_CASE("malformed JSON reports a byte offset") {
    try {
        ingest::parse_tracking_string(R"({"gameid": "g", "events": [}])", "broken");
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("small out-of-bounds excursions are clamped, large ones invalidate") {
    std::string doc =
        R"({"gameid":"g","events":[{"eventId":1,"moments":[[1,1446000000000,700.0,20.0,null,[)"
        R"([-1,-1,47.0,25.0,7.5],[10,101,95.5,20.0,0.0],[10,102,42.0,30.0,0.0],[10,103,60.0,25.0,0.0],)"
        R"([10,104,55.0,10.0,0.0],[10,105,55.0,40.0,0.0],[20,201,45.0,22.0,0.0],[20,202,44.0,28.0,0.0],)"
        R"([20,203,58.0,25.0,0.0],[20,204,53.0,12.0,0.0],[20,205,53.0,38.0,0.0]]]]}]})";
    const auto data = ingest::parse_tracking_string(doc, "clamp");
    REQUIRE(data.events[0].moments.size() == 1);
    CHECK(data.events[0].moments[0].players[0].x == 94.0);

    std::string far = doc;
    const auto pos = far.find("95.5");
    far.replace(pos, 4, "99.0");
    const auto bad = ingest::parse_tracking_string(far, "far");
    CHECK(bad.events[0].moments.empty());
    CHECK(bad.stats.moments_skipped == 1);
}

TEST_CASE("duplicate wall-clock frames are dropped and counted") {
    std::string one =
        R"([1,1446000000000,700.0,20.0,null,[[-1,-1,47.0,25.0,7.5],[10,101,40.0,20.0,0.0],)"
        R"([10,102,42.0,30.0,0.0],[10,103,60.0,25.0,0.0],[10,104,55.0,10.0,0.0],[10,105,55.0,40.0,0.0],)"
        R"([20,201,45.0,22.0,0.0],[20,202,44.0,28.0,0.0],[20,203,58.0,25.0,0.0],[20,204,53.0,12.0,0.0],)"
        R"([20,205,53.0,38.0,0.0]]])";
    const std::string doc =
        R"({"gameid":"g","events":[{"eventId":1,"moments":[)" + one + "," + one + R"(]}]})";
    const auto data = ingest::parse_tracking_string(doc, "dup");
    CHECK(data.events[0].moments.size() == 1);
    CHECK(data.stats.duplicate_frames_dropped == 1);
}

TEST_CASE("play-by-play rows map codes and the 3PT token") {
    const std::string csv =
        "GAME_ID,EVENTNUM,EVENTMSGTYPE,PERIOD,GAME_CLOCK_S,TEAM_ID,PLAYER1_ID,DESCRIPTION\n"
        "g1,2,1,1,700.0,10,101,Curry 26' 3PT Jump Shot\n"
        "g1,4,2,1,650.0,20,201,Davis 12' Jump Shot\n"
        "g1,6,6,1,600.0,10,102,Green P.FOUL\n";
    const auto result = ingest::parse_playbyplay_string(csv, "pbp");
    REQUIRE(result.events.size() == 3);
    CHECK(result.events[0].event_type == core::EventType::MadeShot);
    CHECK(result.events[0].is_three);
    CHECK(result.events[1].event_type == core::EventType::MissedShot);
    CHECK(!result.events[1].is_three);
    CHECK(result.events[2].event_type == core::EventType::Other);
    CHECK(!result.events[2].is_three);
    CHECK(result.stats.rows_skipped == 0);
}

TEST_CASE("missing play-by-play columns are named; bad rows are counted") {
    const std::string missing =
        "GAME_ID,EVENTNUM,PERIOD,GAME_CLOCK_S,TEAM_ID,PLAYER1_ID,DESCRIPTION\n";
    try {
        ingest::parse_playbyplay_string(missing, "pbp");
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("EVENTMSGTYPE") != std::string::npos);
    }

    const std::string bad_row =
        "GAME_ID,EVENTNUM,EVENTMSGTYPE,PERIOD,GAME_CLOCK_S,TEAM_ID,PLAYER1_ID,DESCRIPTION\n"
        "g1,not_a_number,1,1,700.0,10,101,Curry 26' 3PT Jump Shot\n"
        "g1,4,1,1,690.0,10,101,Curry 27' 3PT Jump Shot\n";
    const auto result = ingest::parse_playbyplay_string(bad_row, "pbp");
    CHECK(result.events.size() == 1);
    CHECK(result.stats.rows_skipped == 1);
}

TEST_CASE("player bios parse, reject out-of-range rows, and let later duplicates win") {
    const std::string csv =
        "PLAYER_ID,NAME,HEIGHT_CM,WEIGHT_KG,EXPERIENCE_YR,POSITION\n"
        "201939,Stephen Curry,191,86,6,G\n"
        "9999,Tall Tale,300,100,2,C\n"
        "201939,Stephen Curry,190,86,6,G-F\n";
    const auto result = ingest::parse_player_bio_string(csv, "bios");
    CHECK(result.stats.rows_rejected == 1);
    CHECK(result.stats.duplicates == 1);
    REQUIRE(result.bios.count("201939") == 1);
    const auto& bio = result.bios.at("201939");
    CHECK(bio.height_cm == 190.0);  // later row wins
    CHECK(bio.weight_kg == 86.0);
    CHECK(bio.experience_yr == 6);
    CHECK(bio.position == core::Position::G);  // hybrid collapses to first letter
}

TEST_CASE("release detection: last proximity frame before the rim crossing") {
    // ball rides with the shooter to frame 100 (t=4.0 s), rises over the rim
    // at frame 110 (t=4.4 s) while drifting away
    std::vector<core::Moment> moments;
    const core::Point shooter(70.0, 25.0);
    for (int i = 0; i <= 100; ++i)
        moments.push_back(frame(i, 700.0 - 0.04 * i, shooter, shooter, 6.0));
    for (int i = 101; i <= 115; ++i) {
        const double t = (i - 100) / 15.0;
        const core::Point ball = shooter + t * (core::Point(88.75, 25.0) - shooter);
        const double z = i < 110 ? 8.0 + 0.2 * (i - 100) : 10.5 + 0.3 * (i - 110);
        moments.push_back(frame(i, 700.0 - 0.04 * i, shooter, ball, z));
    }
    const core::CourtSpec court;
    CHECK(ingest::detect_release(moments, "101", court) == 100);
}

TEST_CASE("release detection falls back to the apex without a rim crossing") {
    std::vector<core::Moment> moments;
    const core::Point shooter(70.0, 25.0);
    for (int i = 0; i <= 50; ++i) {
        const double z = i < 30 ? 6.0 : 6.0 + 3.5 * std::sin((i - 30) / 20.0 * 3.14159);
        moments.push_back(frame(i, 700.0 - 0.04 * i, shooter, shooter, std::min(z, 9.5)));
    }
    // apex: the frame with maximum z
    int apex = 0;
    for (std::size_t i = 0; i < moments.size(); ++i)
        if (moments[i].ball_z > moments[apex].ball_z) apex = static_cast<int>(i);
    const core::CourtSpec court;
    CHECK(ingest::detect_release(moments, "101", court) == apex);
}

TEST_CASE("a ball that never approaches the shooter is a mis-joined event") {
    std::vector<core::Moment> moments;
    const core::Point shooter(70.0, 25.0);
    for (int i = 0; i <= 50; ++i)
        moments.push_back(frame(i, 700.0 - 0.04 * i, shooter, core::Point(20.0, 25.0), 6.0));
    const core::CourtSpec court;
    CHECK_THROWS(ingest::detect_release(moments, "101", court));
}

namespace {

ingest::GameBundle scripted_bundle(int lead_frames) {
    ingest::TrackingData tracking;
    tracking.game_id = "g1";
    ingest::TrackedEvent event;
    event.event_id = 2;
    const core::Point shooter(70.0, 25.0);
    for (int i = 0; i <= lead_frames; ++i)
        event.moments.push_back(frame(i, 700.0 - 0.04 * i, shooter, shooter, 6.0));
    for (int i = 1; i <= 10; ++i) {
        const core::Point ball = shooter + (i / 10.0) * (core::Point(88.75, 25.0) - shooter);
        event.moments.push_back(frame(lead_frames + i, 700.0 - 0.04 * (lead_frames + i), shooter,
                                      ball, 10.5 + i * 0.4));
    }
    tracking.events.push_back(std::move(event));

    core::PlayEvent ev;
    ev.game_id = "g1";
    ev.event_id = 2;
    ev.event_type = core::EventType::MadeShot;
    ev.is_three = true;
    ev.shooter_id = "101";
    ev.team_id = "10";
    ev.period = 1;
    ev.game_clock_s = 700.0;
    ev.description = "Player 26' 3PT Jump Shot";
    return ingest::join_game(std::move(tracking), {ev});
}

}  // namespace

TEST_CASE("segmentation emits a play with the trailing window") {
    const core::CourtSpec court;
    auto bundle = scripted_bundle(50);  // 2 s of lead
    core::GameSides sides;
    sides.game_id = "g1";
    sides.first_half_attack["10"] = core::Side::Right;
    sides.first_half_attack["20"] = core::Side::Left;

    ingest::SegmentStats stats;
    const auto plays =
        ingest::segment_three_point_plays(bundle, sides, court, ingest::SegmentParams{}, &stats);
    REQUIRE(plays.size() == 1);
    CHECK(stats.three_point_events == 1);
    CHECK(stats.dropped_total() == 0);
    const auto& play = plays[0];
    CHECK(play.release_index == static_cast<int>(play.window.size()) - 1);
    CHECK(play.window.size() == 51);
    CHECK(play.made);
    CHECK(play.attacking_basket == court.basket_right);
    // window duration within the 5 s cap plus one frame
    const double duration =
        (play.window.back().wall_clock_ms - play.window.front().wall_clock_ms) / 1000.0;
    CHECK(duration <= 5.0 + 0.04 + 1e-9);
}

TEST_CASE("a short lead is dropped with a counted warning") {
    const core::CourtSpec court;
    auto bundle = scripted_bundle(12);  // 0.48 s of lead
    core::GameSides sides;
    sides.game_id = "g1";
    sides.first_half_attack["10"] = core::Side::Right;
    sides.first_half_attack["20"] = core::Side::Left;

    ingest::SegmentStats stats;
    const auto plays =
        ingest::segment_three_point_plays(bundle, sides, court, ingest::SegmentParams{}, &stats);
    CHECK(plays.empty());
    CHECK(stats.dropped_short_window == 1);
    CHECK(stats.three_point_events == 1);
    // count conservation
    CHECK(static_cast<int>(plays.size()) + stats.dropped_total() == stats.three_point_events);
}

TEST_CASE("zero three-point events yields an empty list") {
    const core::CourtSpec court;
    auto bundle = scripted_bundle(50);
    bundle.events[0].is_three = false;
    core::GameSides sides;
    sides.game_id = "g1";
    sides.first_half_attack["10"] = core::Side::Right;
    sides.first_half_attack["20"] = core::Side::Left;

    ingest::SegmentStats stats;
    const auto plays =
        ingest::segment_three_point_plays(bundle, sides, court, ingest::SegmentParams{}, &stats);
    CHECK(plays.empty());
    CHECK(stats.three_point_events == 0);
}

TEST_CASE("a clock reset inside the window drops the play") {
    const core::CourtSpec court;
    auto bundle = scripted_bundle(50);
    // game clock jumps back up mid-window
    bundle.tracking.events[0].moments[30].game_clock_s = 720.0;
    core::GameSides sides;
    sides.game_id = "g1";
    sides.first_half_attack["10"] = core::Side::Right;
    sides.first_half_attack["20"] = core::Side::Left;

    ingest::SegmentStats stats;
    const auto plays =
        ingest::segment_three_point_plays(bundle, sides, court, ingest::SegmentParams{}, &stats);
    CHECK(plays.empty());
    CHECK(stats.dropped_clock_reset == 1);
}

TEST_CASE("attacking sides are inferred from period-1 shot evidence") {
    const core::CourtSpec court;
    const auto bundle = scripted_bundle(50);  // made shot ends at the right basket
    const auto sides = ingest::infer_attacking_sides(bundle, court);
    REQUIRE(sides.first_half_attack.count("10") == 1);
    REQUIRE(sides.first_half_attack.count("20") == 1);
    CHECK(sides.first_half_attack.at("10") == core::Side::Right);
    CHECK(sides.first_half_attack.at("20") == core::Side::Left);
}

TEST_CASE("unmatched tracking events are dropped at the join") {
    ingest::TrackingData tracking;
    tracking.game_id = "g1";
    ingest::TrackedEvent orphan;
    orphan.event_id = 99;
    tracking.events.push_back(orphan);

    core::PlayEvent ev;
    ev.game_id = "g1";
    ev.event_id = 2;
    const auto bundle = ingest::join_game(std::move(tracking), {ev});
    CHECK(bundle.tracking.events.empty());
    CHECK(bundle.unmatched_tracking_events == 1);
}
