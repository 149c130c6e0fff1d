#include "trey/synth/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trey/geom/geometry.hpp"
#include "trey/ingest/tracking.hpp"
#include "trey/util/csv.hpp"
#include "trey/util/io.hpp"
#include "trey/util/rng.hpp"

namespace trey::synth {

using core::Point;
using nlohmann::ordered_json;

const std::vector<std::string>& plantable_features() {
    static const std::vector<std::string> names = {"ndd_median", "off_hull_area_mean",
                                                   "ball_path_len", "shot_clock_release"};
    return names;
}

namespace {

constexpr double kFrameS = 0.04;  // 25 Hz
constexpr int kFlightFrames = 10;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

bool is_plantable(const std::string& name) {
    const auto& p = plantable_features();
    return std::find(p.begin(), p.end(), name) != p.end();
}

struct PlayerParams {
    std::string player_id;
    std::string team_id;
    std::string name;
    double usage = 0.5;        // drives both attempt share and feature profile
    double skill = 0.0;        // logit offset on the make model
    double suppression = 1.0;  // attempt down-weighting, invisible to features
    core::PlayerBio bio;

    double attempt_weight() const { return (0.5 + 4.0 * usage) * suppression; }
};

}  // namespace

void validate_config(const SynthConfig& c, const core::CourtSpec& court) {
    auto fail = [](const std::string& msg) {
        throw std::invalid_argument("synth config: " + msg);
    };
    if (c.n_games < 1) fail("n_games must be >= 1");
    if (c.n_players_per_team < 5) fail("n_players_per_team must be >= 5");
    if (c.plays_per_game < 1) fail("plays_per_game must be >= 1");
    if (c.noise_features < 0) fail("noise_features must be >= 0");
    if (c.filler_events_per_game < 0) fail("filler_events_per_game must be >= 0");
    if (c.base_suppression <= 0.0 || c.base_suppression > 1.0)
        fail("base_suppression must be in (0,1]");
    for (const auto& [id, s] : c.suppression)
        if (s <= 0.0 || s > 1.0) fail("suppression factor for " + id + " must be in (0,1]");
    for (const auto& [id, u] : c.usage_overrides)
        if (u < 0.0 || u > 1.0) fail("usage override for " + id + " must be in [0,1]");
    if (c.usage_min < 0.0 || c.usage_max > 1.0 || c.usage_min >= c.usage_max)
        fail("usage range must satisfy 0 <= min < max <= 1");
    if (c.pre_release_s < 1.0 || c.pre_release_s > 4.5)
        fail("pre_release_s must be in [1.0, 4.5]");
    if (c.jitter_ft < 0.0 || c.jitter_ft > 0.2) fail("jitter_ft must be in [0, 0.2]");
    if (c.ndd_min < 0.5 || c.ndd_max <= c.ndd_min || c.ndd_max > 13.0)
        fail("ndd range must satisfy 0.5 <= min < max <= 13");
    if (c.hull_area_min < 16.0 || c.hull_area_max <= c.hull_area_min)
        fail("hull area range must satisfy 16 <= min < max");
    // teammates sit on a square anchored 16 ft inside the attacking basket;
    // a half-side above 20 ft would leave the court
    if (c.hull_area_max > 1600.0)
        fail("hull area target " + std::to_string(c.hull_area_max) + " exceeds the court");
    if (std::sqrt(c.hull_area_max) / 2.0 + 16.0 > court.width)
        fail("hull area target exceeds the court width");
    if (c.ball_path_min < 5.0 || c.ball_path_max <= c.ball_path_min || c.ball_path_max > 100.0)
        fail("ball path range must satisfy 5 <= min < max <= 100");
    if (c.shot_clock_min < 0.5 || c.shot_clock_max <= c.shot_clock_min || c.shot_clock_max > 21.5)
        fail("shot clock range must satisfy 0.5 <= min < max <= 21.5");
    if (c.corner_probability < 0.0 || c.corner_probability > 1.0)
        fail("corner_probability must be in [0,1]");
    for (const auto& [name, w] : c.make_model.weights) {
        (void)w;
        if (!is_plantable(name)) fail("make-model weight on unknown feature '" + name + "'");
    }
}

namespace {

std::vector<PlayerParams> make_league(const SynthConfig& config) {
    std::vector<PlayerParams> players;
    util::Rng rng(util::derive_seed(config.seed, "league"));
    const char* positions = "GGFFC";

    for (int side = 0; side < 2; ++side) {
        const std::string team = side == 0 ? "10" : "20";
        for (int i = 1; i <= config.n_players_per_team; ++i) {
            PlayerParams p;
            p.player_id = std::to_string((side + 1) * 1000 + i);
            p.team_id = team;
            p.name = "Player " + p.player_id;
            p.usage = rng.uniform(config.usage_min, config.usage_max);
            p.skill = std::clamp(rng.normal() * 0.25, -0.6, 0.6);
            p.suppression = config.base_suppression;

            if (auto it = config.usage_overrides.find(p.player_id);
                it != config.usage_overrides.end())
                p.usage = it->second;
            if (auto it = config.skill_offsets.find(p.player_id); it != config.skill_offsets.end())
                p.skill = it->second;
            if (auto it = config.suppression.find(p.player_id); it != config.suppression.end())
                p.suppression = it->second;

            const char pos = positions[(i - 1) % 5];
            p.bio.player_id = p.player_id;
            p.bio.name = p.name;
            p.bio.position = pos == 'G'   ? core::Position::G
                             : pos == 'F' ? core::Position::F
                                          : core::Position::C;
            const double base_height = pos == 'G' ? 190.0 : pos == 'F' ? 201.0 : 210.0;
            p.bio.height_cm = std::clamp(std::round(base_height + rng.normal() * 4.0), 165.0, 225.0);
            p.bio.weight_kg =
                std::clamp(std::round((p.bio.height_cm - 100.0) * 0.9 + rng.normal() * 5.0), 60.0,
                           150.0);
            p.bio.experience_yr = rng.below_int(16);
            players.push_back(std::move(p));
        }
    }
    return players;
}

// One scripted play appended to a tracked event. Returns the manifest record.
ManifestPlay script_play(const SynthConfig& config, const core::CourtSpec& court,
                         const std::string& game_id, long event_id, int period,
                         double game_clock_release, const PlayerParams& shooter,
                         const std::vector<const PlayerParams*>& teammates,
                         const std::vector<const PlayerParams*>& defenders,
                         const Point& basket, std::int64_t start_ms, util::Rng& rng,
                         ingest::TrackedEvent* out_event) {
    int release_frame = static_cast<int>(std::llround(config.pre_release_s / kFrameS));
    if (release_frame % 2 == 1) ++release_frame;  // odd frame count -> exact median
    const int total_frames = release_frame + 1 + kFlightFrames;

    const Point center(court.length * 0.5, court.width * 0.5);

    // shooter spot: corner three or above-the-break arc position
    Point shooter_pos;
    const bool corner = rng.bernoulli(config.corner_probability);
    const bool attack_right = basket.x() > center.x();
    if (corner) {
        const bool low_side = rng.bernoulli(0.5);
        shooter_pos = Point(basket.x(), low_side ? 3.0 : court.width - 3.0);
    } else {
        const double theta = rng.uniform(-0.96, 0.96);  // ~±55 degrees
        const double radius = rng.uniform(court.arc_radius + 0.25, court.arc_radius + 2.75);
        const Point toward_center = attack_right ? Point(-1.0, 0.0) : Point(1.0, 0.0);
        shooter_pos = basket + radius * Point(toward_center.x() * std::cos(theta),
                                              std::sin(theta));
    }

    // planted targets
    const double u = shooter.usage;
    auto profile = [&](double lo, double hi) {
        const double span = hi - lo;
        const double centre = lo + span * u;
        return std::clamp(centre + rng.uniform(-0.1 * span, 0.1 * span), lo, hi);
    };
    const double ndd_target = profile(config.ndd_min, config.ndd_max);
    const double hull_target = profile(config.hull_area_min, config.hull_area_max);
    const double path_target = profile(config.ball_path_min, config.ball_path_max);
    const double clock_target = profile(config.shot_clock_min, config.shot_clock_max);

    // offense: four teammates on a square anchored toward midcourt
    const Point anchor = basket + 16.0 * (center - basket).normalized();
    const double half = std::sqrt(hull_target) / 2.0;
    const std::array<Point, 4> corners = {
        Point(anchor.x() - half, anchor.y() - half), Point(anchor.x() + half, anchor.y() - half),
        Point(anchor.x() + half, anchor.y() + half), Point(anchor.x() - half, anchor.y() + half)};

    // defense: one defender marks the shooter on a gap schedule, four hold a
    // small box well outside the gap range
    const Point gap_dir = (basket - shooter_pos).normalized();
    const Point def_anchor = shooter_pos + 20.0 * gap_dir;
    const std::array<Point, 4> def_spots = {
        Point(def_anchor.x() - 3.5, def_anchor.y() - 3.5),
        Point(def_anchor.x() + 3.5, def_anchor.y() - 3.5),
        Point(def_anchor.x() + 3.5, def_anchor.y() + 3.5),
        Point(def_anchor.x() - 3.5, def_anchor.y() + 3.5)};

    // ball route: straight feed from the far teammate, an exact-length
    // dribble wiggle, then a clean hold until release
    int farthest = 0;
    for (int i = 1; i < 4; ++i)
        if ((corners[i] - shooter_pos).norm() > (corners[farthest] - shooter_pos).norm())
            farthest = i;
    const Point feed_from = corners[farthest];
    const double feed_len = (feed_from - shooter_pos).norm();

    const int f1 = std::max(1, static_cast<int>(release_frame * 0.45));
    int f2 = release_frame - std::max(2, release_frame / 5);
    if ((f2 - f1) % 2 == 1) --f2;
    const int wiggle_steps = std::max(0, f2 - f1);

    double path_real = std::clamp(path_target, feed_len, feed_len + 4.0 * wiggle_steps);
    const double wiggle_amp = wiggle_steps > 0 ? (path_real - feed_len) / wiggle_steps : 0.0;
    const Point wiggle_dir = (center - shooter_pos).normalized();

    // defender gap: symmetric ramp around the target, bounded jitter on top
    const double delta = std::min(1.2, ndd_target - 0.3);

    // exact hull of the five static offensive spots
    std::vector<Point> offense_pts = {shooter_pos, corners[0], corners[1], corners[2], corners[3]};
    const double hull_real = geom::polygon_area(geom::convex_hull(offense_pts));

    static const std::array<double, kFlightFrames> flight_z = {
        10.6, 13.0, 14.8, 15.8, 16.0, 15.4, 14.0, 12.6, 11.2, 10.1};

    out_event->event_id = event_id;
    out_event->moments.reserve(total_frames);
    for (int i = 0; i < total_frames; ++i) {
        core::Moment m;
        m.period = period;
        m.wall_clock_ms = start_ms + static_cast<std::int64_t>(i) * 40;
        m.game_clock_s = game_clock_release + (release_frame - i) * kFrameS;
        m.shot_clock_s = clock_target + (release_frame - i) * kFrameS;

        Point ball;
        double ball_z;
        if (i <= f1) {
            const double t = static_cast<double>(i) / f1;
            ball = feed_from + t * (shooter_pos - feed_from);
            ball_z = 4.5;
        } else if (i <= f2) {
            ball = ((i - f1) % 2 == 1) ? Point(shooter_pos + wiggle_amp * wiggle_dir)
                                       : shooter_pos;
            ball_z = 4.5;
        } else if (i <= release_frame) {
            ball = shooter_pos;
            ball_z = 6.5;
        } else {
            const double t = static_cast<double>(i - release_frame) / kFlightFrames;
            ball = shooter_pos + t * (basket - shooter_pos);
            ball_z = flight_z[i - release_frame - 1];
        }
        m.ball_x = ball.x();
        m.ball_y = ball.y();
        m.ball_z = ball_z;

        const int gi = std::min(i, release_frame);
        const double gap = ndd_target + delta * (2.0 * gi - release_frame) / release_frame +
                           rng.uniform(-config.jitter_ft, config.jitter_ft);
        const Point gap_def = shooter_pos + gap * gap_dir;

        auto push = [&](const PlayerParams& p, const Point& pos) {
            m.players.push_back({p.team_id, p.player_id, pos.x(), pos.y()});
        };
        push(shooter, shooter_pos);
        for (int k = 0; k < 4; ++k) push(*teammates[k], corners[k]);
        push(*defenders[0], gap_def);
        for (int k = 0; k < 4; ++k) push(*defenders[k + 1], def_spots[k]);

        out_event->moments.push_back(std::move(m));
    }

    ManifestPlay play;
    play.game_id = game_id;
    play.event_id = event_id;
    play.shooter_id = shooter.player_id;
    play.period = period;
    play.features["ndd_median"] = ndd_target;
    play.features["off_hull_area_mean"] = hull_real;
    play.features["ball_path_len"] = path_real;
    play.features["shot_clock_release"] = clock_target;
    play.features["shot_dist"] = (shooter_pos - basket).norm();

    double z = config.make_model.intercept + shooter.skill;
    for (const auto& [name, w] : config.make_model.weights) z += w * play.features.at(name);
    play.p_make = logistic(z);
    play.made = rng.bernoulli(play.p_make);
    return play;
}

std::vector<int> pick_lineup(int roster_size, util::Rng& rng) {
    std::vector<int> idx(roster_size);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < 5; ++i) {
        int j = i + rng.below_int(roster_size - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(5);
    std::sort(idx.begin(), idx.end());
    return idx;
}

int weighted_pick(const std::vector<const PlayerParams*>& lineup, util::Rng& rng) {
    double total = 0.0;
    for (const auto* p : lineup) total += p->attempt_weight();
    const double u = rng.unit() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < lineup.size(); ++i) {
        acc += lineup[i]->attempt_weight();
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(lineup.size()) - 1;
}

}  // namespace

SeasonPaths generate_season(const SynthConfig& config, const std::filesystem::path& out_dir,
                            GroundTruthManifest* out_manifest, const core::CourtSpec& court) {
    validate_config(config, court);
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "tracking");

    std::vector<PlayerParams> league = make_league(config);
    std::vector<PlayerParams*> team_a, team_b;
    for (auto& p : league) (p.team_id == "10" ? team_a : team_b).push_back(&p);

    GroundTruthManifest manifest;
    manifest.seed = config.seed;
    manifest.make_model = config.make_model;
    for (const auto& [name, w] : config.make_model.weights) {
        (void)w;
        manifest.informative_features.push_back(name);
    }

    std::map<std::string, int> attempts, makes, games_played;

    std::ostringstream pbp;
    pbp << "GAME_ID,EVENTNUM,EVENTMSGTYPE,PERIOD,GAME_CLOCK_S,TEAM_ID,PLAYER1_ID,DESCRIPTION\n";

    SeasonPaths paths;

    for (int g = 0; g < config.n_games; ++g) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "00215%05d", g + 1);
        const std::string game_id = buf;

        util::Rng game_rng(util::derive_seed(config.seed, "game", static_cast<std::uint64_t>(g)));
        const auto lineup_a_idx = pick_lineup(config.n_players_per_team, game_rng);
        const auto lineup_b_idx = pick_lineup(config.n_players_per_team, game_rng);
        std::vector<const PlayerParams*> lineup_a, lineup_b;
        for (int i : lineup_a_idx) lineup_a.push_back(team_a[i]);
        for (int i : lineup_b_idx) lineup_b.push_back(team_b[i]);
        for (const auto* p : lineup_a) games_played[p->player_id]++;
        for (const auto* p : lineup_b) games_played[p->player_id]++;

        ingest::TrackingData tracking;
        tracking.game_id = game_id;

        const std::int64_t game_base_ms = 1445000000000LL + static_cast<std::int64_t>(g) * 36000000LL;
        std::vector<int> period_play_count(5, 0);

        for (int p = 0; p < config.plays_per_game; ++p) {
            util::Rng play_rng(util::derive_seed(
                util::derive_seed(config.seed, "game", static_cast<std::uint64_t>(g)), "play",
                static_cast<std::uint64_t>(p)));

            const bool offense_a = p % 2 == 0;
            const auto& offense = offense_a ? lineup_a : lineup_b;
            const auto& defense = offense_a ? lineup_b : lineup_a;
            const std::string offense_team = offense_a ? "10" : "20";

            const int period = 1 + (p * 4) / config.plays_per_game;
            const int k = period_play_count[period]++;
            const double gc_release = std::max(2.0, 700.0 - 45.0 * k);

            // team 10 attacks right in the first half
            const bool right =
                (offense_team == "10") == (period <= 2);
            const Point basket = right ? court.basket_right : court.basket_left;

            const int shooter_idx = weighted_pick(offense, play_rng);
            const PlayerParams& shooter = *offense[shooter_idx];
            std::vector<const PlayerParams*> teammates;
            for (std::size_t i = 0; i < offense.size(); ++i)
                if (static_cast<int>(i) != shooter_idx) teammates.push_back(offense[i]);

            const long event_id = 2 + 2L * p;
            ingest::TrackedEvent event;
            ManifestPlay play = script_play(config, court, game_id, event_id, period, gc_release,
                                            shooter, teammates, defense, basket,
                                            game_base_ms + static_cast<std::int64_t>(p) * 60000,
                                            play_rng, &event);
            tracking.events.push_back(std::move(event));
            manifest.plays.push_back(play);

            attempts[shooter.player_id]++;
            if (play.made) makes[shooter.player_id]++;

            std::snprintf(buf, sizeof(buf), "%d' 3PT Jump Shot",
                          static_cast<int>(std::lround(play.features.at("shot_dist"))));
            const std::string desc = (play.made ? std::string() : std::string("MISS ")) +
                                     shooter.name + " " + buf;
            pbp << game_id << ',' << event_id << ',' << (play.made ? 1 : 2) << ',' << period << ','
                << util::fmt6(gc_release) << ',' << offense_team << ',' << shooter.player_id << ','
                << util::csv_escape(desc) << '\n';
        }

        // filler rows: ordinary two-point shots and fouls, no tracking
        for (int k = 0; k < config.filler_events_per_game; ++k) {
            const auto& lineup = k % 2 == 0 ? lineup_a : lineup_b;
            const PlayerParams& actor = *lineup[k % 5];
            const long event_id = 3 + 2L * k;
            if (k % 2 == 0) {
                pbp << game_id << ',' << event_id << ",2,2," << util::fmt6(350.0 - k) << ','
                    << actor.team_id << ',' << actor.player_id << ','
                    << util::csv_escape(actor.name + " 12' Jump Shot") << '\n';
            } else {
                pbp << game_id << ',' << event_id << ",6,2," << util::fmt6(350.0 - k) << ','
                    << actor.team_id << ',' << actor.player_id << ','
                    << util::csv_escape(actor.name + " P.FOUL") << '\n';
            }
        }

        const fs::path tracking_path = out_dir / "tracking" / (game_id + ".json");
        util::atomic_write(tracking_path, ingest::canonical_tracking_json(tracking));
        paths.tracking.push_back(tracking_path);
    }

    std::ostringstream bios;
    bios << "PLAYER_ID,NAME,HEIGHT_CM,WEIGHT_KG,EXPERIENCE_YR,POSITION\n";
    for (const auto& p : league) {
        bios << p.player_id << ',' << util::csv_escape(p.name) << ','
             << static_cast<int>(p.bio.height_cm) << ',' << static_cast<int>(p.bio.weight_kg)
             << ',' << p.bio.experience_yr << ',' << core::position_letter(p.bio.position) << '\n';
    }

    for (const auto& p : league) {
        ManifestPlayer mp;
        mp.player_id = p.player_id;
        mp.name = p.name;
        mp.team_id = p.team_id;
        mp.usage_score = p.usage;
        mp.skill_offset = p.skill;
        mp.suppression = p.suppression;
        mp.attempts = attempts.count(p.player_id) ? attempts[p.player_id] : 0;
        mp.makes = makes.count(p.player_id) ? makes[p.player_id] : 0;
        mp.games_played = games_played.count(p.player_id) ? games_played[p.player_id] : 0;
        manifest.players.push_back(std::move(mp));
    }

    paths.playbyplay = out_dir / "pbp.csv";
    paths.bios = out_dir / "bios.csv";
    paths.manifest = out_dir / "manifest.json";
    util::atomic_write(paths.playbyplay, pbp.str());
    util::atomic_write(paths.bios, bios.str());
    util::atomic_write(paths.manifest, manifest_to_json(manifest));

    if (out_manifest) *out_manifest = std::move(manifest);
    return paths;
}

std::string manifest_to_json(const GroundTruthManifest& m) {
    ordered_json doc;
    doc["schema_version"] = m.schema_version;
    doc["seed"] = m.seed;
    ordered_json weights = ordered_json::array();
    for (const auto& [name, w] : m.make_model.weights)
        weights.push_back({{"feature", name}, {"weight", w}});
    doc["make_model"] = {{"intercept", m.make_model.intercept}, {"weights", std::move(weights)}};
    doc["informative_features"] = m.informative_features;
    doc["noise_features"] = m.noise_features;

    ordered_json players = ordered_json::array();
    for (const auto& p : m.players) {
        players.push_back({{"player_id", p.player_id},
                           {"name", p.name},
                           {"team_id", p.team_id},
                           {"usage_score", p.usage_score},
                           {"skill_offset", p.skill_offset},
                           {"suppression", p.suppression},
                           {"attempts", p.attempts},
                           {"makes", p.makes},
                           {"games_played", p.games_played}});
    }
    doc["players"] = std::move(players);

    ordered_json plays = ordered_json::array();
    for (const auto& p : m.plays) {
        ordered_json features;
        for (const auto& [name, v] : p.features) features[name] = v;
        plays.push_back({{"game_id", p.game_id},
                         {"event_id", p.event_id},
                         {"shooter_id", p.shooter_id},
                         {"period", p.period},
                         {"features", std::move(features)},
                         {"p_make", p.p_make},
                         {"made", p.made}});
    }
    doc["plays"] = std::move(plays);
    return doc.dump(2);
}

GroundTruthManifest parse_manifest(const std::string& content, const std::string& source_name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("manifest parse error in " + source_name + ": " + e.what());
    }
    GroundTruthManifest m;
    m.schema_version = doc.at("schema_version").get<int>();
    if (m.schema_version != 1)
        throw std::runtime_error(source_name + ": unsupported manifest schema version " +
                                 std::to_string(m.schema_version));
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.make_model.intercept = doc.at("make_model").at("intercept").get<double>();
    for (const auto& w : doc.at("make_model").at("weights"))
        m.make_model.weights.emplace_back(w.at("feature").get<std::string>(),
                                          w.at("weight").get<double>());
    m.informative_features = doc.at("informative_features").get<std::vector<std::string>>();
    m.noise_features = doc.at("noise_features").get<std::vector<std::string>>();
    for (const auto& p : doc.at("players")) {
        ManifestPlayer mp;
        mp.player_id = p.at("player_id").get<std::string>();
        mp.name = p.at("name").get<std::string>();
        mp.team_id = p.at("team_id").get<std::string>();
        mp.usage_score = p.at("usage_score").get<double>();
        mp.skill_offset = p.at("skill_offset").get<double>();
        mp.suppression = p.at("suppression").get<double>();
        mp.attempts = p.at("attempts").get<int>();
        mp.makes = p.at("makes").get<int>();
        mp.games_played = p.at("games_played").get<int>();
        m.players.push_back(std::move(mp));
    }
    for (const auto& p : doc.at("plays")) {
        ManifestPlay mp;
        mp.game_id = p.at("game_id").get<std::string>();
        mp.event_id = p.at("event_id").get<long>();
        mp.shooter_id = p.at("shooter_id").get<std::string>();
        mp.period = p.at("period").get<int>();
        for (const auto& [name, v] : p.at("features").items())
            mp.features[name] = v.get<double>();
        mp.p_make = p.at("p_make").get<double>();
        mp.made = p.at("made").get<bool>();
        m.plays.push_back(std::move(mp));
    }
    return m;
}

GroundTruthManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(util::read_file(path), path.string());
}

ml::Dataset generate_feature_table(const SynthConfig& config, int n_rows, TableTruth* truth) {
    validate_config(config);
    if (n_rows < 1) throw std::invalid_argument("generate_feature_table: n_rows must be >= 1");

    std::map<std::string, std::pair<double, double>> ranges = {
        {"ndd_median", {config.ndd_min, config.ndd_max}},
        {"off_hull_area_mean", {config.hull_area_min, config.hull_area_max}},
        {"ball_path_len", {config.ball_path_min, config.ball_path_max}},
        {"shot_clock_release", {config.shot_clock_min, config.shot_clock_max}},
    };

    std::vector<std::string> informative;
    std::vector<double> weights;
    for (const auto& [name, w] : config.make_model.weights) {
        informative.push_back(name);
        weights.push_back(w);
    }

    ml::Dataset data;
    const int p = static_cast<int>(informative.size()) + config.noise_features;
    data.x.resize(n_rows, p);
    data.y.resize(n_rows);
    data.columns = informative;
    std::vector<std::string> noise_names;
    for (int j = 0; j < config.noise_features; ++j) {
        noise_names.push_back("noise_" + std::to_string(j));
        data.columns.push_back(noise_names.back());
    }

    util::Rng rng(util::derive_seed(config.seed, "feature-table"));
    std::vector<double> p_make;
    for (int i = 0; i < n_rows; ++i) {
        double z = config.make_model.intercept;
        for (std::size_t j = 0; j < informative.size(); ++j) {
            const auto [lo, hi] = ranges.at(informative[j]);
            const double v = rng.uniform(lo, hi);
            data.x(i, static_cast<int>(j)) = v;
            z += weights[j] * v;
        }
        for (int j = 0; j < config.noise_features; ++j)
            data.x(i, static_cast<int>(informative.size()) + j) = rng.normal();
        const double prob = logistic(z);
        p_make.push_back(prob);
        data.y(i) = rng.bernoulli(prob) ? 1.0 : 0.0;
    }

    if (truth) {
        truth->make_model = config.make_model;
        truth->informative_features = informative;
        truth->noise_features = noise_names;
        truth->p_make = std::move(p_make);
    }
    return data;
}

VerifyTolerances VerifyTolerances::defaults() {
    VerifyTolerances t;
    t.per_feature = {{"ndd_median", 0.25},
                     {"off_hull_area_mean", 0.01},
                     {"ball_path_len", 0.01},
                     {"shot_clock_release", 0.001},
                     {"shot_dist", 0.01}};
    return t;
}

double VerifyTolerances::tolerance_for(const std::string& feature) const {
    auto it = per_feature.find(feature);
    return it != per_feature.end() ? it->second : default_tolerance;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const int n = static_cast<int>(sorted.size());
    const int idx = std::min(n - 1, static_cast<int>(std::ceil(q * n)) - 1);
    return sorted[std::max(0, idx)];
}

}  // namespace

VerifyReport verify_manifest(const features::FeatureTable& table,
                             const GroundTruthManifest& manifest,
                             const VerifyTolerances& tolerances) {
    VerifyReport report;
    report.table_rows = table.n_rows();
    report.manifest_plays = static_cast<int>(manifest.plays.size());

    std::map<std::pair<std::string, long>, const ManifestPlay*> by_key;
    for (const auto& p : manifest.plays) by_key[{p.game_id, p.event_id}] = &p;

    std::map<std::string, std::vector<double>> abs_errors;
    for (int i = 0; i < table.n_rows(); ++i) {
        const auto key = std::make_pair(table.keys[i].game_id, table.keys[i].event_id);
        auto it = by_key.find(key);
        if (it == by_key.end())
            throw std::runtime_error("verify_manifest: game/event mismatch: play (" +
                                     key.first + ", " + std::to_string(key.second) +
                                     ") not present in manifest");
        report.matched++;
        for (const auto& [name, truth] : it->second->features) {
            const int col = table.column_index(name);
            abs_errors[name].push_back(std::abs(table.x(i, col) - truth));
        }
    }

    bool all_pass = report.manifest_plays - report.matched <= tolerances.max_missing_plays;
    for (auto& [name, errs] : abs_errors) {
        std::sort(errs.begin(), errs.end());
        FeatureCheck check;
        check.feature = name;
        check.p50 = quantile_sorted(errs, 0.50);
        check.p90 = quantile_sorted(errs, 0.90);
        check.max = errs.back();
        check.tolerance = tolerances.tolerance_for(name);
        check.pass = check.max <= check.tolerance;
        all_pass &= check.pass;
        report.checks.push_back(std::move(check));
    }
    report.pass = all_pass;
    return report;
}

std::string VerifyReport::to_text() const {
    std::ostringstream out;
    out << "plays: table=" << table_rows << " manifest=" << manifest_plays
        << " matched=" << matched << "\n";
    for (const auto& c : checks) {
        out << "feature " << c.feature << ": p50=" << util::fmt6(c.p50)
            << " p90=" << util::fmt6(c.p90) << " max=" << util::fmt6(c.max)
            << " tol=" << util::fmt6(c.tolerance) << (c.pass ? " PASS" : " FAIL") << "\n";
    }
    out << "verification: " << (pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace trey::synth
