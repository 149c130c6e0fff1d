#include "trey/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trey/geom/geometry.hpp"
#include "trey/util/csv.hpp"
#include "trey/util/io.hpp"
#include "trey/util/rng.hpp"

namespace trey::features {

double FeatureVector::operator[](const std::string& name) const {
    const auto& cols = feature_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == name) return values(static_cast<int>(i));
    throw std::runtime_error("no such feature: " + name);
}

int FeatureTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw std::runtime_error("feature table: missing column " + name);
}

ml::Dataset FeatureTable::to_dataset() const {
    ml::Dataset d;
    d.x = x;
    d.y = made;
    d.columns = columns;
    return d;
}

namespace {

double median_sorted_copy(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const core::PlayerOnCourt& player_in(const core::Moment& m, const std::string& player_id) {
    for (const auto& p : m.players)
        if (p.player_id == player_id) return p;
    throw std::runtime_error("shooter " + player_id + " missing from window moment");
}

}  // namespace

FeatureVector extract_features(const core::ThreePointPlay& play, const BioIndex& bios,
                               const FeatureConfig& config, ExtractStats* stats) {
    const auto& w = play.window;
    if (w.size() < 2) throw std::runtime_error("extract_features: window shorter than 2 frames");
    const int release = play.release_index;
    const core::CourtSpec& court = config.court;

    std::vector<double> ndd(w.size());
    std::vector<geom::Point> ball_path(w.size());
    std::vector<geom::Point> shooter_path(w.size());
    double off_hull_sum = 0.0, def_hull_sum = 0.0;

    int touch_changes = 0;
    std::string ball_holder;

    std::string release_defender_id;

    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& m = w[i];
        const auto& shooter = player_in(m, play.shooter_id);
        const geom::Point shooter_pos = shooter.pos();

        std::vector<geom::Point> offense, defense;
        std::vector<std::string> offense_ids, defense_ids;
        for (const auto& p : m.players) {
            if (p.team_id == play.shooter_team_id) {
                offense.push_back(p.pos());
                offense_ids.push_back(p.player_id);
            } else {
                defense.push_back(p.pos());
                defense_ids.push_back(p.player_id);
            }
        }

        const auto [def_idx, def_dist] = geom::nearest_opponent(shooter_pos, defense);
        ndd[i] = def_dist;
        if (static_cast<int>(i) == release) release_defender_id = defense_ids[def_idx];

        off_hull_sum += geom::polygon_area(geom::convex_hull(offense));
        def_hull_sum += geom::polygon_area(geom::convex_hull(defense));

        ball_path[i] = m.ball_xy();
        shooter_path[i] = shooter_pos;

        // Possession proxy: the offensive player nearest the ball, with a
        // hysteresis band so jitter does not flip the holder.
        const auto [near_idx, near_dist] = geom::nearest_opponent(m.ball_xy(), offense);
        const std::string& nearest_id = offense_ids[near_idx];
        if (ball_holder.empty()) {
            ball_holder = nearest_id;
        } else if (nearest_id != ball_holder) {
            double incumbent = near_dist;
            for (std::size_t j = 0; j < offense_ids.size(); ++j)
                if (offense_ids[j] == ball_holder) incumbent = (m.ball_xy() - offense[j]).norm();
            if (near_dist < incumbent - config.touch_hysteresis_ft) {
                ball_holder = nearest_id;
                touch_changes++;
            }
        }
    }

    const auto& rm = w[release];
    const auto& shooter_r = player_in(rm, play.shooter_id);
    const geom::Point shooter_pos_r = shooter_r.pos();

    const double duration_s =
        static_cast<double>(w.back().wall_clock_ms - w.front().wall_clock_ms) / 1000.0;
    const double ball_len = geom::path_length(ball_path);

    FeatureVector fv;
    fv.values.resize(static_cast<int>(feature_columns().size()));
    fv.values.setZero();
    fv.made = play.made;

    fv.values(0) = median_sorted_copy(ndd);
    fv.values(1) = *std::min_element(ndd.begin(), ndd.end());
    fv.values(2) = std::accumulate(ndd.begin(), ndd.end(), 0.0) / static_cast<double>(ndd.size());
    fv.values(3) = ndd[release];
    fv.values(4) = off_hull_sum / static_cast<double>(w.size());
    fv.values(5) = def_hull_sum / static_cast<double>(w.size());
    fv.values(6) = ball_len;
    fv.values(7) = ball_len / duration_s;
    fv.values(8) = static_cast<double>(touch_changes);
    fv.values(9) = geom::path_length(shooter_path);
    fv.values(10) = rm.shot_clock_s.value_or(24.0);  // absent means freshly reset
    fv.values(11) = rm.game_clock_s;
    fv.values(12) = static_cast<double>(rm.period);
    fv.values(13) = (shooter_pos_r - play.attacking_basket).norm();

    const bool attacking_right = play.attacking_basket.x() > court.length * 0.5;
    const bool corner = attacking_right ? shooter_r.x >= court.length - court.corner_zone_depth
                                        : shooter_r.x <= court.corner_zone_depth;
    fv.values(14) = corner ? 1.0 : 0.0;

    const auto shooter_bio = bios.find(play.shooter_id);
    const auto defender_bio = bios.find(release_defender_id);
    if (shooter_bio != bios.end() && defender_bio != bios.end()) {
        fv.values(15) = shooter_bio->second.height_cm - defender_bio->second.height_cm;
        fv.values(16) = shooter_bio->second.weight_kg - defender_bio->second.weight_kg;
        fv.values(17) =
            static_cast<double>(shooter_bio->second.experience_yr - defender_bio->second.experience_yr);
        fv.values(18) =
            shooter_bio->second.position == defender_bio->second.position ? 1.0 : 0.0;
    } else if (stats) {
        stats->missing_bio++;
    }
    // shooter_enc stays 0 until encode_shooters runs

    return fv;
}

int fold_of(const std::string& game_id, long event_id, int folds) {
    const std::string key = game_id + '\x1f' + std::to_string(event_id);
    return static_cast<int>(util::fnv1a64(key) % static_cast<std::uint64_t>(folds));
}

void encode_shooters(FeatureTable& table, int folds, double smoothing) {
    if (folds < 2) throw std::invalid_argument("encode_shooters: folds must be >= 2");
    const int n = table.n_rows();
    const int enc_col = table.column_index("shooter_enc");

    double global_makes = 0.0;
    for (int i = 0; i < n; ++i) global_makes += table.made(i);
    const double global_rate = n > 0 ? global_makes / n : 0.0;

    struct Counts {
        std::vector<double> makes, attempts;  // per fold
    };
    std::map<std::string, Counts> by_shooter;
    std::vector<int> fold(n);
    for (int i = 0; i < n; ++i) {
        fold[i] = fold_of(table.keys[i].game_id, table.keys[i].event_id, folds);
        auto& c = by_shooter[table.keys[i].shooter_id];
        if (c.makes.empty()) {
            c.makes.assign(folds, 0.0);
            c.attempts.assign(folds, 0.0);
        }
        c.makes[fold[i]] += table.made(i);
        c.attempts[fold[i]] += 1.0;
    }

    for (int i = 0; i < n; ++i) {
        const auto& c = by_shooter[table.keys[i].shooter_id];
        double makes_excl = 0.0, attempts_excl = 0.0;
        for (int k = 0; k < folds; ++k) {
            if (k == fold[i]) continue;
            makes_excl += c.makes[k];
            attempts_excl += c.attempts[k];
        }
        table.x(i, enc_col) =
            (makes_excl + smoothing * global_rate) / (attempts_excl + smoothing);
    }
}

FeatureTable assemble_dataset(const std::vector<core::ThreePointPlay>& plays,
                              const BioIndex& bios, const FeatureConfig& config,
                              ExtractStats* stats) {
    if (plays.empty()) throw std::runtime_error("assemble_dataset: empty dataset");

    ExtractStats local;
    ExtractStats& s = stats ? *stats : local;

    std::vector<FeatureVector> rows;
    std::vector<PlayKey> keys;
    for (const auto& play : plays) {
        try {
            rows.push_back(extract_features(play, bios, config, &s));
            keys.push_back({play.game_id, play.event_id, play.shooter_id});
        } catch (const std::exception&) {
            s.plays_dropped++;
        }
    }
    if (rows.empty()) throw std::runtime_error("assemble_dataset: empty dataset");

    FeatureTable table;
    table.columns = feature_columns();
    table.x.resize(static_cast<int>(rows.size()), static_cast<int>(table.columns.size()));
    table.made.resize(static_cast<int>(rows.size()));
    table.keys = std::move(keys);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.x.row(static_cast<int>(i)) = rows[i].values.transpose();
        table.made(static_cast<int>(i)) = rows[i].made ? 1.0 : 0.0;
    }

    encode_shooters(table, config.encode_folds, config.encode_smoothing);
    return table;
}

std::string feature_table_csv(const FeatureTable& table) {
    std::ostringstream out;
    for (const auto& c : table.columns) out << c << ',';
    out << "made,game_id,event_id,shooter_id\n";
    for (int i = 0; i < table.n_rows(); ++i) {
        for (int j = 0; j < table.x.cols(); ++j) out << util::fmt6(table.x(i, j)) << ',';
        out << (table.made(i) > 0.5 ? 1 : 0) << ',' << util::csv_escape(table.keys[i].game_id)
            << ',' << table.keys[i].event_id << ',' << util::csv_escape(table.keys[i].shooter_id)
            << '\n';
    }
    return out.str();
}

FeatureTable parse_feature_table_csv(const std::string& content, const std::string& source_name) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(source_name + ": empty feature table");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = util::csv_split(line);
    int made_idx = -1, game_idx = -1, event_idx = -1, shooter_idx = -1;
    std::vector<int> feature_cols;
    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& h = header[i];
        if (h == "made") made_idx = static_cast<int>(i);
        else if (h == "game_id") game_idx = static_cast<int>(i);
        else if (h == "event_id") event_idx = static_cast<int>(i);
        else if (h == "shooter_id") shooter_idx = static_cast<int>(i);
        else {
            feature_cols.push_back(static_cast<int>(i));
            feature_names.push_back(h);
        }
    }
    if (made_idx < 0) throw std::runtime_error(source_name + ": missing required column made");

    std::vector<std::vector<double>> values;
    std::vector<double> made;
    std::vector<PlayKey> keys;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = util::csv_split(line);
        std::vector<double> row(feature_cols.size());
        for (std::size_t j = 0; j < feature_cols.size(); ++j)
            row[j] = util::parse_double(fields.at(feature_cols[j]), feature_names[j]);
        values.push_back(std::move(row));
        made.push_back(util::parse_double(fields.at(made_idx), "made"));
        PlayKey key;
        if (game_idx >= 0) key.game_id = fields.at(game_idx);
        if (event_idx >= 0) key.event_id = util::parse_long(fields.at(event_idx), "event_id");
        if (shooter_idx >= 0) key.shooter_id = fields.at(shooter_idx);
        keys.push_back(std::move(key));
    }
    if (values.empty()) throw std::runtime_error(source_name + ": empty feature table");

    FeatureTable table;
    table.columns = std::move(feature_names);
    table.x.resize(static_cast<int>(values.size()), static_cast<int>(table.columns.size()));
    table.made.resize(static_cast<int>(values.size()));
    table.keys = std::move(keys);
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < values[i].size(); ++j)
            table.x(static_cast<int>(i), static_cast<int>(j)) = values[i][j];
        table.made(static_cast<int>(i)) = made[i];
    }
    return table;
}

FeatureTable load_feature_table_csv(const std::filesystem::path& path) {
    return parse_feature_table_csv(util::read_file(path), path.string());
}

}  // namespace trey::features
