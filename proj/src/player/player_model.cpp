#include "trey/player/player_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trey/util/csv.hpp"
#include "trey/util/parallel.hpp"
#include "trey/util/rng.hpp"

namespace trey::player {

AggregateResult aggregate_players(const features::FeatureTable& table, const GamesIndex& games,
                                  const PlayerModelConfig& config) {
    if (table.n_rows() == 0) throw std::runtime_error("aggregate_players: empty table");

    const int n_feat = features::kAggregateColumns;
    AggregateResult result;
    result.feature_names.assign(table.columns.begin(), table.columns.begin() + n_feat);

    struct Acc {
        int attempts = 0;
        int makes = 0;
        Eigen::VectorXd sums;
    };
    std::map<std::string, Acc> by_player;
    for (int i = 0; i < table.n_rows(); ++i) {
        auto& acc = by_player[table.keys[i].shooter_id];
        if (acc.sums.size() == 0) acc.sums = Eigen::VectorXd::Zero(n_feat);
        acc.attempts++;
        if (table.made(i) > 0.5) acc.makes++;
        acc.sums += table.x.row(i).head(n_feat).transpose();
    }

    for (const auto& [player_id, acc] : by_player) {
        if (acc.attempts < config.min_attempts) {
            result.filtered_players.push_back(player_id);
            continue;
        }
        PlayerAggregate agg;
        agg.player_id = player_id;
        agg.attempts_total = acc.attempts;
        agg.makes_total = acc.makes;
        agg.three_pct = static_cast<double>(acc.makes) / acc.attempts;
        agg.feature_means = acc.sums / static_cast<double>(acc.attempts);

        auto it = games.find(player_id);
        agg.games_played = it != games.end() ? it->second.games_played : 0;
        agg.name = it != games.end() ? it->second.name : player_id;
        if (agg.games_played < 1) {
            result.filtered_players.push_back(player_id);
            continue;
        }
        agg.actual_3pa_per_game = static_cast<double>(acc.attempts) / agg.games_played;
        result.players.push_back(std::move(agg));
    }
    // map iteration is already ordered; keep the contract explicit
    std::sort(result.players.begin(), result.players.end(),
              [](const auto& a, const auto& b) { return a.player_id < b.player_id; });
    return result;
}

std::pair<std::vector<PlayerAggregate>, std::vector<PlayerAggregate>> split_train_test(
    const std::vector<PlayerAggregate>& aggregates, double test_fraction, std::uint64_t seed) {
    const int n = static_cast<int>(aggregates.size());
    if (n < 10) throw std::runtime_error("split_train_test: too few aggregates (" +
                                         std::to_string(n) + " < 10)");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("split_train_test: test_fraction must be in (0,1)");

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    util::Rng rng(util::derive_seed(seed, "train-test-split"));
    rng.shuffle(std::span<int>(idx));

    int n_test = static_cast<int>(std::llround(test_fraction * n));
    n_test = std::clamp(n_test, 1, n - 5);

    std::vector<PlayerAggregate> holdout, train;
    for (int i = 0; i < n_test; ++i) holdout.push_back(aggregates[idx[i]]);
    for (int i = n_test; i < n; ++i) train.push_back(aggregates[idx[i]]);
    auto by_id = [](const auto& a, const auto& b) { return a.player_id < b.player_id; };
    std::sort(holdout.begin(), holdout.end(), by_id);
    std::sort(train.begin(), train.end(), by_id);
    return {std::move(train), std::move(holdout)};
}

namespace {

ml::Dataset make_dataset(const std::vector<const PlayerAggregate*>& rows,
                         const std::vector<std::string>& feature_names) {
    ml::Dataset d;
    const int p = static_cast<int>(feature_names.size()) + 1;
    d.x.resize(static_cast<int>(rows.size()), p);
    d.y.resize(static_cast<int>(rows.size()));
    d.columns = feature_names;
    d.columns.push_back("three_pct");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.x.row(static_cast<int>(i)).head(p - 1) = rows[i]->feature_means.transpose();
        d.x(static_cast<int>(i), p - 1) = rows[i]->three_pct;
        d.y(static_cast<int>(i)) = rows[i]->actual_3pa_per_game;
    }
    return d;
}

Eigen::VectorXd aggregate_row(const PlayerAggregate& agg) {
    Eigen::VectorXd v(agg.feature_means.size() + 1);
    v.head(agg.feature_means.size()) = agg.feature_means;
    v(agg.feature_means.size()) = agg.three_pct;
    return v;
}

PlayerScore make_score(const PlayerAggregate& agg, double predicted, double rmse, double r2,
                       bool is_holdout) {
    PlayerScore s;
    s.player_id = agg.player_id;
    s.name = agg.name;
    s.attempts = agg.attempts_total;
    s.three_pct = agg.three_pct;
    s.actual_3pa_per_game = agg.actual_3pa_per_game;
    s.predicted_3pa_per_game = predicted;
    s.deviation = deviation(agg.actual_3pa_per_game, predicted);
    s.propensity = propensity(s.deviation, agg.three_pct);
    s.model_rmse_on_holdout = rmse;
    s.model_r2_on_holdout = r2;
    s.holdout_player = is_holdout;
    return s;
}

}  // namespace

LooResult loo_harness(const std::vector<PlayerAggregate>& train,
                      const std::vector<PlayerAggregate>& holdout,
                      const std::vector<std::string>& feature_names,
                      const PlayerModelConfig& config, int threads) {
    const int n_train = static_cast<int>(train.size());
    if (n_train < 5) throw std::runtime_error("loo_harness: train size must be >= 5");

    std::vector<const PlayerAggregate*> holdout_ptrs;
    for (const auto& a : holdout) holdout_ptrs.push_back(&a);
    const ml::Dataset holdout_data =
        holdout.empty() ? ml::Dataset{} : make_dataset(holdout_ptrs, feature_names);
    std::vector<double> holdout_actual;
    for (const auto& a : holdout) holdout_actual.push_back(a.actual_3pa_per_game);

    LooResult result;
    result.scores.resize(train.size() + holdout.size());
    result.metrics.resize(train.size());
    result.loo_train_ids.resize(train.size());

    util::parallel_for(n_train, threads, [&](int i) {
        std::vector<const PlayerAggregate*> rows;
        std::vector<std::string> ids;
        for (int j = 0; j < n_train; ++j) {
            if (j == i) continue;
            rows.push_back(&train[j]);
            ids.push_back(train[j].player_id);
        }
        gbm::GbmConfig gc = config.gbm;
        gc.seed = util::derive_seed(config.seed, "loo-model", static_cast<std::uint64_t>(i));
        const gbm::GbmModel model = gbm::train_gbm(make_dataset(rows, feature_names), gc);

        const double predicted = model.predict(aggregate_row(train[i]));

        double rmse = 0.0, r2 = 0.0;
        if (!holdout.empty()) {
            std::vector<double> pred(holdout.size());
            for (std::size_t h = 0; h < holdout.size(); ++h)
                pred[h] = model.predict_row(holdout_data.x, static_cast<int>(h));
            std::tie(rmse, r2) = gbm::rmse_r2(holdout_actual, pred);
        }

        result.scores[i] = make_score(train[i], predicted, rmse, r2, false);
        result.metrics[i] = {train[i].player_id, rmse, r2};
        result.loo_train_ids[i] = std::move(ids);
    });

    if (!holdout.empty()) {
        std::vector<const PlayerAggregate*> all_train;
        for (const auto& a : train) {
            all_train.push_back(&a);
            result.full_train_ids.push_back(a.player_id);
        }
        gbm::GbmConfig gc = config.gbm;
        gc.seed = util::derive_seed(config.seed, "full-model");
        const gbm::GbmModel model = gbm::train_gbm(make_dataset(all_train, feature_names), gc);

        std::vector<double> pred(holdout.size());
        for (std::size_t h = 0; h < holdout.size(); ++h)
            pred[h] = model.predict_row(holdout_data.x, static_cast<int>(h));
        const auto [rmse, r2] = gbm::rmse_r2(holdout_actual, pred);

        for (std::size_t h = 0; h < holdout.size(); ++h)
            result.scores[train.size() + h] = make_score(holdout[h], pred[h], rmse, r2, true);
    }

    std::sort(result.scores.begin(), result.scores.end(),
              [](const auto& a, const auto& b) { return a.player_id < b.player_id; });
    return result;
}

double deviation(double actual_3pa, double predicted_3pa) { return actual_3pa - predicted_3pa; }

double propensity(double deviation, double three_pct) {
    if (three_pct < 0.0 || three_pct > 1.0)
        throw std::invalid_argument("propensity: three_pct outside [0,1]");
    return deviation * three_pct * three_pct * three_pct;
}

RankReport rank_players(const std::vector<PlayerScore>& scores, int top_k) {
    if (scores.empty()) throw std::runtime_error("rank_players: no scores");

    RankReport report;
    report.by_propensity = scores;
    std::stable_sort(report.by_propensity.begin(), report.by_propensity.end(),
                     [](const auto& a, const auto& b) {
                         if (a.propensity != b.propensity) return a.propensity > b.propensity;
                         return a.player_id < b.player_id;
                     });

    auto by_dev_desc = scores;
    std::stable_sort(by_dev_desc.begin(), by_dev_desc.end(), [](const auto& a, const auto& b) {
        if (a.deviation != b.deviation) return a.deviation > b.deviation;
        return a.player_id < b.player_id;
    });
    auto by_dev_asc = scores;
    std::stable_sort(by_dev_asc.begin(), by_dev_asc.end(), [](const auto& a, const auto& b) {
        if (a.deviation != b.deviation) return a.deviation < b.deviation;
        return a.player_id < b.player_id;
    });
    const int k = std::min<int>(top_k, static_cast<int>(scores.size()));
    report.top_positive_dev.assign(by_dev_desc.begin(), by_dev_desc.begin() + k);
    report.top_negative_dev.assign(by_dev_asc.begin(), by_dev_asc.begin() + k);
    return report;
}

std::string scores_csv(const std::vector<PlayerScore>& scores) {
    std::ostringstream out;
    out << "player_id,name,attempts,three_pct,actual_3pa_pg,predicted_3pa_pg,deviation,"
           "propensity,model_rmse,model_r2\n";
    for (const auto& s : scores) {
        out << util::csv_escape(s.player_id) << ',' << util::csv_escape(s.name) << ','
            << s.attempts << ',' << util::fmt6(s.three_pct) << ','
            << util::fmt6(s.actual_3pa_per_game) << ',' << util::fmt6(s.predicted_3pa_per_game)
            << ',' << util::fmt6(s.deviation) << ',' << util::fmt6(s.propensity) << ','
            << util::fmt6(s.model_rmse_on_holdout) << ',' << util::fmt6(s.model_r2_on_holdout)
            << '\n';
    }
    return out.str();
}

std::string metrics_csv(const std::vector<ModelMetric>& metrics) {
    std::ostringstream out;
    out << "player_id,rmse,r2\n";
    for (const auto& m : metrics)
        out << util::csv_escape(m.player_id) << ',' << util::fmt6(m.rmse) << ','
            << util::fmt6(m.r2) << '\n';
    return out.str();
}

std::string games_index_csv(const GamesIndex& games) {
    std::ostringstream out;
    out << "player_id,name,games_played\n";
    for (const auto& [id, entry] : games)
        out << util::csv_escape(id) << ',' << util::csv_escape(entry.name) << ','
            << entry.games_played << '\n';
    return out.str();
}

GamesIndex parse_games_index_csv(const std::string& content, const std::string& source_name) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(source_name + ": empty games index");
    GamesIndex games;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = util::csv_split(line);
        if (fields.size() < 3)
            throw std::runtime_error(source_name + ": bad games index row: " + line);
        games[fields[0]] = {fields[1],
                            static_cast<int>(util::parse_long(fields[2], "games_played"))};
    }
    return games;
}

}  // namespace trey::player
