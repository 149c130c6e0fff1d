#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "trey/boruta/boruta.hpp"
#include "trey/synth/synth.hpp"
#include "trey/util/rng.hpp"

using namespace trey;

namespace {

// fast desk-scale configuration shared by the statistical tests
boruta::BorutaConfig fast_config(std::uint64_t seed) {
    boruta::BorutaConfig config;
    config.max_runs = 40;
    config.alpha = 0.01;
    config.n_repeats = 6;
    config.forest.n_trees = 100;
    config.forest.min_leaf = 10;
    config.seed = seed;
    return config;
}

synth::SynthConfig planted_table_config(std::uint64_t seed, int noise) {
    synth::SynthConfig config;
    config.seed = seed;
    config.noise_features = noise;
    config.make_model.intercept = 1.2;
    config.make_model.weights = {{"ndd_median", -0.35}, {"off_hull_area_mean", 0.002}};
    return config;
}

}  // namespace

TEST_CASE("binomial tails are exact at p = 1/2") {
    CHECK(boruta::binom_tail_ge(10, 10) == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-12));
    CHECK(boruta::binom_tail_le(10, 0) == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-12));
    CHECK(boruta::binom_tail_ge(10, 0) == doctest::Approx(1.0));
    CHECK(boruta::binom_tail_le(10, 10) == doctest::Approx(1.0));
    // ge(k) + le(k-1) == 1
    for (int k = 1; k <= 12; ++k)
        CHECK(boruta::binom_tail_ge(12, k) + boruta::binom_tail_le(12, k - 1) ==
              doctest::Approx(1.0).epsilon(1e-9));
    // symmetric distribution
    CHECK(boruta::binom_tail_ge(15, 10) == doctest::Approx(boruta::binom_tail_le(15, 5)));
}

TEST_CASE("shadows are within-column permutations") {
    util::Rng value_rng(3);
    for (int iter = 0; iter < 50; ++iter) {
        Eigen::VectorXd col(40);
        for (int i = 0; i < 40; ++i) col(i) = value_rng.normal();
        util::Rng rng(iter);
        const auto shadow = boruta::make_shadow(col, rng);
        std::vector<double> a(col.data(), col.data() + col.size());
        std::vector<double> b(shadow.data(), shadow.data() + shadow.size());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("planted logistic table: signal confirmed, noise rejected") {
    const auto data = synth::generate_feature_table(planted_table_config(1234, 6), 2000);
    const auto report = boruta::run_boruta(data, fast_config(99), 1);

    CHECK(report.feature("ndd_median").decision == boruta::Decision::Confirmed);
    for (int j = 0; j < 6; ++j)
        CHECK(report.feature("noise_" + std::to_string(j)).decision ==
              boruta::Decision::Rejected);

    // hit-fraction consequences of the binomial tests
    for (const auto& f : report.features) {
        const double fraction = static_cast<double>(f.hits) / f.runs;
        if (f.decision == boruta::Decision::Confirmed) CHECK(fraction > 0.5);
        if (f.decision == boruta::Decision::Rejected) CHECK(fraction < 0.5);
    }

    // every distribution list has one z per distribution run
    for (const auto& f : report.features)
        CHECK(static_cast<int>(f.z_samples.size()) == report.distribution_runs);
    CHECK(static_cast<int>(report.shadow_max_z.size()) == report.distribution_runs);
}

TEST_CASE("an all-noise table confirms nothing") {
    synth::SynthConfig config = planted_table_config(777, 8);
    config.make_model.weights.clear();  // intercept only
    const auto data = synth::generate_feature_table(config, 1200);
    const auto report = boruta::run_boruta(data, fast_config(5), 1);
    for (const auto& f : report.features)
        CHECK(f.decision != boruta::Decision::Confirmed);
}

TEST_CASE("a leaked target is confirmed at the binomial minimum") {
    const int n = 400;
    ml::Dataset data;
    data.x.resize(n, 5);
    data.y.resize(n);
    data.columns = {"leak", "n0", "n1", "n2", "n3"};
    util::Rng rng(21);
    for (int i = 0; i < n; ++i) {
        data.y(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
        data.x(i, 0) = data.y(i);
        for (int j = 1; j < 5; ++j) data.x(i, j) = rng.normal();
    }

    auto config = fast_config(31);
    const auto report = boruta::run_boruta(data, config, 1);
    const auto& leak = report.feature("leak");
    CHECK(leak.decision == boruta::Decision::Confirmed);

    // minimum decidable run count: smallest R with 0.5^R < alpha / (2 * live)
    int r_min = 1;
    while (boruta::binom_tail_ge(r_min, r_min) >= config.alpha / (2.0 * 5)) ++r_min;
    CHECK(leak.decided_at_run == r_min);
}

TEST_CASE("boruta results are deterministic and thread-count independent") {
    const auto data = synth::generate_feature_table(planted_table_config(50, 3), 600);
    auto config = fast_config(123);
    config.forest.n_trees = 60;
    config.max_runs = 15;
    config.n_repeats = 3;

    const auto a = boruta::run_boruta(data, config, 1);
    const auto b = boruta::run_boruta(data, config, 4);
    REQUIRE(a.features.size() == b.features.size());
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        CHECK(a.features[i].decision == b.features[i].decision);
        CHECK(a.features[i].hits == b.features[i].hits);
        CHECK(a.features[i].z_samples == b.features[i].z_samples);
    }
    CHECK(a.shadow_max_z == b.shadow_max_z);
    CHECK(boruta::decision_summary_csv(a) == boruta::decision_summary_csv(b));
}

TEST_CASE("rejected features drop out of later decision runs") {
    const auto data = synth::generate_feature_table(planted_table_config(60, 6), 1500);
    const auto report = boruta::run_boruta(data, fast_config(61), 1);
    int rejected = 0;
    for (const auto& f : report.features) {
        if (f.decision != boruta::Decision::Rejected) continue;
        ++rejected;
        // participation stops at the rejection run
        CHECK(f.runs == f.decided_at_run);
        CHECK(f.runs <= report.decision_runs);
    }
    CHECK(rejected >= 6);
}

TEST_CASE("distribution export shapes and the planted median dominates shadows") {
    const auto data = synth::generate_feature_table(planted_table_config(70, 1), 1500);
    auto config = fast_config(71);
    config.n_repeats = 30;
    const auto report = boruta::run_boruta(data, config, 1);

    // 3 features x 30 runs + 3 shadow aggregates x 30 runs
    const std::string csv = boruta::importance_distribution_csv(report);
    const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    CHECK(rows == (3 + 3) * 30);

    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    CHECK(median(report.feature("ndd_median").z_samples) > median(report.shadow_max_z));

    boruta::ImportanceReport empty;
    CHECK_THROWS(boruta::importance_distribution_csv(empty));
}

TEST_CASE("confirmation rate is monotone in the planted effect size") {
    const int seeds = 8;
    const double effects[3] = {0.0, 0.15, 0.35};
    int confirmed[3] = {0, 0, 0};
    for (int level = 0; level < 3; ++level) {
        for (int s = 0; s < seeds; ++s) {
            synth::SynthConfig gen = planted_table_config(900 + s, 3);
            gen.make_model.weights = {{"ndd_median", -effects[level]}};
            const auto data = synth::generate_feature_table(gen, 500);
            auto config = fast_config(37 + s);
            config.forest.n_trees = 60;
            config.max_runs = 25;
            config.n_repeats = 1;
            const auto report = boruta::run_boruta(data, config, 1);
            if (report.feature("ndd_median").decision == boruta::Decision::Confirmed)
                confirmed[level]++;
        }
    }
    CHECK(confirmed[0] <= confirmed[1]);
    CHECK(confirmed[1] <= confirmed[2]);
    CHECK(confirmed[2] == seeds);  // strong effect always recovered
}

TEST_CASE("configuration validation") {
    const auto data = synth::generate_feature_table(planted_table_config(80, 2), 100);
    auto config = fast_config(1);
    config.max_runs = 5;
    CHECK_THROWS(boruta::run_boruta(data, config, 1));
    config = fast_config(1);
    config.alpha = 0.7;
    CHECK_THROWS(boruta::run_boruta(data, config, 1));

    ml::Dataset tiny;
    tiny.x.resize(10, 1);
    tiny.x.setRandom();
    tiny.y.resize(10);
    for (int i = 0; i < 10; ++i) tiny.y(i) = i % 2;
    tiny.columns = {"only"};
    CHECK_THROWS(boruta::run_boruta(tiny, fast_config(1), 1));
}
