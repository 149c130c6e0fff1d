#include "trey/boruta/boruta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trey/util/csv.hpp"

namespace trey::boruta {

std::string to_string(Decision d) {
    switch (d) {
        case Decision::Confirmed: return "Confirmed";
        case Decision::Rejected: return "Rejected";
        case Decision::Tentative: return "Tentative";
    }
    return "?";
}

const FeatureReport& ImportanceReport::feature(const std::string& name) const {
    for (const auto& f : features)
        if (f.name == name) return f;
    throw std::runtime_error("no such feature in report: " + name);
}

namespace {

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double binom_tail_ge(int n, int k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    const double log_half = std::log(0.5);
    double p = 0.0;
    for (int i = k; i <= n; ++i) p += std::exp(log_choose(n, i) + n * log_half);
    return std::min(p, 1.0);
}

double binom_tail_le(int n, int k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    const double log_half = std::log(0.5);
    double p = 0.0;
    for (int i = 0; i <= k; ++i) p += std::exp(log_choose(n, i) + n * log_half);
    return std::min(p, 1.0);
}

Eigen::VectorXd make_shadow(const Eigen::VectorXd& source, util::Rng& rng) {
    std::vector<double> values(source.data(), source.data() + source.size());
    rng.shuffle(std::span<double>(values));
    return Eigen::Map<const Eigen::VectorXd>(values.data(), source.size());
}

namespace {

// z = mean / (sd / sqrt(n_trees)); zero when sd is zero.
Eigen::VectorXd z_scores(const forest::ImportanceResult& imp, int n_trees) {
    Eigen::VectorXd z(imp.mean.size());
    const double root_t = std::sqrt(static_cast<double>(n_trees));
    for (int j = 0; j < imp.mean.size(); ++j)
        z(j) = imp.sd(j) == 0.0 ? 0.0 : imp.mean(j) / (imp.sd(j) / root_t);
    return z;
}

// Augments the selected live columns with one shadow each and runs one
// forest + importance pass. Returns z for [live..., shadows...].
Eigen::VectorXd boruta_pass(const ml::Dataset& data, const std::vector<int>& live,
                            const BorutaConfig& config, std::uint64_t run_seed, int threads) {
    const int n = data.n_rows();
    const int m = static_cast<int>(live.size());

    ml::Dataset aug;
    aug.x.resize(n, 2 * m);
    aug.y = data.y;
    aug.columns.reserve(2 * m);
    for (int j = 0; j < m; ++j) {
        aug.x.col(j) = data.x.col(live[j]);
        aug.columns.push_back(data.columns[live[j]]);
    }
    for (int j = 0; j < m; ++j) {
        util::Rng rng(util::derive_seed(run_seed, "shadow", static_cast<std::uint64_t>(j)));
        aug.x.col(m + j) = make_shadow(aug.x.col(j), rng);
        aug.columns.push_back("shadow_" + aug.columns[j]);

        // a shadow must be a reordering of its source
        std::vector<double> a(aug.x.col(j).data(), aug.x.col(j).data() + n);
        std::vector<double> b(aug.x.col(m + j).data(), aug.x.col(m + j).data() + n);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw std::logic_error("boruta: shadow is not a permutation of its source");
    }

    forest::ForestConfig fc = config.forest;
    fc.seed = util::derive_seed(run_seed, "forest");
    fc.mtry = config.forest.mtry;  // 0 resolves against the augmented width
    forest::Forest f = forest::train_forest(aug, fc, threads);
    auto imp = forest::permutation_importance(f, aug, util::derive_seed(run_seed, "importance"),
                                              threads);
    return z_scores(imp, static_cast<int>(f.trees.size()));
}

}  // namespace

ImportanceReport run_boruta(const ml::Dataset& data, const BorutaConfig& config, int threads) {
    const int p = data.n_cols();
    if (p < 2) throw std::invalid_argument("run_boruta: need at least 2 features");
    if (config.max_runs < 10) throw std::invalid_argument("run_boruta: max_runs must be >= 10");
    if (config.alpha <= 0.0 || config.alpha >= 0.5)
        throw std::invalid_argument("run_boruta: alpha must be in (0, 0.5)");
    if (config.n_repeats < 1) throw std::invalid_argument("run_boruta: n_repeats must be >= 1");

    ImportanceReport report;
    report.features.resize(p);
    for (int j = 0; j < p; ++j) report.features[j].name = data.columns[j];

    std::vector<Decision> state(p, Decision::Tentative);

    // Phase 1: decision loop. Live = not rejected; tests apply to tentative.
    int run = 0;
    while (run < config.max_runs) {
        bool any_tentative = false;
        for (const auto& s : state) any_tentative |= s == Decision::Tentative;
        if (!any_tentative) break;

        ++run;
        std::vector<int> live;
        for (int j = 0; j < p; ++j)
            if (state[j] != Decision::Rejected) live.push_back(j);

        const auto z = boruta_pass(data, live, config,
                                   util::derive_seed(config.seed, "decision-run", run), threads);
        const int m = static_cast<int>(live.size());
        double mzsa = z(m);
        for (int j = m + 1; j < 2 * m; ++j) mzsa = std::max(mzsa, z(j));

        for (int j = 0; j < m; ++j) {
            auto& fr = report.features[live[j]];
            fr.runs++;
            if (z(j) > mzsa) fr.hits++;
        }

        int tentative = 0;
        for (const auto& s : state) tentative += s == Decision::Tentative ? 1 : 0;
        const double threshold = config.alpha / (2.0 * tentative);
        for (int j = 0; j < p; ++j) {
            if (state[j] != Decision::Tentative) continue;
            auto& fr = report.features[j];
            if (binom_tail_ge(fr.runs, fr.hits) < threshold) state[j] = Decision::Confirmed;
            else if (binom_tail_le(fr.runs, fr.hits) < threshold) state[j] = Decision::Rejected;
            if (state[j] != Decision::Tentative) fr.decided_at_run = run;
        }
    }
    report.decision_runs = run;
    for (int j = 0; j < p; ++j) report.features[j].decision = state[j];

    // Phase 2: distribution assembly over the full original table, so every
    // feature (rejected ones included) gets an equal-length z sample list.
    std::vector<int> all(p);
    for (int j = 0; j < p; ++j) all[j] = j;
    for (int rep = 1; rep <= config.n_repeats; ++rep) {
        const auto z = boruta_pass(data, all, config,
                                   util::derive_seed(config.seed, "dist-run", rep), threads);
        double zmin = z(p), zmax = z(p), zsum = 0.0;
        for (int j = p; j < 2 * p; ++j) {
            zmin = std::min(zmin, z(j));
            zmax = std::max(zmax, z(j));
            zsum += z(j);
        }
        for (int j = 0; j < p; ++j) report.features[j].z_samples.push_back(z(j));
        report.shadow_min_z.push_back(zmin);
        report.shadow_mean_z.push_back(zsum / p);
        report.shadow_max_z.push_back(zmax);
    }
    report.distribution_runs = config.n_repeats;

    return report;
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string importance_distribution_csv(const ImportanceReport& report) {
    if (report.distribution_runs == 0) throw std::runtime_error("distribution export: no runs");
    std::ostringstream out;
    out << "feature,run,z\n";
    for (const auto& f : report.features)
        for (std::size_t r = 0; r < f.z_samples.size(); ++r)
            out << util::csv_escape(f.name) << ',' << (r + 1) << ',' << util::fmt6(f.z_samples[r])
                << '\n';
    const auto emit_shadow = [&](const char* name, const std::vector<double>& zs) {
        for (std::size_t r = 0; r < zs.size(); ++r)
            out << name << ',' << (r + 1) << ',' << util::fmt6(zs[r]) << '\n';
    };
    emit_shadow("shadow_min", report.shadow_min_z);
    emit_shadow("shadow_mean", report.shadow_mean_z);
    emit_shadow("shadow_max", report.shadow_max_z);
    return out.str();
}

std::string decision_summary_csv(const ImportanceReport& report) {
    std::ostringstream out;
    out << "feature,decision,hits,runs,median_z\n";
    for (const auto& f : report.features)
        out << util::csv_escape(f.name) << ',' << to_string(f.decision) << ',' << f.hits << ','
            << f.runs << ',' << util::fmt6(median_of(f.z_samples)) << '\n';
    return out.str();
}

}  // namespace trey::boruta
