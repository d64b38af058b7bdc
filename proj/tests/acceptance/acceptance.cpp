// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any required criterion fails.
//
//   acceptance            run everything
//   acceptance 1 5 6      run selected criteria
//
// Criterion 10 needs the HIKARI CSV; point NIDSBENCH_HIKARI_CSV at it.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <nidsbench/bench/cli.hpp>
#include <nidsbench/nidsbench.hpp>

#include "../oracles.hpp"
#include "../support.hpp"

using namespace nidsbench;
using namespace testing_support;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

BenchConfig synthetic_config(std::size_t per_class, double separation, std::uint64_t seed) {
    BenchConfig c;
    c.dataset.tag = "synthetic";
    c.dataset.synthetic = SyntheticSpec{per_class, per_class, separation};
    c.seed = seed;
    return c;
}

// ---------------------------------------------------------------------------

Verdict metric_identity() {
    const double f1 = f1_from(0.9074, 0.8859);
    // the same identity through a confusion matrix with those exact rates
    const ConfusionMatrix cm{8859 * 4537, 8859 * 463, 1141 * 4537, 5000000};
    const auto m = metrics_from_confusion(cm);
    const bool ok = std::abs(f1 - 0.8965) <= 1e-4 && std::abs(m.prc - 0.9074) < 1e-12 &&
                    std::abs(m.rcl - 0.8859) < 1e-12 && std::abs(m.f1s - 0.8965) <= 1e-4;
    return verdict(ok, fmt("f1s = %.6f from prc 0.9074, rcl 0.8859 (expect 0.8965 +- 1e-4)", m.f1s));
}

// Rows come in clean/attacked pairs.
bool fpr_pairs_equal(const BenchReport& r) {
    for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2)
        if (r.rows[i].metrics.fpr != r.rows[i + 1].metrics.fpr) return false;
    return r.rows.size() == 16;
}

bool recall_pairs_dominated(const BenchReport& r) {
    for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2)
        if (r.rows[i + 1].metrics.rcl > r.rows[i].metrics.rcl) return false;
    return true;
}

bool traces_monotone(const BenchReport& r) {
    for (const auto& t : r.traces) {
        std::size_t prev = t.initial_detected;
        for (const auto& it : t.iterations) {
            if (it.detected > prev) return false;
            prev = it.detected;
        }
    }
    return true;
}

struct FprRun {
    BenchReport report;
    std::filesystem::path dir;
};

FprRun& criterion2_run() {
    static FprRun run = [] {
        auto c = synthetic_config(2000, 1.5, 42);
        c.out_dir = temp_dir("acceptance_fpr");
        return FprRun{run_benchmark(c), c.out_dir};
    }();
    return run;
}

Verdict fpr_invariance() {
    const auto& r = criterion2_run().report;
    std::size_t equal = 0;
    for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2) equal += r.rows[i].metrics.fpr == r.rows[i + 1].metrics.fpr;
    return verdict(fpr_pairs_equal(r), fmt("%zu of 8 (model, training) pairs have bit-identical FPR on 2000+2000 rows", equal));
}

Verdict monotone_decay() {
    std::size_t bad = 0, traces = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = run_benchmark(synthetic_config(500, 1.5, seed));
        bad += !traces_monotone(r) || !recall_pairs_dominated(r);
        traces += r.traces.size();
    }
    return verdict(bad == 0, fmt("%zu traces over 10 seeds, %zu seed(s) with a violation", traces, bad));
}

Verdict adversarial_benefit() {
    std::size_t good_seeds = 0;
    double worst_gap = 0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = run_benchmark(synthetic_config(2000, 1.5, seed));
        std::size_t kinds_better = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& reg_clean = r.rows[4 * k].metrics;
            const auto& reg_hit = r.rows[4 * k + 1].metrics;
            const auto& adv_clean = r.rows[4 * k + 2].metrics;
            const auto& adv_hit = r.rows[4 * k + 3].metrics;
            kinds_better += adv_hit.rcl >= reg_hit.rcl;
            worst_gap = std::max(worst_gap, std::abs(adv_clean.f1s - reg_clean.f1s));
        }
        good_seeds += kinds_better >= 3;
        per_seed += (per_seed.empty() ? "" : ",") + std::to_string(kinds_better);
    }
    return verdict(good_seeds >= 4 && worst_gap <= 0.05,
                   fmt("seeds with >= 3/4 kinds improved: %zu of 5 (kinds per seed %s); max clean F1 gap %.4f (<= 0.05)",
                       good_seeds, per_seed.c_str(), worst_gap));
}

Verdict oracle_equivalences() {
    std::vector<std::string> failures;
    // histogram tree vs exact-split tree
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto ds = seed % 2 ? random_grid_dataset(200, seed, 9) : synthetic(100, 1.0, seed);
        const auto bins = build_bins(ds.rows(), 256);
        const auto bm = bins.apply(ds.rows());
        std::vector<double> g(ds.size()), h(ds.size());
        const double base = prevalence_log_odds(ds);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto gh = logistic_grad_hess(base + 0.1 * static_cast<double>(i % 7), ds.label(i));
            g[i] = gh.g;
            h[i] = gh.h;
        }
        GradientTreeConfig cfg;
        cfg.max_depth = 1 + seed % 5;
        cfg.min_samples_leaf = 1 + seed % 3;
        const auto tree = fit_gradient_tree(g, h, all_rows(ds.size()), bm, bins, all_features(), cfg);
        const auto oracle = exact_level_tree(ds, g, h, cfg);
        double la = 0, lb = 0;
        bool same = tree.nodes.size() == oracle.nodes.size();
        for (std::size_t i = 0; i < ds.size(); ++i) {
            same = same && tree_path(tree, ds.row(i)) == oracle.path(ds.row(i));
            la += cross_entropy(base + tree.predict(ds.row(i)), ds.label(i));
            lb += cross_entropy(base + oracle.predict(ds.row(i)), ds.label(i));
        }
        if (!same && std::abs(la - lb) > 1e-12) failures.push_back("histogram/exact seed " + std::to_string(seed));
    }
    // leaf-wise with two leaves vs brute-force best split
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ds = random_grid_dataset(150, seed + 100, 5);
        const auto bins = build_bins(ds.rows(), 256);
        const auto bm = bins.apply(ds.rows());
        std::vector<double> g, h;
        grid_gradients(ds.size(), seed, g, h);
        GradientTreeConfig cfg;
        cfg.mode = GrowMode::leaf_wise;
        cfg.max_leaves = 2;
        cfg.min_samples_leaf = 1 + seed % 4;
        const auto t = fit_gradient_tree(g, h, all_rows(ds.size()), bm, bins, all_features(), cfg);
        const auto best = brute_force_gain(g, h, bm, bins, cfg.min_samples_leaf);
        const bool ok = best.gain <= 0 ? t.nodes.size() == 1
                                       : t.leaf_count() == 2 && static_cast<std::size_t>(t.nodes[0].feature) == best.feature &&
                                             t.nodes[0].threshold == bins.threshold(best.feature, best.bin);
        if (!ok) failures.push_back("leaf-wise/brute seed " + std::to_string(seed));
    }
    // GOSS with a = 1, b = 0 vs plain leaf-wise boosting
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto ds = synthetic(100, 1.5, 21 + seed);
        LeafBoostParams hp;
        hp.n_estimators = 30;
        hp.goss_top_fraction = 1.0;
        hp.goss_other_fraction = 0.0;
        const auto goss = train_leaf_boost_goss(ds, hp, seed);
        const auto plain = boost_trees(ds, leaf_boost_settings(hp, false), seed);
        if (goss.base_score != plain.first || goss.trees != plain.second)
            failures.push_back("goss/plain seed " + std::to_string(seed));
    }
    // CART with all features vs exhaustive impurity at every internal node
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto ds = random_grid_dataset(150 + 10 * seed, seed);
        RfParams hp;
        hp.max_features = 24;
        hp.max_depth = 6;
        hp.min_samples_leaf = 1 + seed % 3;
        Rng rng(seed);
        std::vector<std::size_t> rows(ds.size());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        const auto t = fit_cart(ds, rows, hp, rng);
        std::vector<std::vector<std::size_t>> at(t.nodes.size());
        at[0] = rows;
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            const auto& nd = t.nodes[i];
            if (nd.is_leaf()) continue;
            for (auto r : at[i]) at[ds.row(r)[nd.feature] <= nd.threshold ? nd.left : nd.right].push_back(r);
            std::array<std::size_t, 2> l{0, 0}, r{0, 0};
            for (auto row : at[nd.left]) ++l[ds.label(row)];
            for (auto row : at[nd.right]) ++r[ds.label(row)];
            const double achieved = (l[0] + l[1]) * gini_impurity(l) + (r[0] + r[1]) * gini_impurity(r);
            if (std::abs(achieved - brute_force_cart(ds, at[i], hp.min_samples_leaf)) > 1e-12) {
                failures.push_back("cart seed " + std::to_string(seed) + " node " + std::to_string(i));
                break;
            }
        }
    }
    std::string detail = "histogram=exact (6), leaf-wise 2 leaves=brute force (10), GOSS a=1,b=0=plain (3), CART=exhaustive (4)";
    for (const auto& f : failures) detail += "; FAILED " + f;
    return verdict(failures.empty(), detail);
}

Verdict numerical_checks() {
    double worst_rel = 0;
    const double step = 1e-5;
    for (double z = -10; z <= 10; z += 0.05)
        for (std::uint8_t y : {0, 1}) {
            const auto gh = logistic_grad_hess(z, y);
            const double fd_g = (cross_entropy(z + step, y) - cross_entropy(z - step, y)) / (2 * step);
            const double fd_h = (logistic_grad_hess(z + step, y).g - logistic_grad_hess(z - step, y).g) / (2 * step);
            worst_rel = std::max({worst_rel, std::abs(fd_g - gh.g) / std::abs(gh.g), std::abs(fd_h - gh.h) / gh.h});
        }

    const auto ds = synthetic(500, 1.0, 3);
    TrainingLog log;
    train_level_boost(ds, LevelBoostParams{}, 3, &log);
    std::size_t increases = 0;
    for (std::size_t r = 1; r < log.train_loss.size(); ++r) increases += log.train_loss[r] > log.train_loss[r - 1];

    EbmParams hp;
    hp.n_estimators = 30;
    const auto m = train_cyclic_ebm(ds, hp, 3);
    std::mt19937_64 gen(17);
    double worst_add = 0;
    for (int i = 0; i < 10000; ++i) {
        FeatureRow x;
        for (auto& v : x) v = std::exp(std::uniform_real_distribution<double>(-12, 12)(gen));
        const auto e = explain_additive(m, x);
        double sum = e.intercept;
        for (const auto& c : e.contributions) sum += c.value;
        worst_add = std::max(worst_add, std::abs(predict_score(m, x) - sum));
    }
    const bool ok = worst_rel <= 1e-5 && log.train_loss.size() == 100 && increases == 0 && worst_add <= 1e-9;
    return verdict(ok, fmt("max rel FD error %.2e (<= 1e-5); %zu loss increases in %zu rounds; max additivity error %.2e "
                           "over 1e4 samples (<= 1e-9)",
                           worst_rel, increases, log.train_loss.size(), worst_add));
}

Verdict constraint_soundness() {
    std::size_t violations = 0, checked = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto ds = synthetic(300, 0.5 + seed, seed);
        const auto split = stratified_split(ds, {0.7, seed});
        const auto patterns = learn_patterns(split.train);
        PerturbConfig cfg;
        cfg.inclusion_probability = 0.1 + 0.2 * seed;
        cfg.displacement_hi = 0.2 + 0.2 * seed;
        for (std::size_t k = 0; k < 20000; ++k) {
            const auto c = static_cast<std::uint8_t>(k % 2);
            Rng rng = make_stream(seed, {k});
            const auto y = perturb(split.holdout.row(k % split.holdout.size()), c, patterns, cfg, rng);
            violations += !patterns.contains(y, c) || !check_family_constraints(y).empty();
            ++checked;
        }
    }
    // every attacked holdout written by the criterion 2 run
    const auto& run = criterion2_run();
    const auto holdout = read_canonical_csv(run.dir / artifacts::holdout_csv());
    const auto patterns = patterns_from_json(nlohmann::json::parse(slurp(run.dir / artifacts::patterns_json())));
    std::size_t attacked_rows = 0, perturbed = 0;
    for (auto kind : kAllModelKinds)
        for (auto mode : {TrainingMode::regular, TrainingMode::adversarial}) {
            const auto adv = read_canonical_csv(run.dir / artifacts::attacked_csv(kind, mode));
            violations += validate_family_constraints(adv).size();
            for (std::size_t i = 0; i < adv.size(); ++i) {
                ++attacked_rows;
                if (adv.row(i) == holdout.row(i)) continue;
                ++perturbed;
                violations += adv.label(i) != kMalicious || !patterns.contains(adv.row(i), kMalicious);
            }
        }
    return verdict(violations == 0, fmt("%zu fuzzed perturbations, %zu adversarial holdout rows (%zu perturbed): "
                                        "%zu violations",
                                        checked, attacked_rows, perturbed, violations));
}

Verdict determinism() {
    const auto dir = temp_dir("acceptance_determinism");
    {
        nlohmann::json j = {{"dataset", {{"tag", "det"}, {"synthetic", {{"benign", 800}, {"malicious", 800}, {"separation", 1.5}}}}},
                            {"seed", 7}};
        std::ofstream(dir / "config.json") << j.dump(2);
    }
    std::vector<std::string> reports;
    for (const char* threads : {"1", "4", "1"}) {
        const std::string out = (dir / ("run_t" + std::string(threads) + "_" + std::to_string(reports.size()))).string();
        const std::string cfg = (dir / "config.json").string();
        const char* argv[] = {"nidsbench", "--config", cfg.c_str(), "--threads", threads, "--out", out.c_str(), "bench"};
        std::ostringstream sink, err;
        if (run_cli(8, argv, sink, err) != 0) return verdict(false, "bench failed: " + err.str());
        reports.push_back(slurp(std::filesystem::path(out) / artifacts::report_json()));
    }
    const bool ok = reports[0] == reports[1] && reports[1] == reports[2] && !reports[0].empty();
    return verdict(ok, fmt("3 end-to-end runs (threads 1, 4, 1): report.json %s (%zu bytes)",
                           ok ? "byte-identical" : "DIFFERS", reports[0].size()));
}

Verdict performance() {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_benchmark(synthetic_config(5000, 3.0, 42));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return verdict(r.rows.size() == 16 && secs < 600,
                   fmt("16 rows on 10000 samples in %.1f s with %u hardware thread(s) (budget 600 s)", secs,
                       std::max(1u, std::thread::hardware_concurrency())));
}

Verdict hikari_stretch() {
    const char* path = std::getenv("NIDSBENCH_HIKARI_CSV");
    if (!path || !std::filesystem::exists(path))
        return {Outcome::skip, "set NIDSBENCH_HIKARI_CSV to the HIKARI flow CSV to run this optional check"};
    BenchConfig c;
    c.dataset.tag = "HIKARI";
    c.dataset.csv = path;
    c.dataset.profile = "hikari";
    const auto r = run_benchmark(c, [](std::string_view msg) { std::cerr << "  " << msg << '\n'; });
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        if (row.training != TrainingMode::regular || row.attacked) continue;
        ok = ok && row.metrics.f1s >= 0.75 && row.metrics.f1s <= 0.92 && row.metrics.fpr <= 0.005;
        detail += fmt("%s F1 %.4f FPR %.4f; ", std::string(to_string(row.model)).c_str(), row.metrics.f1s, row.metrics.fpr);
    }
    return verdict(ok, detail + "(F1 in [0.75, 0.92], FPR <= 0.005)");
}

struct Criterion {
    int id;
    const char* name;
    bool required;
    std::function<Verdict()> run;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nidsbench acceptance checks"};
    std::vector<int> selected;
    app.add_option("criteria", selected, "Criterion numbers to run (default all)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "metric identity", true, metric_identity},
        {2, "FPR invariance under attack", true, fpr_invariance},
        {3, "monotone attack decay", true, monotone_decay},
        {4, "adversarial training benefit", true, adversarial_benefit},
        {5, "oracle equivalences", true, oracle_equivalences},
        {6, "numerical checks", true, numerical_checks},
        {7, "constraint soundness", true, constraint_soundness},
        {8, "end-to-end determinism", true, determinism},
        {9, "desk-scale performance", true, performance},
        {10, "HIKARI stretch run (optional)", false, hikari_stretch},
    };
    const std::set<int> want(selected.begin(), selected.end());
    int failed = 0;
    for (const auto& c : criteria) {
        if (!want.empty() && !want.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {Outcome::fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
        std::cout << tag << " [" << c.id << "] " << c.name << ": " << v.detail << " (" << fmt("%.1f", secs) << " s)"
                  << std::endl;
        failed += v.outcome == Outcome::fail && c.required;
    }
    return failed ? 1 : 0;
}
