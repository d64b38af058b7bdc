#pragma once
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../adversarial/attack.hpp"
#include "../adversarial/perturbation.hpp"
#include "../dataflow.hpp"
#include "../evaluation/metrics.hpp"
#include "../evaluation/tuning.hpp"
#include "../models/serialize.hpp"
#include "../models/train.hpp"
#include "config.hpp"
#include "report.hpp"

namespace nidsbench {

// Seeds of every stage, all derived from the master seed.
struct StageSeeds {
    std::uint64_t master;

    std::uint64_t synth() const { return derive_seed(master, {tag("synth")}); }
    std::uint64_t split() const { return derive_seed(master, {tag("split")}); }
    std::uint64_t augment() const { return derive_seed(master, {tag("augment")}); }
    std::uint64_t attack() const { return derive_seed(master, {tag("attack")}); }
    std::uint64_t tune(ModelKind k) const { return derive_seed(master, {tag("tune"), static_cast<std::uint64_t>(k)}); }
    std::uint64_t train(ModelKind k) const { return derive_seed(master, {tag("train"), static_cast<std::uint64_t>(k)}); }
};

// Documented artifact names under the output directory.
namespace artifacts {
inline std::string train_csv() { return "train.csv"; }
inline std::string holdout_csv() { return "holdout.csv"; }
inline std::string adversarial_train_csv() { return "adversarial_train.csv"; }
inline std::string patterns_json() { return "patterns.json"; }
inline std::string tune_json(ModelKind k) { return "tune_" + std::string(to_string(k)) + ".json"; }
inline std::string model_json(ModelKind k, TrainingMode m) {
    return "model_" + std::string(to_string(k)) + "_" + std::string(to_string(m)) + ".json";
}
inline std::string attacked_csv(ModelKind k, TrainingMode m) {
    return "attacked_holdout_" + std::string(to_string(k)) + "_" + std::string(to_string(m)) + ".csv";
}
inline std::string trace_json(ModelKind k, TrainingMode m) {
    return "trace_" + std::string(to_string(k)) + "_" + std::string(to_string(m)) + ".json";
}
inline std::string report_json() { return "report.json"; }
} // namespace artifacts

inline std::string attack_model_id(ModelKind k, TrainingMode m) {
    return std::string(to_string(k)) + "/" + std::string(to_string(m));
}

inline nlohmann::ordered_json to_json(const PatternSet& p) {
    nlohmann::ordered_json j;
    const auto names = FeatureSchema::canonical().column_names();
    for (std::uint8_t c = 0; c < 2; ++c) {
        auto& cls = j[c == kBenign ? "benign" : "malicious"];
        for (std::size_t f = 0; f < kFeatureCount; ++f) cls[names[f]] = {p.boxes[c][f].lo, p.boxes[c][f].hi};
    }
    return j;
}

inline PatternSet patterns_from_json(const nlohmann::json& j) {
    PatternSet p;
    const auto names = FeatureSchema::canonical().column_names();
    try {
        for (std::uint8_t c = 0; c < 2; ++c) {
            const auto& cls = j.at(c == kBenign ? "benign" : "malicious");
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                const auto& iv = cls.at(names[f]);
                p.boxes[c][f] = {iv.at(0).get<double>(), iv.at(1).get<double>()};
                if (p.boxes[c][f].lo > p.boxes[c][f].hi) throw DataError("patterns: lo > hi for " + names[f]);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("patterns: ") + e.what());
    }
    return p;
}

// Error raised by a pipeline stage, tagged with the stage name. Keeps the
// category of the original error so callers can still tell data problems
// from configuration problems.
template <class Fn>
auto run_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
    const std::string prefix = "[" + std::string(stage) + "] ";
    try {
        return fn();
    } catch (const SchemaError& e) {
        throw SchemaError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(prefix + e.what());
    }
}

using ProgressFn = std::function<void(std::string_view)>;

inline FlowDataset load_bench_dataset(const BenchConfig& cfg, const ProgressFn& progress = {}) {
    if (cfg.dataset.synthetic) {
        const auto& s = *cfg.dataset.synthetic;
        return synthesize_dataset(s.benign, s.malicious, s.separation, StageSeeds{cfg.seed}.synth());
    }
    auto r = ingest_csv(cfg.dataset.csv, resolve_profile(cfg.dataset.profile));
    if (progress)
        for (const auto& w : r.warnings) progress("warning: " + w);
    return std::move(r.dataset);
}

// The full methodology for one dataset: 70/30 split, class patterns from the
// training set, one shared adversarial training set, then per model kind:
// tune on the regular training set, retrain a regular and an adversarial
// model with the tuned hyperparameters, evaluate both on the clean holdout
// and on their own model-specific attacked holdout. Artifacts are written to
// cfg.out_dir (when set) as each stage finishes.
inline BenchReport run_benchmark(const BenchConfig& cfg, const ProgressFn& progress = {}) {
    cfg.validate();
    const StageSeeds seeds{cfg.seed};
    const bool write = !cfg.out_dir.empty();
    if (write) std::filesystem::create_directories(cfg.out_dir);
    auto path = [&](const std::string& name) { return cfg.out_dir / name; };
    auto write_json = [&](const std::string& name, const nlohmann::ordered_json& j) {
        std::ofstream out(path(name), std::ios::binary);
        out << j.dump(2) << '\n';
    };
    auto note = [&](const std::string& s) {
        if (progress) progress(s);
    };

    const FlowDataset data = run_stage("ingest", [&] { return load_bench_dataset(cfg, progress); });
    const Split split = run_stage("split", [&] {
        data.require_both_classes("split");
        return stratified_split(data, {cfg.train_fraction, seeds.split()});
    });
    note("split: " + std::to_string(split.train.size()) + " train / " + std::to_string(split.holdout.size()) +
         " holdout rows");
    const PatternSet patterns = run_stage("patterns", [&] { return learn_patterns(split.train); });
    PerturbConfig augment_cfg = cfg.perturb;
    augment_cfg.seed = seeds.augment();
    const FlowDataset adversarial_train =
        run_stage("augment", [&] { return augment_training_set(split.train, patterns, augment_cfg); });
    if (write) {
        write_csv(path(artifacts::train_csv()), split.train);
        write_csv(path(artifacts::holdout_csv()), split.holdout);
        write_csv(path(artifacts::adversarial_train_csv()), adversarial_train);
        write_json(artifacts::patterns_json(), to_json(patterns));
    }
    PerturbConfig attack_cfg = cfg.perturb;
    attack_cfg.seed = seeds.attack();

    BenchReport report;
    report.dataset = cfg.dataset.tag;
    report.config = cfg.to_json();

    std::vector<ModelKind> kinds = cfg.models;  // fixed report order, whatever the config lists
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    for (const ModelKind kind : kinds) {
        const std::string name(to_string(kind));
        const TuneResult tuned = run_stage("tune " + name, [&] {
            return tune(split.train, cfg.grid(kind), seeds.tune(kind), cfg.cv_folds);
        });
        report.tuning[name] = tuned.to_json();
        if (write) write_json(artifacts::tune_json(kind), tuned.to_json());
        note("tuned " + name + ": candidate " + std::to_string(tuned.best_index) + " of " +
             std::to_string(tuned.table.size()));

        for (const TrainingMode mode : {TrainingMode::regular, TrainingMode::adversarial}) {
            const std::string id = attack_model_id(kind, mode);
            const TrainedModel model = run_stage("train " + id, [&] {
                return retrain_full(mode == TrainingMode::regular ? split.train : adversarial_train, tuned.best,
                                    seeds.train(kind), &tuned, mode);
            });
            if (write) save_model_file(path(artifacts::model_json(kind, mode)), model);

            const Metrics clean = metrics_from_confusion(
                confusion(split.holdout.labels(), predict_label(model, split.holdout.rows())));
            AttackResult attacked = run_stage("attack " + id, [&] {
                ModelQuery query = query_model(model, id);
                return evasion_attack(query, split.holdout, patterns, attack_cfg);
            });
            const Metrics under_attack = metrics_from_confusion(
                confusion(attacked.adversarial.labels(), predict_label(model, attacked.adversarial.rows())));
            if (write) {
                write_csv(path(artifacts::attacked_csv(kind, mode)), attacked.adversarial);
                write_json(artifacts::trace_json(kind, mode), attacked.trace.to_json());
            }
            report.rows.push_back({kind, mode, false, clean});
            report.rows.push_back({kind, mode, true, under_attack});
            report.traces.push_back(std::move(attacked.trace));
            note(id + ": clean F1 " + detail::percent(clean.f1s) + "%, attacked F1 " +
                 detail::percent(under_attack.f1s) + "%");
        }
    }
    if (write) write_json(artifacts::report_json(), report.to_json());
    return report;
}

} // namespace nidsbench
