#pragma once
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../core/parallel.hpp"
#include "pipeline.hpp"

namespace nidsbench {

namespace cli_detail {

namespace fs = std::filesystem;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out = ".";
    std::string format = "table";
    unsigned threads = 0;

    std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
    fs::path out_path(const std::string& name) const {
        fs::create_directories(out);
        return fs::path(out) / name;
    }
};

inline nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(p.string() + ": " + e.what());
    }
}

inline void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out << text;
}

inline std::string render_metrics(const Metrics& m, std::string_view format) {
    if (format == "json") return m.to_json().dump(2) + "\n";
    if (format == "csv") {
        std::ostringstream os;
        csv::write_record(os, {"acc", "prc", "rcl", "f1s", "fpr"});
        csv::write_record(os, {csv::format_real(m.acc), csv::format_real(m.prc), csv::format_real(m.rcl),
                               csv::format_real(m.f1s), csv::format_real(m.fpr)});
        return os.str();
    }
    if (format == "table") {
        std::ostringstream os;
        for (auto h : {"ACC", "PRC", "RCL", "F1S", "FPR"}) os << ' ' << detail::pad(h, 6, true);
        os << '\n';
        for (double v : {m.acc, m.prc, m.rcl, m.f1s, m.fpr}) os << ' ' << detail::pad(detail::percent(v), 6, true);
        os << '\n';
        return os.str();
    }
    throw ConfigError("unknown format '" + std::string(format) + "' (expected table, csv or json)");
}

inline std::vector<ModelKind> parse_models(const std::vector<std::string>& names) {
    std::vector<ModelKind> out;
    for (const auto& n : names) out.push_back(parse_model_kind(n));
    return out;
}

inline Hyperparams hyperparams_for(ModelKind kind, const std::string& hp_file, const std::string& tuning_file,
                                   std::optional<TuneResult>& tuned) {
    if (!hp_file.empty() && !tuning_file.empty()) throw ConfigError("train: give --hyperparams or --tuning, not both");
    if (!tuning_file.empty()) {
        try {
            tuned = TuneResult::from_json(read_json(tuning_file));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(tuning_file + ": " + e.what());
        }
        if (kind_of(tuned->best) != kind) throw ConfigError("train: tuning file is for another model kind");
        return tuned->best;
    }
    if (!hp_file.empty()) return hyperparams_from_json(read_json(hp_file), kind);
    return default_hyperparams(kind);
}

} // namespace cli_detail

// Command-line front end. Returns the process exit code: 0 success, 1 usage
// or configuration error, 2 data or schema error, 3 anything else.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace cli_detail;
    CLI::App app{"Tree-ensemble intrusion detection benchmark with adversarial evasion and training", "nidsbench"};
    app.set_version_flag("--version", std::string(kToolkitVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed (default 42, or the config's seed)");
    app.add_option("--config", g.config, "Benchmark config JSON");
    app.add_option("--out", g.out, "Output directory for artifacts")->capture_default_str();
    app.add_option("--format", g.format, "Output format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

    // prepare
    std::string prep_input, prep_profile = "canonical";
    double prep_fraction = 0.70;
    auto* prepare = app.add_subcommand("prepare", "Ingest a raw CSV, clean it and write train/holdout splits");
    prepare->add_option("--input", prep_input, "Raw flow CSV")->required();
    prepare->add_option("--profile", prep_profile, "Column profile name or JSON file")->capture_default_str();
    prepare->add_option("--train-fraction", prep_fraction, "Training share of each class")->capture_default_str();

    // synth
    std::size_t syn_benign = 1000, syn_malicious = 1000;
    double syn_sep = 3.0;
    std::string syn_output = "synthetic.csv";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic canonical dataset");
    synth->add_option("--benign", syn_benign)->capture_default_str();
    synth->add_option("--malicious", syn_malicious)->capture_default_str();
    synth->add_option("--separation", syn_sep, "Class separation in log10 IAT units")->capture_default_str();
    synth->add_option("--output", syn_output, "File name under --out")->capture_default_str();

    // tune
    std::string tune_train, tune_model;
    std::size_t tune_folds = 5;
    auto* tune_cmd = app.add_subcommand("tune", "Grid search with stratified k-fold F1");
    tune_cmd->add_option("--train", tune_train, "Canonical training CSV")->required();
    tune_cmd->add_option("--model", tune_model, "RF, LEVEL_BOOST, LEAF_BOOST_GOSS or CYCLIC_EBM")->required();
    tune_cmd->add_option("--folds", tune_folds)->capture_default_str();

    // train
    std::string train_data, train_model_name, train_hp, train_tuning, train_mode = "regular", train_output;
    auto* train = app.add_subcommand("train", "Train one model on a canonical CSV");
    train->add_option("--train", train_data, "Canonical training CSV")->required();
    train->add_option("--model", train_model_name)->required();
    train->add_option("--hyperparams", train_hp, "Hyperparameter JSON");
    train->add_option("--tuning", train_tuning, "Tuning result JSON; its best candidate is used");
    train->add_option("--mode", train_mode, "regular or adversarial (augmented training set)")
        ->check(CLI::IsMember({"regular", "adversarial"}))
        ->capture_default_str();
    train->add_option("--output", train_output, "File name under --out (default model_<KIND>_<mode>.json)");

    // attack
    std::string atk_model, atk_holdout, atk_patterns, atk_train, atk_id;
    auto* attack = app.add_subcommand("attack", "Run the evasion attack on a holdout set against a saved model");
    attack->add_option("--model", atk_model, "Saved model JSON")->required();
    attack->add_option("--holdout", atk_holdout, "Canonical holdout CSV")->required();
    auto* pat_opt = attack->add_option("--patterns", atk_patterns, "Class patterns JSON");
    auto* pat_train = attack->add_option("--train", atk_train, "Learn class patterns from this training CSV");
    pat_opt->excludes(pat_train);
    attack->add_option("--id", atk_id, "Model id for the attack streams (default <KIND>/<mode>)");

    // evaluate
    std::string eval_model, eval_data;
    auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on a canonical CSV");
    evaluate->add_option("--model", eval_model)->required();
    evaluate->add_option("--data", eval_data)->required();

    // bench
    std::string bench_data, bench_profile = "canonical", bench_tag;
    std::vector<std::string> bench_models;
    auto* bench = app.add_subcommand("bench", "Full pipeline: split, tune, train, attack, evaluate, report");
    bench->add_option("--data", bench_data, "Raw or canonical CSV (instead of --config)");
    bench->add_option("--profile", bench_profile)->capture_default_str();
    bench->add_option("--tag", bench_tag, "Dataset tag in the report");
    bench->add_option("--models", bench_models, "Model kinds to run (default all)")->delimiter(',');

    // report
    std::string rep_input;
    auto* report = app.add_subcommand("report", "Render a saved report");
    report->add_option("--input", rep_input, "report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    auto progress = [&err](std::string_view msg) { err << msg << '\n'; };

    try {
        set_thread_count(g.threads);
        if (*prepare) {
            const StageSeeds seeds{g.seed_or(42)};
            auto r = ingest_csv(prep_input, resolve_profile(prep_profile));
            for (const auto& w : r.warnings) progress("warning: " + w);
            r.dataset.require_both_classes("prepare");
            const Split s = stratified_split(r.dataset, {prep_fraction, seeds.split()});
            write_csv(g.out_path(artifacts::train_csv()), s.train);
            write_csv(g.out_path(artifacts::holdout_csv()), s.holdout);
            write_text(g.out_path(artifacts::patterns_json()), to_json(learn_patterns(s.train)).dump(2) + "\n");
            out << "rows read " << r.rows_read << ", dropped " << r.dropped_rows << ", train " << s.train.size()
                << ", holdout " << s.holdout.size() << '\n';
        } else if (*synth) {
            const StageSeeds seeds{g.seed_or(42)};
            if (syn_benign < 1 || syn_malicious < 1) throw ConfigError("synth: class counts must be >= 1");
            const auto ds = synthesize_dataset(syn_benign, syn_malicious, syn_sep, seeds.synth());
            const auto path = g.out_path(syn_output);
            write_csv(path, ds);
            out << "wrote " << ds.size() << " rows to " << path.string() << '\n';
        } else if (*tune_cmd) {
            const StageSeeds seeds{g.seed_or(42)};
            const ModelKind kind = parse_model_kind(tune_model);
            GridSpec grid = default_grid(kind);
            if (!g.config.empty()) grid = BenchConfig::load(g.config).grid(kind);
            const auto train_ds = read_canonical_csv(tune_train);
            const TuneResult t = tune(train_ds, grid, seeds.tune(kind), tune_folds);
            write_text(g.out_path(artifacts::tune_json(kind)), t.to_json().dump(2) + "\n");
            out << "best candidate " << t.best_index << " of " << t.table.size() << ", mean F1 "
                << detail::percent(t.table[t.best_index].cv.mean_f1) << "%\n"
                << nidsbench::to_json(t.best).dump() << '\n';
        } else if (*train) {
            const StageSeeds seeds{g.seed_or(42)};
            const ModelKind kind = parse_model_kind(train_model_name);
            std::optional<TuneResult> tuned;
            const Hyperparams hp = hyperparams_for(kind, train_hp, train_tuning, tuned);
            const TrainingMode mode = train_mode == "regular" ? TrainingMode::regular : TrainingMode::adversarial;
            FlowDataset ds = read_canonical_csv(train_data);
            if (mode == TrainingMode::adversarial) {
                PerturbConfig pc = g.config.empty() ? PerturbConfig{} : BenchConfig::load(g.config).perturb;
                pc.seed = seeds.augment();
                ds = augment_training_set(ds, learn_patterns(ds), pc);
            }
            const TrainedModel m = retrain_full(ds, hp, seeds.train(kind), tuned ? &*tuned : nullptr, mode);
            const auto path = g.out_path(train_output.empty() ? artifacts::model_json(kind, mode) : train_output);
            save_model_file(path, m);
            out << "trained " << to_string(kind) << " (" << to_string(mode) << ") on " << ds.size() << " rows -> "
                << path.string() << '\n';
        } else if (*attack) {
            const StageSeeds seeds{g.seed_or(42)};
            const TrainedModel m = load_model_file(atk_model);
            const auto holdout = read_canonical_csv(atk_holdout);
            PatternSet patterns;
            if (!atk_patterns.empty())
                patterns = patterns_from_json(read_json(atk_patterns));
            else if (!atk_train.empty())
                patterns = learn_patterns(read_canonical_csv(atk_train));
            else
                throw ConfigError("attack: give --patterns or --train");
            PerturbConfig pc = g.config.empty() ? PerturbConfig{} : BenchConfig::load(g.config).perturb;
            pc.seed = seeds.attack();
            const std::string id = atk_id.empty() ? attack_model_id(m.kind(), m.metadata.training_mode) : atk_id;
            ModelQuery q = query_model(m, id);
            const AttackResult r = evasion_attack(q, holdout, patterns, pc);
            write_csv(g.out_path(artifacts::attacked_csv(m.kind(), m.metadata.training_mode)), r.adversarial);
            write_text(g.out_path(artifacts::trace_json(m.kind(), m.metadata.training_mode)),
                       r.trace.to_json().dump(2) + "\n");
            out << id << ": initially detected " << r.trace.initial_detected << ", still detected "
                << (r.trace.iterations.empty() ? r.trace.initial_detected : r.trace.iterations.back().detected)
                << " after " << r.trace.iterations.size() << " iteration(s), " << q.queries() << " queries\n";
        } else if (*evaluate) {
            const TrainedModel m = load_model_file(eval_model);
            const auto ds = read_canonical_csv(eval_data);
            out << render_metrics(metrics_from_confusion(confusion(ds.labels(), predict_label(m, ds.rows()))),
                                  g.format);
        } else if (*bench) {
            BenchConfig cfg;
            if (!g.config.empty()) {
                if (!bench_data.empty()) throw ConfigError("bench: give --config or --data, not both");
                cfg = BenchConfig::load(g.config);
            } else if (!bench_data.empty()) {
                cfg.dataset.csv = bench_data;
                cfg.dataset.profile = bench_profile;
                cfg.dataset.tag = bench_tag.empty() ? fs::path(bench_data).stem().string() : bench_tag;
            } else {
                throw ConfigError("bench: give --config or --data");
            }
            if (g.seed) cfg.seed = *g.seed;
            if (!bench_models.empty()) cfg.models = parse_models(bench_models);
            if (!bench_tag.empty()) cfg.dataset.tag = bench_tag;
            cfg.out_dir = g.out;
            if (g.threads) cfg.threads = g.threads;
            set_thread_count(cfg.threads);
            const BenchReport r = run_benchmark(cfg, progress);
            out << render_report(r, g.format);
        } else if (*report) {
            BenchReport r;
            if (fs::path(rep_input).extension() == ".csv") {
                std::ifstream in(rep_input);
                if (!in) throw DataError("cannot open " + rep_input);
                std::stringstream ss;
                ss << in.rdbuf();
                r = parse_report_csv(ss.str());
            } else {
                r = BenchReport::from_json(read_json(rep_input));
            }
            out << render_report(r, g.format);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace nidsbench
