#pragma once
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/parallel.hpp"
#include "../core/rng.hpp"
#include "../dataflow.hpp"
#include "../models/train.hpp"
#include "metrics.hpp"

namespace nidsbench {

struct GridSpec {
    ModelKind kind = ModelKind::RF;
    std::vector<Hyperparams> candidates;  // evaluated and tie-broken in this order
};

// Discretized reference ranges; fixed values are kept verbatim.
inline GridSpec default_grid(ModelKind kind) {
    GridSpec g{kind, {}};
    switch (kind) {
    case ModelKind::RF:
        for (std::size_t depth : {8, 12, 16}) {
            RfParams p;
            p.max_depth = depth;
            g.candidates.push_back(p);
        }
        break;
    case ModelKind::LEVEL_BOOST:
        for (std::size_t depth : {4, 8, 12, 16})
            for (double lr : {0.1, 0.2, 0.3})
                for (double sub : {0.7, 0.8}) {
                    LevelBoostParams p;
                    p.max_depth = depth;
                    p.learning_rate = lr;
                    p.feature_subsample = sub;
                    g.candidates.push_back(p);
                }
        break;
    case ModelKind::LEAF_BOOST_GOSS:
        for (double lr : {0.1, 0.2})
            for (double sub : {0.7, 0.8}) {
                LeafBoostParams p;
                p.learning_rate = lr;
                p.feature_subsample = sub;
                g.candidates.push_back(p);
            }
        break;
    case ModelKind::CYCLIC_EBM:
        for (std::size_t leaves : {7, 11, 15}) {
            EbmParams p;
            p.max_leaves = leaves;
            g.candidates.push_back(p);
        }
        break;
    }
    return g;
}

struct CvResult {
    double mean_f1 = 0.0;
    std::vector<double> fold_f1;
};

inline std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) { return derive_seed(seed, {tag("fold"), fold}); }

namespace detail {
inline double fold_f1(const Fold& fold, const Hyperparams& hp, std::uint64_t seed) {
    const TrainedModel m = train_model(fold.train, hp, seed);
    return f1_score(fold.validation.labels(), predict_label(m, fold.validation.rows()));
}

inline double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}
} // namespace detail

// Stratified k-fold F1. Fold f trains with seed fold_seed(seed, f); folds run
// in parallel with results identical to a sequential run.
inline CvResult cross_validate(const FlowDataset& train, const Hyperparams& hp, std::size_t k, std::uint64_t seed) {
    const auto folds = stratified_kfold(train, k, seed);
    CvResult r;
    r.fold_f1.resize(k);
    parallel_for(k, [&](std::size_t f) { r.fold_f1[f] = detail::fold_f1(folds[f], hp, fold_seed(seed, f)); });
    r.mean_f1 = detail::mean(r.fold_f1);
    return r;
}

struct CandidateScore {
    Hyperparams hyperparams;
    CvResult cv;
};

struct TuneResult {
    Hyperparams best;
    std::size_t best_index = 0;
    std::vector<CandidateScore> table;
    std::string tie_break_note;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["model_kind"] = to_string(kind_of(best));
        j["best_index"] = best_index;
        j["best"] = nidsbench::to_json(best);
        j["tie_break"] = tie_break_note;
        j["candidates"] = nlohmann::ordered_json::array();
        for (const auto& c : table)
            j["candidates"].push_back(
                {{"hyperparams", nidsbench::to_json(c.hyperparams)}, {"mean_f1", c.cv.mean_f1}, {"fold_f1", c.cv.fold_f1}});
        return j;
    }

    static TuneResult from_json(const nlohmann::json& j) {
        TuneResult t;
        t.best = hyperparams_from_json(j.at("best"));
        t.best_index = j.at("best_index").get<std::size_t>();
        t.tie_break_note = j.value("tie_break", std::string{});
        for (const auto& c : j.at("candidates"))
            t.table.push_back({hyperparams_from_json(c.at("hyperparams")),
                               {c.at("mean_f1").get<double>(), c.at("fold_f1").get<std::vector<double>>()}});
        return t;
    }
};

// Grid search by k-fold mean F1. All candidates share the same folds and fold
// seeds; the best mean wins and ties go to the earliest candidate.
inline TuneResult tune(const FlowDataset& train, const GridSpec& grid, std::uint64_t seed, std::size_t k = 5) {
    if (grid.candidates.empty()) throw ConfigError("tune: empty grid");
    for (const auto& hp : grid.candidates)
        if (kind_of(hp) != grid.kind) throw ConfigError("tune: grid mixes model kinds");
    const auto folds = stratified_kfold(train, k, seed);
    const std::size_t n = grid.candidates.size();
    std::vector<double> scores(n * k);
    parallel_for(n * k, [&](std::size_t task) {
        const std::size_t c = task / k, f = task % k;
        scores[task] = detail::fold_f1(folds[f], grid.candidates[c], fold_seed(seed, f));
    });
    TuneResult r;
    std::size_t ties = 0;
    for (std::size_t c = 0; c < n; ++c) {
        CvResult cv;
        cv.fold_f1.assign(scores.begin() + static_cast<std::ptrdiff_t>(c * k),
                          scores.begin() + static_cast<std::ptrdiff_t>((c + 1) * k));
        cv.mean_f1 = detail::mean(cv.fold_f1);
        r.table.push_back({grid.candidates[c], cv});
        if (c == 0 || cv.mean_f1 > r.table[r.best_index].cv.mean_f1) {
            r.best_index = c;
            ties = 0;
        } else if (cv.mean_f1 == r.table[r.best_index].cv.mean_f1) {
            ++ties;
        }
    }
    r.best = grid.candidates[r.best_index];
    r.tie_break_note = ties ? std::to_string(ties) + " later candidate(s) tied; earliest in grid order kept"
                            : "no ties";
    return r;
}

// Final model on the complete training set, recording where its
// hyperparameters came from.
inline TrainedModel retrain_full(const FlowDataset& train, const Hyperparams& hp, std::uint64_t seed,
                                 const TuneResult* tuning = nullptr, TrainingMode mode = TrainingMode::regular) {
    TrainedModel m = train_model(train, hp, seed, mode);
    if (tuning)
        m.metadata.tuning = {{"best_index", tuning->best_index},
                             {"mean_f1", tuning->table.at(tuning->best_index).cv.mean_f1},
                             {"candidates", tuning->table.size()}};
    return m;
}

} // namespace nidsbench
