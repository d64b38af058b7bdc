#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/parallel.hpp"
#include "../dataflow.hpp"
#include "../models/model.hpp"
#include "perturbation.hpp"

namespace nidsbench {

// Label-only access to a classifier, with a count of batch queries. The
// attack sees nothing else of the model.
class ModelQuery {
public:
    using LabelFn = std::function<std::vector<std::uint8_t>(std::span<const FeatureRow>)>;

    ModelQuery(std::string id, LabelFn fn) : id_(std::move(id)), fn_(std::move(fn)) {}

    std::vector<std::uint8_t> operator()(std::span<const FeatureRow> rows) {
        ++queries_;
        auto out = fn_(rows);
        if (out.size() != rows.size()) throw std::logic_error("model query returned wrong number of labels");
        return out;
    }

    const std::string& id() const { return id_; }
    std::size_t queries() const { return queries_; }

private:
    std::string id_;
    LabelFn fn_;
    std::size_t queries_ = 0;
};

// Wraps a trained model; the model must outlive the query.
inline ModelQuery query_model(const TrainedModel& model, std::string id) {
    return ModelQuery(std::move(id), [&model](std::span<const FeatureRow> rows) { return predict_label(model, rows); });
}

struct AttackIteration {
    std::size_t iter;      // 1-based
    std::size_t detected;  // malicious rows still predicted malicious afterwards
    std::size_t evaded;    // rows that flipped to benign in this iteration
    friend bool operator==(const AttackIteration&, const AttackIteration&) = default;
};

struct AttackTrace {
    static constexpr int kNever = -1;          // malicious row never evaded
    static constexpr int kNotAttacked = -2;    // benign row

    std::string model_id;
    std::size_t initial_detected = 0;
    std::vector<AttackIteration> iterations;
    std::vector<int> per_sample_evasion_iter;  // aligned with holdout rows; 0 = never detected

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["model_id"] = model_id;
        j["initial_detected"] = initial_detected;
        j["iterations"] = nlohmann::ordered_json::array();
        for (const auto& it : iterations)
            j["iterations"].push_back({{"iter", it.iter}, {"detected", it.detected}, {"evaded", it.evaded}});
        auto& per = j["per_sample_evasion_iter"] = nlohmann::ordered_json::array();
        for (int v : per_sample_evasion_iter) {
            if (v == kNotAttacked)
                per.push_back(nullptr);
            else if (v == kNever)
                per.push_back("never");
            else
                per.push_back(v);
        }
        return j;
    }

    static AttackTrace from_json(const nlohmann::json& j) {
        AttackTrace t;
        t.model_id = j.at("model_id").get<std::string>();
        t.initial_detected = j.value("initial_detected", std::size_t{0});
        for (const auto& it : j.at("iterations"))
            t.iterations.push_back({it.at("iter").get<std::size_t>(), it.at("detected").get<std::size_t>(),
                                    it.at("evaded").get<std::size_t>()});
        for (const auto& v : j.at("per_sample_evasion_iter"))
            t.per_sample_evasion_iter.push_back(v.is_null() ? kNotAttacked : v.is_string() ? kNever : v.get<int>());
        return t;
    }

    friend bool operator==(const AttackTrace&, const AttackTrace&) = default;
};

struct AttackResult {
    FlowDataset adversarial;
    AttackTrace trace;
};

// Stream of the perturbation applied to holdout row `row` in iteration `iter`.
inline Rng attack_stream(std::uint64_t seed, const std::string& model_id, std::size_t row, std::size_t iter) {
    return make_stream(seed, {tag("attack"), tag(model_id.c_str()), row, iter});
}

// Targeted evasion: every malicious row the model still flags is perturbed
// again from its current state (cumulatively) until the model calls it benign,
// at which point it is frozen. Stops when nothing is detected or after
// max_iterations. Benign rows, labels and row order are untouched. The model
// is queried once on the malicious rows and then once per iteration on the
// rows still detected.
inline AttackResult evasion_attack(ModelQuery& model, const FlowDataset& holdout, const PatternSet& patterns,
                                   const PerturbConfig& cfg) {
    cfg.validate();
    std::vector<FeatureRow> rows = holdout.rows();
    AttackTrace trace;
    trace.model_id = model.id();
    trace.per_sample_evasion_iter.assign(holdout.size(), AttackTrace::kNotAttacked);

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < holdout.size(); ++i)
        if (holdout.label(i) == kMalicious) active.push_back(i);

    auto still_detected = [&](const std::vector<std::size_t>& idx, std::size_t iter) {
        std::vector<FeatureRow> batch(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) batch[k] = rows[idx[k]];
        const auto labels = model(batch);
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (labels[k] == kMalicious)
                keep.push_back(idx[k]);
            else
                trace.per_sample_evasion_iter[idx[k]] = static_cast<int>(iter);
        }
        return keep;
    };

    if (!active.empty()) active = still_detected(active, 0);
    trace.initial_detected = active.size();
    for (std::size_t iter = 1; iter <= cfg.max_iterations && !active.empty(); ++iter) {
        parallel_for(active.size(), [&](std::size_t k) {
            const std::size_t i = active[k];
            Rng rng = attack_stream(cfg.seed, model.id(), i, iter);
            rows[i] = perturb(rows[i], kMalicious, patterns, cfg, rng);
        });
        const std::size_t before = active.size();
        active = still_detected(active, iter);
        trace.iterations.push_back({iter, active.size(), before - active.size()});
    }
    for (auto i : active) trace.per_sample_evasion_iter[i] = AttackTrace::kNever;

    return {FlowDataset(std::move(rows), holdout.labels(), holdout.provenance() + ":attacked(" + model.id() + ")"),
            std::move(trace)};
}

// One independent attack per model; model k uses seed derived from (cfg.seed, k).
inline std::vector<AttackResult> attack_all_models(std::span<ModelQuery> models, const FlowDataset& holdout,
                                                   const PatternSet& patterns, const PerturbConfig& cfg) {
    std::vector<AttackResult> out;
    out.reserve(models.size());
    for (std::size_t k = 0; k < models.size(); ++k) {
        PerturbConfig c = cfg;
        c.seed = derive_seed(cfg.seed, {tag("attack-model"), k});
        out.push_back(evasion_attack(models[k], holdout, patterns, c));
    }
    return out;
}

} // namespace nidsbench
