#pragma once
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/error.hpp"
#include "../schema.hpp"
#include "binning.hpp"
#include "hyperparams.hpp"
#include "tree.hpp"

namespace nidsbench {

// L2 regularization of gradient-tree leaves.
inline constexpr double kLeafL2 = 1.0;

enum class TrainingMode { regular, adversarial };

constexpr std::string_view to_string(TrainingMode m) {
    return m == TrainingMode::regular ? "regular" : "adversarial";
}

struct ModelMetadata {
    std::uint64_t seed = 0;
    std::string provenance;
    TrainingMode training_mode = TrainingMode::regular;
    nlohmann::ordered_json tuning;  // null unless produced by retrain_full
};

// Per-feature additive score tables over a shared binning.
struct AdditiveTables {
    BinIndex bins;
    std::array<std::vector<double>, kFeatureCount> scores;
};

// A trained ensemble. Boosted tree leaves are stored already multiplied by the
// learning rate, so logit = base_score + sum of tree outputs. RF trees are
// classification trees whose leaves hold malicious-class frequencies.
struct TrainedModel {
    Hyperparams hyperparams;
    double base_score = 0.0;
    std::vector<DecisionTree> trees;
    AdditiveTables additive;  // CYCLIC_EBM only
    ModelMetadata metadata;

    ModelKind kind() const { return kind_of(hyperparams); }
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Per-feature contribution of an additive model for one sample.
inline double additive_term(const AdditiveTables& t, std::size_t feature, double value) {
    return t.scores[feature][t.bins.bin(feature, value)];
}

// Raw score: log-odds for boosted kinds, mean leaf frequency for RF.
inline double predict_score(const TrainedModel& m, const FeatureRow& x) {
    switch (m.kind()) {
    case ModelKind::RF: {
        if (m.trees.empty()) return 0.0;
        double s = 0.0;
        for (const auto& t : m.trees) s += t.predict(x);
        return s / static_cast<double>(m.trees.size());
    }
    case ModelKind::CYCLIC_EBM: {
        double z = m.base_score;
        for (std::size_t f = 0; f < kFeatureCount; ++f) z += additive_term(m.additive, f, x[f]);
        return z;
    }
    default: {
        double z = m.base_score;
        for (const auto& t : m.trees) z += t.predict(x);
        return z;
    }
    }
}

inline double predict_proba(const TrainedModel& m, const FeatureRow& x) {
    const double s = predict_score(m, x);
    return m.kind() == ModelKind::RF ? s : sigmoid(s);
}

inline std::vector<double> predict_proba(const TrainedModel& m, std::span<const FeatureRow> rows) {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = predict_proba(m, rows[i]);
    return out;
}

// Flat row-major input, as it arrives from external callers.
inline std::vector<double> predict_proba(const TrainedModel& m, std::span<const double> flat, std::size_t n_cols) {
    if (n_cols != kFeatureCount || flat.size() % kFeatureCount != 0)
        throw SchemaError("predict: expected " + std::to_string(kFeatureCount) + " features per sample, got " +
                          std::to_string(n_cols));
    std::vector<double> out(flat.size() / kFeatureCount);
    FeatureRow row;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(i * kFeatureCount), kFeatureCount, row.begin());
        out[i] = predict_proba(m, row);
    }
    return out;
}

// Malicious (1) when proba >= threshold; 0.5 itself counts as malicious.
inline std::vector<std::uint8_t> predict_label(const TrainedModel& m, std::span<const FeatureRow> rows,
                                               double threshold = 0.5) {
    std::vector<std::uint8_t> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = predict_proba(m, rows[i]) >= threshold ? 1 : 0;
    return out;
}

struct Contribution {
    std::string feature;
    double value;
};

struct AdditiveExplanation {
    double intercept = 0.0;
    std::vector<Contribution> contributions;  // canonical feature order

    // Summed in the same order as predict_score, so the two agree exactly.
    double logit() const {
        double z = intercept;
        for (const auto& c : contributions) z += c.value;
        return z;
    }
};

inline AdditiveExplanation explain_additive(const TrainedModel& m, const FeatureRow& x) {
    if (m.kind() != ModelKind::CYCLIC_EBM)
        throw ConfigError("explain_additive: model kind " + std::string(to_string(m.kind())) + " is not additive");
    AdditiveExplanation e;
    e.intercept = m.base_score;
    const auto& schema = FeatureSchema::canonical();
    for (std::size_t f = 0; f < kFeatureCount; ++f)
        e.contributions.push_back({schema.feature(f).name, additive_term(m.additive, f, x[f])});
    return e;
}

} // namespace nidsbench
