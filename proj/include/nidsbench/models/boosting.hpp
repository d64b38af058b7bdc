#pragma once
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "../dataflow.hpp"
#include "binning.hpp"
#include "goss.hpp"
#include "gradient_tree.hpp"
#include "model.hpp"

namespace nidsbench {

struct GradHess {
    double g;
    double h;
};

// Cross-entropy derivatives with respect to the logit.
inline GradHess logistic_grad_hess(double logit, std::uint8_t label) {
    const double p = sigmoid(logit);
    return {p - static_cast<double>(label), p * (1.0 - p)};
}

// -[y ln p + (1 - y) ln(1 - p)] with p = sigmoid(logit), without overflow.
inline double cross_entropy(double logit, std::uint8_t label) {
    return std::max(logit, 0.0) - logit * static_cast<double>(label) + std::log1p(std::exp(-std::abs(logit)));
}

// Log-odds of the malicious prevalence.
inline double prevalence_log_odds(const FlowDataset& ds) {
    const double p = static_cast<double>(ds.count(kMalicious)) / static_cast<double>(ds.size());
    return std::log(p / (1.0 - p));
}

struct TrainingLog {
    std::vector<double> train_loss;  // mean cross-entropy after each round
};

struct BoostSettings {
    GradientTreeConfig tree;
    std::size_t rounds = 100;
    double learning_rate = 0.1;
    double feature_subsample = 1.0;
    std::optional<std::pair<double, double>> goss;  // (top, other) fractions
};

// Shared loop of the tree-boosting kinds. Round r draws its candidate
// features from stream (seed, "features", r) and its GOSS sample from
// (seed, "goss", r).
inline std::pair<double, std::vector<DecisionTree>> boost_trees(const FlowDataset& train, const BoostSettings& s,
                                                                std::uint64_t seed, TrainingLog* log = nullptr) {
    train.require_both_classes("boosting");
    const std::size_t n = train.size();
    const BinIndex bins = build_bins(train.rows(), 256);
    const BinnedMatrix binned = bins.apply(train.rows());
    const double base = prevalence_log_odds(train);

    std::vector<double> logit(n, base), grad(n), hess(n), wgrad(n), whess(n);
    std::vector<std::uint32_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), std::uint32_t{0});
    std::vector<DecisionTree> trees;
    trees.reserve(s.rounds);
    for (std::size_t round = 0; round < s.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto gh = logistic_grad_hess(logit[i], train.label(i));
            grad[i] = gh.g;
            hess[i] = gh.h;
        }
        std::span<const std::uint32_t> rows = all_rows;
        std::span<const double> g = grad, h = hess;
        GossSample sample;
        if (s.goss) {
            Rng goss_rng = make_stream(seed, {tag("goss"), round});
            sample = goss_sample(grad, s.goss->first, s.goss->second, goss_rng);
            std::fill(wgrad.begin(), wgrad.end(), 0.0);
            std::fill(whess.begin(), whess.end(), 0.0);
            for (std::size_t k = 0; k < sample.indices.size(); ++k) {
                const auto i = sample.indices[k];
                wgrad[i] = grad[i] * sample.weights[k];
                whess[i] = hess[i] * sample.weights[k];
            }
            rows = sample.indices;
            g = wgrad;
            h = whess;
        }
        Rng feature_rng = make_stream(seed, {tag("features"), round});
        const auto features = sample_features(subsample_count(s.feature_subsample), feature_rng);
        DecisionTree tree = fit_gradient_tree(g, h, rows, binned, bins, features, s.tree);
        for (auto& nd : tree.nodes) nd.value *= s.learning_rate;
        for (std::size_t i = 0; i < n; ++i) logit[i] += tree.predict(train.row(i));
        trees.push_back(std::move(tree));
        if (log) {
            double loss = 0.0;
            for (std::size_t i = 0; i < n; ++i) loss += cross_entropy(logit[i], train.label(i));
            log->train_loss.push_back(loss / static_cast<double>(n));
        }
    }
    return {base, std::move(trees)};
}

// Level-wise histogram boosting; min_leaf_weight bounds each child's hessian sum.
inline TrainedModel train_level_boost(const FlowDataset& train, const LevelBoostParams& hp, std::uint64_t seed,
                                      TrainingLog* log = nullptr) {
    validate(Hyperparams{hp});
    BoostSettings s;
    s.tree.mode = GrowMode::level_wise;
    s.tree.max_depth = hp.max_depth;
    s.tree.min_child_weight = hp.min_leaf_weight;
    s.tree.min_loss_reduction = hp.min_loss_reduction;
    s.rounds = hp.n_estimators;
    s.learning_rate = hp.learning_rate;
    s.feature_subsample = hp.feature_subsample;
    TrainedModel m;
    m.hyperparams = hp;
    std::tie(m.base_score, m.trees) = boost_trees(train, s, seed, log);
    m.metadata.seed = seed;
    m.metadata.provenance = train.provenance();
    return m;
}

// Settings of the leaf-wise kind; `with_goss = false` gives plain leaf-wise
// boosting on every row.
inline BoostSettings leaf_boost_settings(const LeafBoostParams& hp, bool with_goss = true) {
    BoostSettings s;
    s.tree.mode = GrowMode::leaf_wise;
    s.tree.max_leaves = hp.max_leaves;
    s.tree.min_samples_leaf = hp.min_samples_leaf;
    s.tree.min_loss_reduction = hp.min_loss_reduction;
    s.rounds = hp.n_estimators;
    s.learning_rate = hp.learning_rate;
    s.feature_subsample = hp.feature_subsample;
    if (with_goss) s.goss = std::pair{hp.goss_top_fraction, hp.goss_other_fraction};
    return s;
}

inline TrainedModel train_leaf_boost_goss(const FlowDataset& train, const LeafBoostParams& hp, std::uint64_t seed,
                                          TrainingLog* log = nullptr) {
    validate(Hyperparams{hp});
    TrainedModel m;
    m.hyperparams = hp;
    std::tie(m.base_score, m.trees) = boost_trees(train, leaf_boost_settings(hp), seed, log);
    m.metadata.seed = seed;
    m.metadata.provenance = train.provenance();
    return m;
}

} // namespace nidsbench
