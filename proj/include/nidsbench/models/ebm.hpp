#pragma once
#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "boosting.hpp"
#include "gradient_tree.hpp"
#include "model.hpp"

namespace nidsbench {

namespace detail {
// Leaf value reached by every value of bin `b` of a single-feature tree whose
// thresholds are edges of `bins`.
inline double bin_leaf_value(const DecisionTree& tree, const BinIndex& bins, std::size_t feature, std::size_t b) {
    const auto& edges = bins.edges[feature];
    std::size_t i = 0;
    while (!tree.nodes[i].is_leaf()) {
        const auto& nd = tree.nodes[i];
        const auto k = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), nd.threshold) - edges.begin());
        i = static_cast<std::size_t>(b <= k ? nd.left : nd.right);
    }
    return tree.nodes[i].value;
}
} // namespace detail

// Cyclic boosting of one-feature trees. Each round visits the 24 features in
// canonical order; the tree fitted to the current residuals is folded into
// that feature's per-bin score table. The model is the prevalence log-odds
// intercept plus 24 table lookups.
inline TrainedModel train_cyclic_ebm(const FlowDataset& train, const EbmParams& hp, std::uint64_t seed,
                                     TrainingLog* log = nullptr) {
    validate(Hyperparams{hp});
    train.require_both_classes("train_cyclic_ebm");
    const std::size_t n = train.size();
    TrainedModel m;
    m.hyperparams = hp;
    m.metadata.seed = seed;
    m.metadata.provenance = train.provenance();
    m.base_score = prevalence_log_odds(train);
    auto& tables = m.additive;
    tables.bins = build_bins(train.rows(), hp.max_bins);
    for (std::size_t f = 0; f < kFeatureCount; ++f) tables.scores[f].assign(tables.bins.bin_count(f), 0.0);
    const BinnedMatrix binned = tables.bins.apply(train.rows());

    GradientTreeConfig cfg;
    cfg.mode = GrowMode::leaf_wise;
    cfg.max_leaves = hp.max_leaves;
    cfg.min_samples_leaf = hp.min_samples_leaf;

    std::vector<double> logit(n, m.base_score), grad(n), hess(n), delta;
    std::vector<std::uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::uint32_t{0});
    for (std::size_t round = 0; round < hp.n_estimators; ++round) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const std::size_t nb = tables.bins.bin_count(f);
            if (nb < 2) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const auto gh = logistic_grad_hess(logit[i], train.label(i));
                grad[i] = gh.g;
                hess[i] = gh.h;
            }
            const std::size_t feature[] = {f};
            const DecisionTree tree = fit_gradient_tree(grad, hess, rows, binned, tables.bins, feature, cfg);
            if (tree.nodes.size() < 2) continue;
            delta.resize(nb);
            for (std::size_t b = 0; b < nb; ++b) {
                delta[b] = hp.learning_rate * detail::bin_leaf_value(tree, tables.bins, f, b);
                tables.scores[f][b] += delta[b];
            }
            const auto& col = binned.columns[f];
            for (std::size_t i = 0; i < n; ++i) logit[i] += delta[col[i]];
        }
        if (log) {
            double loss = 0.0;
            for (std::size_t i = 0; i < n; ++i) loss += cross_entropy(logit[i], train.label(i));
            log->train_loss.push_back(loss / static_cast<double>(n));
        }
    }
    return m;
}

} // namespace nidsbench
