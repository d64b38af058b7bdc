#pragma once
#include <algorithm>
#include <numeric>
#include <vector>

#include "../core/parallel.hpp"
#include "cart.hpp"
#include "model.hpp"

namespace nidsbench {

// Bagged Gini forest. Tree t draws its bootstrap sample and feature subsets
// from its own stream (seed, t), so trees can be grown in any order.
inline TrainedModel train_random_forest(const FlowDataset& train, const RfParams& hp, std::uint64_t seed) {
    validate(Hyperparams{hp});
    train.require_both_classes("train_random_forest");
    TrainedModel model;
    model.hyperparams = hp;
    model.metadata.seed = seed;
    model.metadata.provenance = train.provenance();
    model.trees.resize(hp.n_estimators);
    const std::size_t n = train.size();
    parallel_for(hp.n_estimators, [&](std::size_t t) {
        Rng rng = make_stream(seed, {tag("rf-tree"), t});
        std::vector<std::size_t> rows(n);
        if (hp.bootstrap) {
            for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
            std::sort(rows.begin(), rows.end());
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        model.trees[t] = fit_cart(train, std::move(rows), hp, rng);
    });
    return model;
}

} // namespace nidsbench
