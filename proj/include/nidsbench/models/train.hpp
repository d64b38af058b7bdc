#pragma once
#include <variant>

#include "boosting.hpp"
#include "ebm.hpp"
#include "forest.hpp"
#include "model.hpp"

namespace nidsbench {

// Trains the kind selected by the hyperparameter alternative.
inline TrainedModel train_model(const FlowDataset& train, const Hyperparams& hp, std::uint64_t seed,
                                TrainingMode mode = TrainingMode::regular) {
    TrainedModel m = std::visit(
        [&](const auto& p) -> TrainedModel {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RfParams>) return train_random_forest(train, p, seed);
            else if constexpr (std::is_same_v<T, LevelBoostParams>) return train_level_boost(train, p, seed);
            else if constexpr (std::is_same_v<T, LeafBoostParams>) return train_leaf_boost_goss(train, p, seed);
            else return train_cyclic_ebm(train, p, seed);
        },
        hp);
    m.metadata.training_mode = mode;
    return m;
}

} // namespace nidsbench
