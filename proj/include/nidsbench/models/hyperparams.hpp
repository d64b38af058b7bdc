#pragma once
#include <cstddef>
#include <string>
#include <string_view>
#include <optional>
#include <variant>

#include <json.hpp>

#include "../core/error.hpp"

namespace nidsbench {

enum class ModelKind { RF, LEVEL_BOOST, LEAF_BOOST_GOSS, CYCLIC_EBM };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::RF, ModelKind::LEVEL_BOOST, ModelKind::LEAF_BOOST_GOSS,
                                               ModelKind::CYCLIC_EBM};

constexpr std::string_view to_string(ModelKind k) {
    switch (k) {
    case ModelKind::RF: return "RF";
    case ModelKind::LEVEL_BOOST: return "LEVEL_BOOST";
    case ModelKind::LEAF_BOOST_GOSS: return "LEAF_BOOST_GOSS";
    case ModelKind::CYCLIC_EBM: return "CYCLIC_EBM";
    }
    return "?";
}

// Accepts the canonical names and the common library aliases (rf, xgb, lgbm, ebm).
inline ModelKind parse_model_kind(std::string_view s) {
    std::string lower;
    for (char c : s) lower.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    if (lower == "rf") return ModelKind::RF;
    if (lower == "level_boost" || lower == "xgb") return ModelKind::LEVEL_BOOST;
    if (lower == "leaf_boost_goss" || lower == "lgbm") return ModelKind::LEAF_BOOST_GOSS;
    if (lower == "cyclic_ebm" || lower == "ebm") return ModelKind::CYCLIC_EBM;
    throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

// Defaults are the fixed values of the reference configurations; ranged
// parameters default to the lower end of their range.
struct RfParams {
    std::size_t n_estimators = 100;
    std::size_t max_features = 4;
    std::size_t max_depth = 8;
    std::size_t min_samples_leaf = 2;
    bool bootstrap = true;  // test hook; the benchmark always bags
    friend bool operator==(const RfParams&, const RfParams&) = default;
};

struct LevelBoostParams {
    std::size_t n_estimators = 100;
    std::size_t max_depth = 4;
    double min_leaf_weight = 1.0;  // minimum hessian sum per child
    double min_loss_reduction = 0.01;
    double learning_rate = 0.1;
    double feature_subsample = 0.7;  // fraction of features drawn per tree
    friend bool operator==(const LevelBoostParams&, const LevelBoostParams&) = default;
};

struct LeafBoostParams {
    std::size_t n_estimators = 100;
    std::size_t max_leaves = 15;
    std::size_t min_samples_leaf = 20;
    double min_loss_reduction = 0.01;
    double learning_rate = 0.1;
    double feature_subsample = 0.7;
    double goss_top_fraction = 0.2;
    double goss_other_fraction = 0.1;
    friend bool operator==(const LeafBoostParams&, const LeafBoostParams&) = default;
};

struct EbmParams {
    std::size_t n_estimators = 100;  // outer cyclic rounds
    std::size_t max_bins = 256;
    std::size_t max_leaves = 7;
    std::size_t min_samples_leaf = 2;
    double learning_rate = 0.1;
    friend bool operator==(const EbmParams&, const EbmParams&) = default;
};

using Hyperparams = std::variant<RfParams, LevelBoostParams, LeafBoostParams, EbmParams>;

inline ModelKind kind_of(const Hyperparams& hp) { return static_cast<ModelKind>(hp.index()); }

inline Hyperparams default_hyperparams(ModelKind k) {
    switch (k) {
    case ModelKind::RF: return RfParams{};
    case ModelKind::LEVEL_BOOST: return LevelBoostParams{};
    case ModelKind::LEAF_BOOST_GOSS: return LeafBoostParams{};
    case ModelKind::CYCLIC_EBM: return EbmParams{};
    }
    return RfParams{};
}

namespace detail {
inline void check_rate(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}
inline void check_positive(std::size_t v, const char* name) {
    if (v < 1) throw ConfigError(std::string(name) + " must be >= 1");
}
} // namespace detail

// Range checks. A learning rate of 0 is accepted (it freezes the model at its
// base score), fractions must be positive.
inline void validate(const Hyperparams& hp) {
    using detail::check_positive;
    using detail::check_rate;
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            check_positive(p.n_estimators, "n_estimators");
            if constexpr (std::is_same_v<T, RfParams>) {
                check_positive(p.max_depth, "max_depth");
                check_positive(p.max_features, "max_features");
                check_positive(p.min_samples_leaf, "min_samples_leaf");
            } else if constexpr (std::is_same_v<T, LevelBoostParams>) {
                check_positive(p.max_depth, "max_depth");
                check_rate(p.learning_rate, "learning_rate");
                if (!(p.feature_subsample > 0.0 && p.feature_subsample <= 1.0))
                    throw ConfigError("feature_subsample must lie in (0, 1]");
                if (p.min_leaf_weight < 0.0 || p.min_loss_reduction < 0.0)
                    throw ConfigError("min_leaf_weight and min_loss_reduction must be >= 0");
            } else if constexpr (std::is_same_v<T, LeafBoostParams>) {
                if (p.max_leaves < 2) throw ConfigError("max_leaves must be >= 2");
                check_positive(p.min_samples_leaf, "min_samples_leaf");
                check_rate(p.learning_rate, "learning_rate");
                if (!(p.feature_subsample > 0.0 && p.feature_subsample <= 1.0))
                    throw ConfigError("feature_subsample must lie in (0, 1]");
                if (!(p.goss_top_fraction > 0.0 && p.goss_top_fraction <= 1.0))
                    throw ConfigError("goss_top_fraction must lie in (0, 1]");
                if (!(p.goss_other_fraction >= 0.0 && p.goss_other_fraction <= 1.0 - p.goss_top_fraction + 1e-12))
                    throw ConfigError("goss_other_fraction must lie in [0, 1 - goss_top_fraction]");
                if (p.min_loss_reduction < 0.0) throw ConfigError("min_loss_reduction must be >= 0");
            } else {
                if (p.max_bins < 2 || p.max_bins > 256) throw ConfigError("max_bins must lie in [2, 256]");
                if (p.max_leaves < 2) throw ConfigError("max_leaves must be >= 2");
                check_positive(p.min_samples_leaf, "min_samples_leaf");
                check_rate(p.learning_rate, "learning_rate");
            }
        },
        hp);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Hyperparams& hp) {
    nlohmann::ordered_json j;
    j["model_kind"] = to_string(kind_of(hp));
    std::visit(
        [&j](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            j["n_estimators"] = p.n_estimators;
            if constexpr (std::is_same_v<T, RfParams>) {
                j["max_features"] = p.max_features;
                j["max_depth"] = p.max_depth;
                j["min_samples_leaf"] = p.min_samples_leaf;
                j["bootstrap"] = p.bootstrap;
            } else if constexpr (std::is_same_v<T, LevelBoostParams>) {
                j["max_depth"] = p.max_depth;
                j["min_leaf_weight"] = p.min_leaf_weight;
                j["min_loss_reduction"] = p.min_loss_reduction;
                j["learning_rate"] = p.learning_rate;
                j["feature_subsample"] = p.feature_subsample;
            } else if constexpr (std::is_same_v<T, LeafBoostParams>) {
                j["max_leaves"] = p.max_leaves;
                j["min_samples_leaf"] = p.min_samples_leaf;
                j["min_loss_reduction"] = p.min_loss_reduction;
                j["learning_rate"] = p.learning_rate;
                j["feature_subsample"] = p.feature_subsample;
                j["goss_top_fraction"] = p.goss_top_fraction;
                j["goss_other_fraction"] = p.goss_other_fraction;
            } else {
                j["max_bins"] = p.max_bins;
                j["max_leaves"] = p.max_leaves;
                j["min_samples_leaf"] = p.min_samples_leaf;
                j["learning_rate"] = p.learning_rate;
            }
        },
        hp);
    return j;
}

// Missing fields keep their defaults, so partial grid overrides are accepted.
inline Hyperparams hyperparams_from_json(const nlohmann::json& j, std::optional<ModelKind> expected = std::nullopt) {
    try {
        const ModelKind kind = j.contains("model_kind") ? parse_model_kind(j.at("model_kind").get<std::string>())
                               : expected               ? *expected
                                                        : throw ConfigError("hyperparams: missing model_kind");
        if (expected && kind != *expected)
            throw ConfigError("hyperparams: expected " + std::string(to_string(*expected)) + ", got " +
                              std::string(to_string(kind)));
        Hyperparams hp = default_hyperparams(kind);
        std::visit(
            [&j](auto& p) {
                using T = std::decay_t<decltype(p)>;
                auto get = [&j](const char* key, auto& field) {
                    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
                };
                get("n_estimators", p.n_estimators);
                if constexpr (std::is_same_v<T, RfParams>) {
                    get("max_features", p.max_features);
                    get("max_depth", p.max_depth);
                    get("min_samples_leaf", p.min_samples_leaf);
                    get("bootstrap", p.bootstrap);
                } else if constexpr (std::is_same_v<T, LevelBoostParams>) {
                    get("max_depth", p.max_depth);
                    get("min_leaf_weight", p.min_leaf_weight);
                    get("min_loss_reduction", p.min_loss_reduction);
                    get("learning_rate", p.learning_rate);
                    get("feature_subsample", p.feature_subsample);
                } else if constexpr (std::is_same_v<T, LeafBoostParams>) {
                    get("max_leaves", p.max_leaves);
                    get("min_samples_leaf", p.min_samples_leaf);
                    get("min_loss_reduction", p.min_loss_reduction);
                    get("learning_rate", p.learning_rate);
                    get("feature_subsample", p.feature_subsample);
                    get("goss_top_fraction", p.goss_top_fraction);
                    get("goss_other_fraction", p.goss_other_fraction);
                } else {
                    get("max_bins", p.max_bins);
                    get("max_leaves", p.max_leaves);
                    get("min_samples_leaf", p.min_samples_leaf);
                    get("learning_rate", p.learning_rate);
                }
            },
            hp);
        validate(hp);
        return hp;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("hyperparams: ") + e.what());
    }
}

} // namespace nidsbench
