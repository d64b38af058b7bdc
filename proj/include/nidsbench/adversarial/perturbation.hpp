#pragma once
#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "../core/error.hpp"
#include "../core/rng.hpp"
#include "../dataflow.hpp"

namespace nidsbench {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return lo <= v && v <= hi; }
    double clamp(double v) const { return std::clamp(v, lo, hi); }
    double width() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

using ClassBox = std::array<Interval, kFeatureCount>;

// Per-class, per-feature value envelopes learned from a training set: the
// attacker's knowledge of what each class looks like.
struct PatternSet {
    std::array<ClassBox, 2> boxes;

    const ClassBox& box(std::uint8_t label) const { return boxes.at(label); }

    bool contains(const FeatureRow& x, std::uint8_t label) const {
        const auto& b = box(label);
        for (std::size_t f = 0; f < kFeatureCount; ++f)
            if (!b[f].contains(x[f])) return false;
        return true;
    }

    friend bool operator==(const PatternSet&, const PatternSet&) = default;
};

// Exact per-class min/max of every feature.
inline PatternSet learn_patterns(const FlowDataset& train) {
    PatternSet p;
    std::array<bool, 2> seen{false, false};
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto c = train.label(i);
        auto& box = p.boxes[c];
        const auto& x = train.row(i);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            if (!seen[c])
                box[f] = {x[f], x[f]};
            else
                box[f] = {std::min(box[f].lo, x[f]), std::max(box[f].hi, x[f])};
        }
        seen[c] = true;
    }
    if (!seen[0] || !seen[1]) throw DataError("learn_patterns: both classes need at least one training sample");
    return p;
}

struct PerturbConfig {
    double inclusion_probability = 0.5;  // per-feature chance of being perturbed
    double displacement_lo = 0.0;        // displacement as a fraction of interval width
    double displacement_hi = 0.2;
    std::size_t max_iterations = 15;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(inclusion_probability > 0.0 && inclusion_probability <= 1.0))
            throw ConfigError("perturb: inclusion_probability must lie in (0, 1]");
        if (!(displacement_lo >= 0.0 && displacement_lo <= displacement_hi && displacement_hi <= 1.0))
            throw ConfigError("perturb: displacement range must satisfy 0 <= lo <= hi <= 1");
    }

    nlohmann::ordered_json to_json() const {
        return {{"inclusion_probability", inclusion_probability},
                {"displacement_lo", displacement_lo},
                {"displacement_hi", displacement_hi},
                {"max_iterations", max_iterations},
                {"seed", seed}};
    }

    static PerturbConfig from_json(const nlohmann::json& j, PerturbConfig base) {
        auto get = [&j](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("inclusion_probability", base.inclusion_probability);
        get("displacement_lo", base.displacement_lo);
        get("displacement_hi", base.displacement_hi);
        get("max_iterations", base.max_iterations);
        get("seed", base.seed);
        base.validate();
        return base;
    }
};

inline PerturbConfig perturb_config_from_json(const nlohmann::json& j) { return PerturbConfig::from_json(j, PerturbConfig{}); }

namespace detail {
inline bool family_ok(const FeatureRow& x, const ClassBox& box, std::size_t family) {
    const auto c = family_columns(family);
    for (auto col : {c.total, c.mean, c.std, c.max, c.min})
        if (col && !box[*col].contains(x[*col])) return false;
    if (c.min && c.mean && x[*c.min] > x[*c.mean]) return false;
    if (c.mean && c.max && x[*c.mean] > x[*c.max]) return false;
    if (c.min && c.max && x[*c.min] > x[*c.max]) return false;
    if (c.std && (x[*c.std] < 0.0 || (c.min && c.max && x[*c.std] > x[*c.max] - x[*c.min]))) return false;
    if (c.total && c.max && x[*c.total] < x[*c.max]) return false;
    return true;
}
} // namespace detail

// Restores family consistency inside the class box. Per family: min, mean
// and max take the sorted order of their three values and are re-clamped
// into their intervals (clamping is monotone and class envelopes of
// consistent data are ordered, so the order survives); std is clamped into
// its interval and [0, max - min], widening the range when std's lower bound
// requires it; total is raised to at least max. A family that still fails
// (possible only for envelopes learned from inconsistent data) reverts to
// `fallback`. Applying the repair to its own output changes nothing.
inline void repair_families(FeatureRow& x, const ClassBox& box, const FeatureRow& fallback) {
    const auto& schema = FeatureSchema::canonical();
    for (std::size_t f = 0; f < schema.families().size(); ++f) {
        if (schema.families()[f].stat_kinds.size() < 2) continue;
        const auto c = family_columns(f);
        if (c.min && c.mean && c.max) {
            std::array<double, 3> v{x[*c.min], x[*c.mean], x[*c.max]};
            std::sort(v.begin(), v.end());
            x[*c.min] = box[*c.min].clamp(v[0]);
            x[*c.mean] = box[*c.mean].clamp(v[1]);
            x[*c.max] = box[*c.max].clamp(v[2]);
        }
        if (c.std && c.min && c.max) {
            double s = box[*c.std].clamp(std::max(x[*c.std], 0.0));
            double& lo = x[*c.min];
            double& hi = x[*c.max];
            const double need = std::max(box[*c.std].lo, 0.0);
            if (hi - lo < need) {
                hi = std::min(box[*c.max].hi, lo + need);
                if (hi - lo < need) lo = std::max(box[*c.min].lo, hi - need);
            }
            x[*c.std] = std::min(s, hi - lo);
        }
        if (c.total && c.max) x[*c.total] = std::max(box[*c.total].clamp(x[*c.total]), x[*c.max]);
        if (!detail::family_ok(x, box, f))
            for (auto col : {c.total, c.mean, c.std, c.max, c.min})
                if (col) x[*col] = fallback[*col];
    }
}

// One constrained perturbation of `sample` within the envelope of `label`.
// Draw order (replayable from the same stream): inclusion flags for all 24
// features, redrawn until at least one is set; then, for each included
// feature in index order, the displacement fraction and the sign.
inline FeatureRow perturb(const FeatureRow& sample, std::uint8_t label, const PatternSet& patterns,
                          const PerturbConfig& cfg, Rng& rng) {
    const auto& box = patterns.box(label);
    FeatureRow base;
    for (std::size_t f = 0; f < kFeatureCount; ++f) base[f] = box[f].clamp(sample[f]);

    std::array<bool, kFeatureCount> include{};
    bool any = false;
    while (!any)
        for (std::size_t f = 0; f < kFeatureCount; ++f) any |= (include[f] = rng.bernoulli(cfg.inclusion_probability));

    FeatureRow x = base;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (!include[f]) continue;
        const double delta = rng.uniform(cfg.displacement_lo, cfg.displacement_hi);
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        x[f] = box[f].clamp(x[f] + sign * delta * box[f].width());
    }
    repair_families(x, box, base);
    return x;
}

// Original rows followed by one perturbed copy of every malicious row, in row
// order. Copy k uses stream (cfg.seed, "augment", row index).
inline FlowDataset augment_training_set(const FlowDataset& train, const PatternSet& patterns, const PerturbConfig& cfg) {
    cfg.validate();
    if (train.count(kMalicious) == 0) throw DataError("augment_training_set: no malicious samples to perturb");
    std::vector<FeatureRow> rows = train.rows();
    std::vector<std::uint8_t> labels = train.labels();
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.label(i) != kMalicious) continue;
        Rng rng = make_stream(cfg.seed, {tag("augment"), i});
        rows.push_back(perturb(train.row(i), kMalicious, patterns, cfg, rng));
        labels.push_back(kMalicious);
    }
    return FlowDataset(std::move(rows), std::move(labels), train.provenance() + ":adversarial");
}

} // namespace nidsbench
