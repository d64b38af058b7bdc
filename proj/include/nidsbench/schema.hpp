#pragma once
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nidsbench {

inline constexpr std::size_t kFeatureCount = 24;

// One flow's feature vector in canonical schema order.
using FeatureRow = std::array<double, kFeatureCount>;

enum class StatKind { total, mean, std, max, min };

constexpr std::string_view to_string(StatKind k) {
    switch (k) {
    case StatKind::total: return "total";
    case StatKind::mean: return "mean";
    case StatKind::std: return "std";
    case StatKind::max: return "max";
    case StatKind::min: return "min";
    }
    return "?";
}

enum class Unit { seconds, bytes_per_second };

struct FeatureFamily {
    std::string_view name;
    std::string_view key;  // prefix of canonical column names
    std::string_view description;
    Unit unit;
    std::vector<StatKind> stat_kinds;
};

struct FeatureSpec {
    std::size_t family;
    StatKind kind;
    std::string name;  // canonical column name, e.g. "fwd_iat_total"
};

// The 24 time-related flow features, grouped in 7 characteristic families.
// Order is fixed: every dataset, model and artifact uses it.
class FeatureSchema {
public:
    static const FeatureSchema& canonical() {
        static const FeatureSchema schema;
        return schema;
    }

    // Identifier embedded in persisted artifacts.
    static constexpr std::string_view id = "flow-time-24/v1";

    const std::vector<FeatureFamily>& families() const { return families_; }
    const std::vector<FeatureSpec>& features() const { return features_; }
    const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
    std::size_t size() const { return features_.size(); }

    std::optional<std::size_t> index_of(std::size_t family, StatKind kind) const {
        for (std::size_t i = 0; i < features_.size(); ++i)
            if (features_[i].family == family && features_[i].kind == kind) return i;
        return std::nullopt;
    }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < features_.size(); ++i)
            if (features_[i].name == name) return i;
        return std::nullopt;
    }

    std::vector<std::string> column_names() const {
        std::vector<std::string> out;
        for (const auto& f : features_) out.push_back(f.name);
        return out;
    }

private:
    FeatureSchema() {
        using enum StatKind;
        families_ = {
            {"Flow Packet IAT", "flow_iat", "Packet IAT of the full connection", Unit::seconds, {mean, std, max, min}},
            {"Forward Packet IAT", "fwd_iat", "Packet IAT of the client", Unit::seconds, {total, mean, std, max, min}},
            {"Backward Packet IAT", "bwd_iat", "Packet IAT of the server", Unit::seconds, {total, mean, std, max, min}},
            {"Forward Bulk Rate", "fwd_bulk_rate", "Transmission rate of the client", Unit::bytes_per_second, {mean}},
            {"Backward Bulk Rate", "bwd_bulk_rate", "Transmission rate of the server", Unit::bytes_per_second, {mean}},
            {"Flow Active Time", "active", "Transmission time of the full connection", Unit::seconds, {mean, std, max, min}},
            {"Flow Idle Time", "idle", "Inactive time of the full connection", Unit::seconds, {mean, std, max, min}},
        };
        for (std::size_t f = 0; f < families_.size(); ++f)
            for (auto k : families_[f].stat_kinds)
                features_.push_back({f, k, std::string(families_[f].key) + "_" + std::string(to_string(k))});
    }

    std::vector<FeatureFamily> families_;
    std::vector<FeatureSpec> features_;
};

// Column indices of one family's statistics; absent kinds are nullopt.
struct FamilyColumns {
    std::optional<std::size_t> total, mean, std, max, min;
};

inline FamilyColumns family_columns(std::size_t family, const FeatureSchema& schema = FeatureSchema::canonical()) {
    using enum StatKind;
    return {schema.index_of(family, total), schema.index_of(family, mean), schema.index_of(family, std),
            schema.index_of(family, max), schema.index_of(family, min)};
}

} // namespace nidsbench
