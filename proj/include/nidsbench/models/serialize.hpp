#pragma once
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "../core/error.hpp"
#include "model.hpp"

namespace nidsbench {

inline constexpr int kModelFormatVersion = 1;

// Canonical model document:
//   {version, model_kind, hyperparams, base_score, trees | score_tables, metadata}
// Trees are stored column-wise (feature/threshold/left/right/value arrays).
// Key order is fixed and doubles print in shortest round-trip form, so
// save(load(save(m))) reproduces the same bytes.
inline nlohmann::ordered_json save_model(const TrainedModel& m) {
    using json = nlohmann::ordered_json;
    json j;
    j["version"] = kModelFormatVersion;
    j["model_kind"] = to_string(m.kind());
    j["hyperparams"] = to_json(m.hyperparams);
    j["base_score"] = m.base_score;
    if (m.kind() == ModelKind::CYCLIC_EBM) {
        json tables;
        tables["edges"] = json::array();
        tables["scores"] = json::array();
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            tables["edges"].push_back(m.additive.bins.edges[f]);
            tables["scores"].push_back(m.additive.scores[f]);
        }
        j["score_tables"] = std::move(tables);
    } else {
        json trees = json::array();
        for (const auto& t : m.trees) {
            json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
                 value = json::array();
            for (const auto& nd : t.nodes) {
                feature.push_back(nd.feature);
                threshold.push_back(nd.threshold);
                left.push_back(nd.left);
                right.push_back(nd.right);
                value.push_back(nd.value);
            }
            trees.push_back(json{{"feature", feature},
                                 {"threshold", threshold},
                                 {"left", left},
                                 {"right", right},
                                 {"value", value}});
        }
        j["trees"] = std::move(trees);
    }
    json meta;
    meta["schema"] = FeatureSchema::id;
    meta["features"] = FeatureSchema::canonical().column_names();
    meta["seed"] = m.metadata.seed;
    meta["provenance"] = m.metadata.provenance;
    meta["training_mode"] = to_string(m.metadata.training_mode);
    meta["l2_regularization"] = kLeafL2;
    meta["tuning"] = m.metadata.tuning;
    j["metadata"] = std::move(meta);
    return j;
}

inline TrainedModel load_model(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("version")) throw SchemaError("model: not a model document");
    if (j.at("version") != kModelFormatVersion)
        throw SchemaError("model: format version mismatch (got " + j.at("version").dump() + ", expected " +
                          std::to_string(kModelFormatVersion) + ")");
    try {
        const auto& meta = j.at("metadata");
        if (meta.at("schema").get<std::string>() != FeatureSchema::id ||
            meta.at("features").get<std::vector<std::string>>() != FeatureSchema::canonical().column_names())
            throw SchemaError("model: schema mismatch (model schema '" + meta.at("schema").get<std::string>() +
                              "', toolkit schema '" + std::string(FeatureSchema::id) + "')");
        TrainedModel m;
        const ModelKind kind = parse_model_kind(j.at("model_kind").get<std::string>());
        m.hyperparams = hyperparams_from_json(j.at("hyperparams"), kind);
        m.base_score = j.at("base_score").get<double>();
        if (kind == ModelKind::CYCLIC_EBM) {
            const auto& tables = j.at("score_tables");
            if (tables.at("edges").size() != kFeatureCount || tables.at("scores").size() != kFeatureCount)
                throw SchemaError("model: score_tables must hold " + std::to_string(kFeatureCount) + " features");
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                m.additive.bins.edges[f] = tables.at("edges")[f].get<std::vector<double>>();
                m.additive.scores[f] = tables.at("scores")[f].get<std::vector<double>>();
                if (m.additive.scores[f].size() != m.additive.bins.bin_count(f))
                    throw SchemaError("model: score table size does not match bin count");
            }
        } else {
            for (const auto& t : j.at("trees")) {
                const auto feature = t.at("feature").get<std::vector<std::int32_t>>();
                const auto threshold = t.at("threshold").get<std::vector<double>>();
                const auto left = t.at("left").get<std::vector<std::int32_t>>();
                const auto right = t.at("right").get<std::vector<std::int32_t>>();
                const auto value = t.at("value").get<std::vector<double>>();
                const std::size_t n = feature.size();
                if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n)
                    throw SchemaError("model: ragged tree arrays");
                DecisionTree tree;
                for (std::size_t i = 0; i < n; ++i) tree.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i]});
                try {
                    tree.validate();
                } catch (const std::logic_error& e) {
                    throw SchemaError(std::string("model: invalid tree: ") + e.what());
                }
                m.trees.push_back(std::move(tree));
            }
        }
        m.metadata.seed = meta.at("seed").get<std::uint64_t>();
        m.metadata.provenance = meta.at("provenance").get<std::string>();
        const auto mode = meta.at("training_mode").get<std::string>();
        if (mode != "regular" && mode != "adversarial") throw SchemaError("model: unknown training_mode '" + mode + "'");
        m.metadata.training_mode = mode == "regular" ? TrainingMode::regular : TrainingMode::adversarial;
        m.metadata.tuning = meta.at("tuning");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model: ") + e.what());
    } catch (const ConfigError& e) {
        throw SchemaError(std::string("model: ") + e.what());
    }
}

inline TrainedModel parse_model(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("model: parse error: ") + e.what());
    }
    return load_model(j);
}

inline void save_model_file(const std::filesystem::path& path, const TrainedModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << save_model(m).dump(1) << '\n';
}

inline TrainedModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

} // namespace nidsbench
