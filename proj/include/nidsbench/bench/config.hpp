#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../adversarial/perturbation.hpp"
#include "../core/error.hpp"
#include "../core/version.hpp"
#include "../evaluation/tuning.hpp"

namespace nidsbench {

struct SyntheticSpec {
    std::size_t benign = 1000;
    std::size_t malicious = 1000;
    double separation = 3.0;
};

struct DatasetSource {
    std::string tag;                           // report label, e.g. "HIKARI"
    std::filesystem::path csv;                 // raw CSV export, or
    std::string profile = "canonical";         // column profile name or path
    std::optional<SyntheticSpec> synthetic;    // generated data instead of a CSV
};

// Everything a benchmark run depends on. The master seed determines every
// derived seed; thread count and output directory do not affect results and
// are left out of the config echo.
struct BenchConfig {
    DatasetSource dataset;
    std::uint64_t seed = 42;
    double train_fraction = 0.70;
    std::size_t cv_folds = 5;
    PerturbConfig perturb;
    std::map<ModelKind, GridSpec> grid_overrides;
    std::vector<ModelKind> models{std::begin(kAllModelKinds), std::end(kAllModelKinds)};
    std::filesystem::path out_dir;
    unsigned threads = 0;

    GridSpec grid(ModelKind kind) const {
        if (auto it = grid_overrides.find(kind); it != grid_overrides.end()) return it->second;
        return default_grid(kind);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        auto& d = j["dataset"];
        d["tag"] = dataset.tag;
        if (dataset.synthetic) {
            d["synthetic"] = {{"benign", dataset.synthetic->benign},
                              {"malicious", dataset.synthetic->malicious},
                              {"separation", dataset.synthetic->separation}};
        } else {
            d["csv"] = dataset.csv.generic_string();
            d["profile"] = dataset.profile;
        }
        j["seed"] = seed;
        j["train_fraction"] = train_fraction;
        j["cv_folds"] = cv_folds;
        auto p = perturb.to_json();
        p.erase("seed");  // derived from the master seed
        j["perturb"] = p;
        j["models"] = nlohmann::ordered_json::array();
        for (auto k : models) j["models"].push_back(to_string(k));
        j["grids"] = nlohmann::ordered_json::object();
        for (const auto& [kind, g] : grid_overrides) {
            auto& arr = j["grids"][std::string(to_string(kind))] = nlohmann::ordered_json::array();
            for (const auto& hp : g.candidates) arr.push_back(nidsbench::to_json(hp));
        }
        return j;
    }

    // Relative CSV paths resolve against `base_dir` (the config file's directory).
    static BenchConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
        BenchConfig c;
        try {
            if (!j.contains("dataset")) throw ConfigError("config: missing 'dataset'");
            const auto& d = j.at("dataset");
            c.dataset.tag = d.value("tag", std::string{});
            if (d.contains("synthetic")) {
                const auto& s = d.at("synthetic");
                SyntheticSpec spec;
                spec.benign = s.value("benign", spec.benign);
                spec.malicious = s.value("malicious", spec.malicious);
                spec.separation = s.value("separation", spec.separation);
                c.dataset.synthetic = spec;
                if (c.dataset.tag.empty()) c.dataset.tag = "synthetic";
            } else if (d.contains("csv")) {
                std::filesystem::path p = d.at("csv").get<std::string>();
                c.dataset.csv = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
                c.dataset.profile = d.value("profile", std::string("canonical"));
                if (c.dataset.tag.empty()) c.dataset.tag = c.dataset.csv.stem().string();
            } else {
                throw ConfigError("config: dataset needs 'csv' or 'synthetic'");
            }
            c.seed = j.value("seed", c.seed);
            c.train_fraction = j.value("train_fraction", c.train_fraction);
            c.cv_folds = j.value("cv_folds", c.cv_folds);
            if (j.contains("perturb")) c.perturb = PerturbConfig::from_json(j.at("perturb"), PerturbConfig{});
            if (j.contains("models")) {
                c.models.clear();
                for (const auto& m : j.at("models")) c.models.push_back(parse_model_kind(m.get<std::string>()));
            }
            if (j.contains("grids"))
                for (const auto& [name, arr] : j.at("grids").items()) {
                    const ModelKind kind = parse_model_kind(name);
                    GridSpec g{kind, {}};
                    for (const auto& hp : arr) g.candidates.push_back(hyperparams_from_json(hp, kind));
                    if (g.candidates.empty()) throw ConfigError("config: empty grid for " + name);
                    c.grid_overrides[kind] = std::move(g);
                }
            if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
            c.threads = j.value("threads", 0u);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        c.validate();
        return c;
    }

    static BenchConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config " + path.string());
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config " + path.string() + ": " + e.what());
        }
        return from_json(j, path.parent_path());
    }

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("config: train_fraction must lie in (0, 1)");
        if (cv_folds < 2) throw ConfigError("config: cv_folds must be >= 2");
        perturb.validate();
        if (dataset.synthetic && (dataset.synthetic->benign < 1 || dataset.synthetic->malicious < 1))
            throw ConfigError("config: synthetic class counts must be >= 1");
    }
};

} // namespace nidsbench
