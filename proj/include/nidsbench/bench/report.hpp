#pragma once
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../adversarial/attack.hpp"
#include "../core/csv.hpp"
#include "../core/version.hpp"
#include "../evaluation/metrics.hpp"
#include "../models/hyperparams.hpp"
#include "../models/model.hpp"

namespace nidsbench {

struct BenchRow {
    ModelKind model = ModelKind::RF;
    TrainingMode training = TrainingMode::regular;
    bool attacked = false;
    Metrics metrics;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline std::string_view training_label(TrainingMode m) { return m == TrainingMode::regular ? "Regular" : "Adversarial"; }

inline TrainingMode parse_training_label(std::string_view s) {
    if (s == "Regular") return TrainingMode::regular;
    if (s == "Adversarial") return TrainingMode::adversarial;
    throw DataError("report: unknown training mode '" + std::string(s) + "'");
}

inline bool parse_attacked(std::string_view s) {
    if (s == "Yes") return true;
    if (s == "No") return false;
    throw DataError("report: attacked must be Yes or No, got '" + std::string(s) + "'");
}

// Rows ordered model kind, then Regular/Adversarial, then No/Yes.
struct BenchReport {
    std::string dataset;
    nlohmann::ordered_json config;
    std::string version{kToolkitVersion};
    std::vector<BenchRow> rows;
    std::vector<AttackTrace> traces;
    nlohmann::ordered_json tuning = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["dataset"] = dataset;
        j["config"] = config;
        j["version"] = version;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"model", to_string(r.model)},
                                 {"training", training_label(r.training)},
                                 {"attacked", r.attacked ? "Yes" : "No"},
                                 {"acc", r.metrics.acc},
                                 {"prc", r.metrics.prc},
                                 {"rcl", r.metrics.rcl},
                                 {"f1s", r.metrics.f1s},
                                 {"fpr", r.metrics.fpr}});
        j["traces"] = nlohmann::ordered_json::array();
        for (const auto& t : traces) j["traces"].push_back(t.to_json());
        j["tuning"] = tuning;
        return j;
    }

    static BenchReport from_json(const nlohmann::json& j) {
        BenchReport r;
        try {
            r.dataset = j.at("dataset").get<std::string>();
            r.config = j.at("config");
            r.version = j.at("version").get<std::string>();
            for (const auto& row : j.at("rows"))
                r.rows.push_back({parse_model_kind(row.at("model").get<std::string>()),
                                  parse_training_label(row.at("training").get<std::string>()),
                                  parse_attacked(row.at("attacked").get<std::string>()),
                                  {row.at("acc").get<double>(), row.at("prc").get<double>(), row.at("rcl").get<double>(),
                                   row.at("f1s").get<double>(), row.at("fpr").get<double>()}});
            if (j.contains("traces"))
                for (const auto& t : j.at("traces")) r.traces.push_back(AttackTrace::from_json(t));
            if (j.contains("tuning")) r.tuning = j.at("tuning");
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("report: ") + e.what());
        } catch (const ConfigError& e) {
            throw DataError(std::string("report: ") + e.what());
        }
        return r;
    }
};

namespace detail {
inline std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
    return buf;
}

inline std::string pad(std::string_view s, std::size_t width, bool right = false) {
    std::string out(s);
    if (out.size() < width) out.insert(right ? 0 : out.size(), width - out.size(), ' ');
    return out;
}

inline std::string render_table(const BenchReport& r) {
    std::ostringstream os;
    os << "Results for dataset " << r.dataset << " (metrics in %)\n";
    os << pad("Model", 16) << pad("Training", 12) << pad("Attacked", 9);
    for (auto h : {"ACC", "PRC", "RCL", "F1S", "FPR"}) os << ' ' << pad(h, 6, true);
    os << '\n';
    for (const auto& row : r.rows) {
        os << pad(to_string(row.model), 16) << pad(training_label(row.training), 12) << pad(row.attacked ? "Yes" : "No", 9);
        const auto& m = row.metrics;
        for (double v : {m.acc, m.prc, m.rcl, m.f1s, m.fpr}) os << ' ' << pad(percent(v), 6, true);
        os << '\n';
    }
    return os.str();
}

inline std::string render_csv(const BenchReport& r) {
    std::ostringstream os;
    csv::write_record(os, {"dataset", "model", "training", "attacked", "acc", "prc", "rcl", "f1s", "fpr"});
    for (const auto& row : r.rows) {
        const auto& m = row.metrics;
        csv::write_record(os, {r.dataset, std::string(to_string(row.model)), std::string(training_label(row.training)),
                               row.attacked ? "Yes" : "No", csv::format_real(m.acc), csv::format_real(m.prc),
                               csv::format_real(m.rcl), csv::format_real(m.f1s), csv::format_real(m.fpr)});
    }
    return os.str();
}
} // namespace detail

// `table`: fixed-width Model/Training/Attacked/ACC/PRC/RCL/F1S/FPR with
// percentages to two decimals. `csv` and `json` keep full precision.
inline std::string render_report(const BenchReport& r, std::string_view format) {
    if (format == "table") return detail::render_table(r);
    if (format == "csv") return detail::render_csv(r);
    if (format == "json") return r.to_json().dump(2) + "\n";
    throw ConfigError("unknown report format '" + std::string(format) + "' (expected table, csv or json)");
}

// Rows (and dataset tag) back from the csv rendering.
inline BenchReport parse_report_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    csv::Reader reader(in);
    std::vector<std::string> f;
    if (!reader.next(f) || f.size() != 9 || f[0] != "dataset") throw DataError("report csv: bad header");
    BenchReport r;
    auto real = [](const std::string& s) {
        auto v = csv::parse_real(s);
        if (!v) throw DataError("report csv: bad number '" + s + "'");
        return *v;
    };
    while (reader.next(f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 9) throw DataError("report csv: expected 9 fields");
        r.dataset = f[0];
        r.rows.push_back({parse_model_kind(f[1]), parse_training_label(f[2]), parse_attacked(f[3]),
                          {real(f[4]), real(f[5]), real(f[6]), real(f[7]), real(f[8])}});
    }
    return r;
}

} // namespace nidsbench
