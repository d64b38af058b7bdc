#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "schema.hpp"

namespace nidsbench {

inline constexpr std::uint8_t kBenign = 0;
inline constexpr std::uint8_t kMalicious = 1;

// ============================================================================
// FlowDataset
// ============================================================================

// Immutable matrix of flows in canonical schema order with binary labels
// (0 = benign, 1 = malicious). Every value is finite and non-negative.
class FlowDataset {
public:
    FlowDataset() = default;

    FlowDataset(std::vector<FeatureRow> rows, std::vector<std::uint8_t> labels, std::string provenance = {})
        : rows_(std::move(rows)), labels_(std::move(labels)), provenance_(std::move(provenance)) {
        if (rows_.size() != labels_.size())
            throw DataError("dataset: " + std::to_string(rows_.size()) + " rows but " + std::to_string(labels_.size()) +
                            " labels");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (labels_[i] > 1) throw DataError("dataset: non-binary label at row " + std::to_string(i));
            for (double v : rows_[i])
                if (!std::isfinite(v) || v < 0.0)
                    throw DataError("dataset: non-finite or negative value at row " + std::to_string(i));
        }
    }

    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const std::vector<FeatureRow>& rows() const { return rows_; }
    const std::vector<std::uint8_t>& labels() const { return labels_; }
    const FeatureRow& row(std::size_t i) const { return rows_[i]; }
    std::uint8_t label(std::size_t i) const { return labels_[i]; }
    const std::string& provenance() const { return provenance_; }
    static const FeatureSchema& schema() { return FeatureSchema::canonical(); }

    std::size_t count(std::uint8_t label) const {
        return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
    }

    FlowDataset subset(std::span<const std::size_t> indices, std::string provenance = {}) const {
        std::vector<FeatureRow> r;
        std::vector<std::uint8_t> l;
        r.reserve(indices.size());
        l.reserve(indices.size());
        for (auto i : indices) {
            r.push_back(rows_.at(i));
            l.push_back(labels_.at(i));
        }
        return FlowDataset(std::move(r), std::move(l), provenance.empty() ? provenance_ : std::move(provenance));
    }

    // Throws unless both classes are present.
    void require_both_classes(std::string_view what) const {
        if (count(kBenign) == 0 || count(kMalicious) == 0)
            throw DataError(std::string(what) + ": both benign and malicious samples are required");
    }

    friend bool operator==(const FlowDataset& a, const FlowDataset& b) {
        return a.rows_ == b.rows_ && a.labels_ == b.labels_;
    }

private:
    std::vector<FeatureRow> rows_;
    std::vector<std::uint8_t> labels_;
    std::string provenance_;
};

// ============================================================================
// Family-consistency constraints
// ============================================================================

enum class ViolationKind { min_gt_mean, mean_gt_max, min_gt_max, std_negative, std_gt_range, total_lt_max };

inline std::string_view to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::min_gt_mean: return "min > mean";
    case ViolationKind::mean_gt_max: return "mean > max";
    case ViolationKind::min_gt_max: return "min > max";
    case ViolationKind::std_negative: return "std < 0";
    case ViolationKind::std_gt_range: return "std > max - min";
    case ViolationKind::total_lt_max: return "total < max";
    }
    return "?";
}

struct FamilyViolation {
    std::size_t row;
    std::size_t family;
    ViolationKind kind;
};

// Appends the violations of one feature row (row index `row_index`).
inline void check_family_constraints(const FeatureRow& v, std::size_t row_index, std::vector<FamilyViolation>& out) {
    const auto& schema = FeatureSchema::canonical();
    for (std::size_t f = 0; f < schema.families().size(); ++f) {
        if (schema.families()[f].stat_kinds.size() < 2) continue;
        const auto c = family_columns(f);
        auto add = [&](ViolationKind k) { out.push_back({row_index, f, k}); };
        if (c.min && c.mean && v[*c.min] > v[*c.mean]) add(ViolationKind::min_gt_mean);
        if (c.mean && c.max && v[*c.mean] > v[*c.max]) add(ViolationKind::mean_gt_max);
        if (!c.mean && c.min && c.max && v[*c.min] > v[*c.max]) add(ViolationKind::min_gt_max);
        if (c.std) {
            if (v[*c.std] < 0.0) add(ViolationKind::std_negative);
            // an inverted range is already reported by the ordering checks
            if (c.min && c.max && v[*c.min] <= v[*c.max] && v[*c.std] > v[*c.max] - v[*c.min])
                add(ViolationKind::std_gt_range);
        }
        if (c.total && c.max && v[*c.total] < v[*c.max]) add(ViolationKind::total_lt_max);
    }
}

inline std::vector<FamilyViolation> check_family_constraints(const FeatureRow& v) {
    std::vector<FamilyViolation> out;
    check_family_constraints(v, 0, out);
    return out;
}

// Rows where min > mean, mean > max, std < 0, std > (max - min) or total < max
// within a family of at least two statistics.
inline std::vector<FamilyViolation> validate_family_constraints(const FlowDataset& ds) {
    std::vector<FamilyViolation> out;
    for (std::size_t i = 0; i < ds.size(); ++i) check_family_constraints(ds.row(i), i, out);
    return out;
}

// ============================================================================
// Column profiles
// ============================================================================

// Maps a raw CSV export onto the canonical schema. Source labels are binarized
// through `label_map`; the key "*" (if present) catches every other value.
struct ColumnProfile {
    std::string profile_name;
    std::string label_column;
    std::map<std::string, std::uint8_t> label_map;
    std::map<std::string, std::string> feature_map;  // canonical name -> source column

    void validate() const {
        const auto& schema = FeatureSchema::canonical();
        std::set<std::string> sources;
        for (const auto& f : schema.features()) {
            auto it = feature_map.find(f.name);
            if (it == feature_map.end())
                throw DataError("profile '" + profile_name + "': feature '" + f.name + "' is not mapped");
            if (!sources.insert(std::string(csv::trim(it->second))).second)
                throw DataError("profile '" + profile_name + "': source column '" + it->second + "' mapped twice");
        }
        for (const auto& [name, _] : feature_map)
            if (!schema.index_of(name)) throw DataError("profile '" + profile_name + "': unknown feature '" + name + "'");
        if (label_column.empty()) throw DataError("profile '" + profile_name + "': empty label_column");
        for (const auto& [_, v] : label_map)
            if (v > 1) throw DataError("profile '" + profile_name + "': label_map values must be 0 or 1");
    }

    std::optional<std::uint8_t> map_label(std::string_view raw) const {
        const std::string key(csv::trim(raw));
        if (auto it = label_map.find(key); it != label_map.end()) return it->second;
        if (auto it = label_map.find("*"); it != label_map.end()) return it->second;
        return std::nullopt;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["profile_name"] = profile_name;
        j["label_column"] = label_column;
        j["label_map"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : label_map) j["label_map"][k] = v;
        j["feature_map"] = nlohmann::ordered_json::object();
        for (const auto& f : FeatureSchema::canonical().features())
            if (auto it = feature_map.find(f.name); it != feature_map.end()) j["feature_map"][f.name] = it->second;
        return j;
    }

    static ColumnProfile from_json(const nlohmann::json& j) {
        ColumnProfile p;
        try {
            p.profile_name = j.at("profile_name").get<std::string>();
            p.label_column = j.at("label_column").get<std::string>();
            for (const auto& [k, v] : j.at("label_map").items()) p.label_map[k] = v.get<std::uint8_t>();
            for (const auto& [k, v] : j.at("feature_map").items()) p.feature_map[k] = v.get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("profile: ") + e.what());
        }
        p.validate();
        return p;
    }
};

// Identity profile for the toolkit's own CSV output.
inline ColumnProfile canonical_profile() {
    ColumnProfile p{"canonical", "label", {{"0", kBenign}, {"1", kMalicious}}, {}};
    for (const auto& f : FeatureSchema::canonical().features()) p.feature_map[f.name] = f.name;
    return p;
}

namespace detail {
// CICFlowMeter-style headers, as in the CICIDS2017 MachineLearningCSV export.
inline ColumnProfile cicflowmeter_profile(std::string name, std::string fwd_bulk, std::string bwd_bulk) {
    ColumnProfile p{std::move(name), "Label", {{"BENIGN", kBenign}, {"*", kMalicious}}, {}};
    p.feature_map = {
        {"flow_iat_mean", "Flow IAT Mean"}, {"flow_iat_std", "Flow IAT Std"},
        {"flow_iat_max", "Flow IAT Max"},   {"flow_iat_min", "Flow IAT Min"},
        {"fwd_iat_total", "Fwd IAT Total"}, {"fwd_iat_mean", "Fwd IAT Mean"},
        {"fwd_iat_std", "Fwd IAT Std"},     {"fwd_iat_max", "Fwd IAT Max"},
        {"fwd_iat_min", "Fwd IAT Min"},     {"bwd_iat_total", "Bwd IAT Total"},
        {"bwd_iat_mean", "Bwd IAT Mean"},   {"bwd_iat_std", "Bwd IAT Std"},
        {"bwd_iat_max", "Bwd IAT Max"},     {"bwd_iat_min", "Bwd IAT Min"},
        {"fwd_bulk_rate_mean", fwd_bulk},   {"bwd_bulk_rate_mean", bwd_bulk},
        {"active_mean", "Active Mean"},     {"active_std", "Active Std"},
        {"active_max", "Active Max"},       {"active_min", "Active Min"},
        {"idle_mean", "Idle Mean"},         {"idle_std", "Idle Std"},
        {"idle_max", "Idle Max"},           {"idle_min", "Idle Min"},
    };
    return p;
}
} // namespace detail

// Built-in defaults; the same documents ship under profiles/ for editing.
// Column names of the NewCICIDS and HIKARI releases are best-effort.
inline std::optional<ColumnProfile> builtin_profile(std::string_view name) {
    if (name == "canonical") return canonical_profile();
    if (name == "cicids2017") return detail::cicflowmeter_profile("cicids2017", "Fwd Avg Bulk Rate", "Bwd Avg Bulk Rate");
    if (name == "newcicids") return detail::cicflowmeter_profile("newcicids", "Fwd Bulk Rate Avg", "Bwd Bulk Rate Avg");
    if (name == "hikari") {
        ColumnProfile p{"hikari", "Label", {{"0", kBenign}, {"1", kMalicious}}, {}};
        const std::pair<const char*, const char*> fams[] = {{"flow_iat", "flow_iat"}, {"fwd_iat", "fwd_iat"},
                                                            {"bwd_iat", "bwd_iat"},   {"active", "active"},
                                                            {"idle", "idle"}};
        const std::pair<const char*, const char*> stats[] = {
            {"total", "tot"}, {"mean", "avg"}, {"std", "std"}, {"max", "max"}, {"min", "min"}};
        const auto& schema = FeatureSchema::canonical();
        for (auto [key, src] : fams)
            for (auto [stat, suffix] : stats) {
                const std::string canon = std::string(key) + "_" + stat;
                if (schema.index_of(canon)) p.feature_map[canon] = std::string(src) + "." + suffix;
            }
        p.feature_map["fwd_bulk_rate_mean"] = "fwd_bulk_rate";
        p.feature_map["bwd_bulk_rate_mean"] = "bwd_bulk_rate";
        return p;
    }
    return std::nullopt;
}

// `spec` is either a path to a profile JSON file or a built-in profile name.
inline ColumnProfile resolve_profile(const std::string& spec) {
    if (std::filesystem::is_regular_file(spec)) {
        std::ifstream in(spec);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("profile " + spec + ": " + e.what());
        }
        return ColumnProfile::from_json(j);
    }
    if (auto p = builtin_profile(spec)) return *p;
    throw DataError("unknown column profile '" + spec + "' (not a file or built-in name)");
}

// ============================================================================
// CSV ingestion and output
// ============================================================================

struct IngestResult {
    FlowDataset dataset;
    std::size_t rows_read = 0;
    std::size_t dropped_rows = 0;        // missing, non-finite or negative mapped values
    std::size_t constraint_warnings = 0;  // rows with family-consistency violations (kept)
    std::vector<std::string> warnings;
};

inline IngestResult ingest_csv(std::istream& in, const ColumnProfile& profile, std::string provenance) {
    profile.validate();
    const auto& schema = FeatureSchema::canonical();
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw DataError(provenance + ": empty file (no header row)");

    std::map<std::string, std::size_t, std::less<>> header;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        std::string name(csv::trim(fields[i]));
        if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
        header.emplace(std::move(name), i);
    }
    auto column = [&](const std::string& name) {
        auto it = header.find(csv::trim(name));
        if (it == header.end()) throw DataError(provenance + ": missing mapped column '" + name + "'");
        return it->second;
    };
    std::array<std::size_t, kFeatureCount> cols{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) cols[f] = column(profile.feature_map.at(schema.feature(f).name));
    const std::size_t label_col = column(profile.label_column);

    IngestResult result;
    std::vector<FeatureRow> rows;
    std::vector<std::uint8_t> labels;
    std::vector<FamilyViolation> violations;
    while (reader.next(fields)) {
        if (fields.size() == 1 && csv::trim(fields[0]).empty()) continue;  // blank line
        ++result.rows_read;
        FeatureRow row{};
        bool usable = true;
        for (std::size_t f = 0; f < kFeatureCount && usable; ++f) {
            if (cols[f] >= fields.size()) {
                usable = false;
                break;
            }
            const auto v = csv::parse_real(fields[cols[f]]);
            if (!v || !std::isfinite(*v) || *v < 0.0)
                usable = false;
            else
                row[f] = *v;
        }
        if (!usable || label_col >= fields.size() || csv::trim(fields[label_col]).empty()) {
            ++result.dropped_rows;
            continue;
        }
        const auto label = profile.map_label(fields[label_col]);
        if (!label)
            throw DataError(provenance + ": unmappable label value '" + std::string(csv::trim(fields[label_col])) +
                            "' at record " + std::to_string(reader.records_read()));
        violations.clear();
        check_family_constraints(row, rows.size(), violations);
        if (!violations.empty()) ++result.constraint_warnings;
        rows.push_back(row);
        labels.push_back(*label);
    }
    if (rows.empty()) throw DataError(provenance + ": zero usable rows");
    if (result.dropped_rows)
        result.warnings.push_back(std::to_string(result.dropped_rows) +
                                  " row(s) dropped for missing, non-finite or negative values");
    if (result.constraint_warnings)
        result.warnings.push_back(std::to_string(result.constraint_warnings) +
                                  " row(s) violate family-consistency constraints (kept)");
    result.dataset = FlowDataset(std::move(rows), std::move(labels), std::move(provenance));
    return result;
}

inline IngestResult ingest_csv(const std::filesystem::path& path, const ColumnProfile& profile) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return ingest_csv(in, profile, path.filename().string());
}

// Canonical 24-column header plus `label`.
inline void write_csv(std::ostream& out, const FlowDataset& ds) {
    auto header = FeatureSchema::canonical().column_names();
    header.push_back("label");
    csv::write_record(out, header);
    std::string line;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        line.clear();
        for (double v : ds.row(i)) {
            line += csv::format_real(v);
            line += ',';
        }
        line += ds.label(i) ? '1' : '0';
        line += '\n';
        out << line;
    }
}

inline void write_csv(const std::filesystem::path& path, const FlowDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(out, ds);
}

// Reads a dataset previously written by write_csv.
inline FlowDataset read_canonical_csv(const std::filesystem::path& path) {
    return ingest_csv(path, canonical_profile()).dataset;
}

// ============================================================================
// Splits and folds
// ============================================================================

struct SplitSpec {
    double train_fraction = 0.70;
    std::uint64_t seed = 0;
};

struct Split {
    FlowDataset train;
    FlowDataset holdout;
    std::vector<std::size_t> train_index;
    std::vector<std::size_t> holdout_index;
};

// round(x) with exact halves resolved downward.
inline std::size_t round_half_down(double x) {
    const double fl = std::floor(x);
    return static_cast<std::size_t>(x - fl > 0.5 + 1e-9 ? fl + 1.0 : fl);
}

namespace detail {
inline std::array<std::vector<std::size_t>, 2> indices_by_class(const FlowDataset& ds) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.label(i)].push_back(i);
    return by_class;
}
} // namespace detail

// Per class, round(fraction * count) samples (ties downward, kept within
// [1, count - 1]) go to train. Both sides keep the original row order.
inline Split stratified_split(const FlowDataset& ds, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("stratified_split: train_fraction must lie in (0, 1)");
    auto by_class = detail::indices_by_class(ds);
    Split s;
    for (std::uint8_t c = 0; c < 2; ++c) {
        auto& idx = by_class[c];
        if (idx.size() < 2)
            throw DataError("stratified_split: class " + std::to_string(c) + " has fewer than 2 samples");
        Rng rng = make_stream(spec.seed, {tag("split"), c});
        rng.shuffle(std::span(idx));
        const std::size_t n_train =
            std::clamp<std::size_t>(round_half_down(spec.train_fraction * static_cast<double>(idx.size())), 1,
                                    idx.size() - 1);
        s.train_index.insert(s.train_index.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.holdout_index.insert(s.holdout_index.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    }
    std::sort(s.train_index.begin(), s.train_index.end());
    std::sort(s.holdout_index.begin(), s.holdout_index.end());
    s.train = ds.subset(s.train_index, ds.provenance() + ":train");
    s.holdout = ds.subset(s.holdout_index, ds.provenance() + ":holdout");
    return s;
}

struct Fold {
    std::vector<std::size_t> train_index;
    std::vector<std::size_t> validation_index;
    FlowDataset train;
    FlowDataset validation;
};

// Round-robin assignment of each shuffled class over the k folds; the round
// robin continues across classes so the larger folds are not always the same.
inline std::vector<Fold> stratified_kfold(const FlowDataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: k must be at least 2");
    auto by_class = detail::indices_by_class(ds);
    std::vector<std::vector<std::size_t>> validation(k);
    std::size_t cursor = 0;
    for (std::uint8_t c = 0; c < 2; ++c) {
        auto& idx = by_class[c];
        if (idx.size() < k)
            throw DataError("stratified_kfold: class " + std::to_string(c) + " has fewer than " + std::to_string(k) +
                            " samples");
        Rng rng = make_stream(seed, {tag("kfold"), c});
        rng.shuffle(std::span(idx));
        for (auto i : idx) validation[cursor++ % k].push_back(i);
    }
    std::vector<Fold> folds(k);
    std::vector<std::uint8_t> in_fold(ds.size());
    for (std::size_t f = 0; f < k; ++f) {
        auto& v = validation[f];
        std::sort(v.begin(), v.end());
        std::fill(in_fold.begin(), in_fold.end(), 0);
        for (auto i : v) in_fold[i] = 1;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (!in_fold[i]) folds[f].train_index.push_back(i);
        folds[f].validation_index = std::move(v);
        folds[f].train = ds.subset(folds[f].train_index);
        folds[f].validation = ds.subset(folds[f].validation_index);
    }
    return folds;
}

// ============================================================================
// Synthetic flows
// ============================================================================

namespace detail {
struct Stats {
    double total = 0, mean = 0, std = 0, max = 0, min = 0;
};

// Sample statistics as CICFlowMeter reports them (n - 1 denominator).
inline Stats summarize(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    for (double x : v) s.total += x;
    s.mean = s.total / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    // Rounding can push the mean a hair outside [min, max].
    s.mean = std::clamp(s.mean, s.min, s.max);
    s.std = std::min(s.std, s.max - s.min);
    s.total = std::max(s.total, s.max);
    return s;
}

inline void put(FeatureRow& row, std::size_t family, const Stats& s) {
    const auto c = family_columns(family);
    if (c.total) row[*c.total] = s.total;
    if (c.mean) row[*c.mean] = s.mean;
    if (c.std) row[*c.std] = s.std;
    if (c.max) row[*c.max] = s.max;
    if (c.min) row[*c.min] = s.min;
}

inline std::vector<double> arrivals(Rng& rng, std::size_t n, double scale, double start) {
    std::vector<double> t(n);
    double now = start;
    for (auto& x : t) {
        x = now;
        now += scale * rng.exponential();
    }
    return t;
}

inline std::vector<double> gaps(const std::vector<double>& t) {
    std::vector<double> g;
    for (std::size_t i = 1; i < t.size(); ++i) g.push_back(t[i] - t[i - 1]);
    return g;
}
} // namespace detail

// Desk-scale flows built from simulated packet arrivals, so every family is
// consistent by construction. Each direction draws a log10 IAT scale from
// N(class centre, 1); the malicious centre is displaced by `separation`
// within-class standard deviations. Bulk-rate, active and idle families share
// one distribution across classes. Benign rows come first.
inline FlowDataset synthesize_dataset(std::size_t n_benign, std::size_t n_malicious, double separation,
                                      std::uint64_t seed) {
    if (n_benign < 1 || n_malicious < 1) throw ConfigError("synthesize_dataset: both class counts must be >= 1");
    if (!(separation >= 0.0) || !std::isfinite(separation))
        throw ConfigError("synthesize_dataset: separation must be finite and >= 0");
    const std::size_t n = n_benign + n_malicious;
    std::vector<FeatureRow> rows(n);
    std::vector<std::uint8_t> labels(n);
    constexpr double base_log10_scale = -2.0;  // 10 ms typical benign IAT
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t label = i < n_benign ? kBenign : kMalicious;
        Rng rng = make_stream(seed, {tag("synth"), i});
        const double centre = base_log10_scale + (label == kMalicious ? separation : 0.0);
        const double fwd_scale = std::pow(10.0, rng.normal(centre, 1.0));
        const double bwd_scale = std::pow(10.0, rng.normal(centre, 1.0));
        const std::size_t n_fwd = 2 + rng.below(30);
        const std::size_t n_bwd = 2 + rng.below(30);
        const auto fwd = detail::arrivals(rng, n_fwd, fwd_scale, 0.0);
        const auto bwd = detail::arrivals(rng, n_bwd, bwd_scale, bwd_scale * rng.uniform());
        std::vector<double> all(fwd);
        all.insert(all.end(), bwd.begin(), bwd.end());
        std::sort(all.begin(), all.end());

        FeatureRow row{};
        detail::put(row, 0, detail::summarize(detail::gaps(all)));
        detail::put(row, 1, detail::summarize(detail::gaps(fwd)));
        detail::put(row, 2, detail::summarize(detail::gaps(bwd)));
        row[*family_columns(3).mean] = std::pow(10.0, rng.normal(4.0, 0.8));
        row[*family_columns(4).mean] = std::pow(10.0, rng.normal(4.5, 0.8));
        const std::size_t periods = 1 + rng.below(5);
        std::vector<double> active(periods), idle(periods);
        const double active_scale = std::pow(10.0, rng.normal(-1.0, 0.5));
        const double idle_scale = std::pow(10.0, rng.normal(0.5, 0.5));
        for (std::size_t p = 0; p < periods; ++p) {
            active[p] = active_scale * rng.exponential();
            idle[p] = idle_scale * rng.exponential();
        }
        detail::put(row, 5, detail::summarize(active));
        detail::put(row, 6, detail::summarize(idle));
        rows[i] = row;
        labels[i] = label;
    }
    return FlowDataset(std::move(rows), std::move(labels), "synthetic(seed=" + std::to_string(seed) + ")");
}

} // namespace nidsbench
