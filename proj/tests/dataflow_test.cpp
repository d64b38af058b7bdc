#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "support.hpp"

using namespace nidsbench;
using namespace testing_support;

namespace {

FeatureRow consistent_row() {
    FeatureRow r{};
    const auto& s = FeatureSchema::canonical();
    for (std::size_t f = 0; f < s.families().size(); ++f) {
        const auto c = family_columns(f);
        if (c.min) r[*c.min] = 1;
        if (c.mean) r[*c.mean] = 2;
        if (c.max) r[*c.max] = 3;
        if (c.std) r[*c.std] = 1;
        if (c.total) r[*c.total] = 5;
    }
    return r;
}

std::string canonical_header() {
    std::string h;
    for (const auto& n : FeatureSchema::canonical().column_names()) h += n + ",";
    return h + "label\n";
}

std::string canonical_line(const FeatureRow& r, int label, std::size_t blank_column = 99) {
    std::string line;
    for (std::size_t f = 0; f < kFeatureCount; ++f) line += (f == blank_column ? "" : csv::format_real(r[f])) + ",";
    return line + std::to_string(label) + "\n";
}

} // namespace

TEST(FlowDataset, RejectsBadValuesAndLabels) {
    FeatureRow ok{};
    EXPECT_NO_THROW(FlowDataset({ok}, {1}));
    FeatureRow neg = ok;
    neg[4] = -1;
    EXPECT_THROW(FlowDataset({neg}, {0}), DataError);
    FeatureRow inf = ok;
    inf[0] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(FlowDataset({inf}, {0}), DataError);
    EXPECT_THROW(FlowDataset({ok}, {2}), DataError);
    EXPECT_THROW(FlowDataset({ok, ok}, {0}), DataError);
}

TEST(FamilyConstraints, ConsistentFamilyHasNoViolations) {
    EXPECT_TRUE(check_family_constraints(consistent_row()).empty());
}

TEST(FamilyConstraints, ReversedOrderGivesTwoViolations) {
    FeatureRow r = consistent_row();
    const auto c = family_columns(0);
    r[*c.min] = 3;
    r[*c.mean] = 2;
    r[*c.max] = 1;
    r[*c.std] = 0;
    const auto v = check_family_constraints(r);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].kind, ViolationKind::min_gt_mean);
    EXPECT_EQ(v[1].kind, ViolationKind::mean_gt_max);
    EXPECT_EQ(v[0].family, 0u);
}

TEST(FamilyConstraints, FuzzAgainstDirectPredicates) {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> d(0, 4);
    for (int trial = 0; trial < 20000; ++trial) {
        FeatureRow r;
        for (auto& v : r) v = d(gen);
        const auto got = check_family_constraints(r);
        std::size_t expect = 0;
        const auto& s = FeatureSchema::canonical();
        for (std::size_t f = 0; f < s.families().size(); ++f) {
            const auto c = family_columns(f);
            if (!c.std) continue;  // single-statistic families have no constraints
            const double mn = r[*c.min], me = r[*c.mean], mx = r[*c.max], sd = r[*c.std];
            expect += (mn > me) + (me > mx) + (mn <= mx && sd > mx - mn);
            if (c.total) expect += r[*c.total] < mx;
        }
        ASSERT_EQ(got.size(), expect);
    }
}

TEST(Synthesize, SatisfiesConstraintsAndIsDeterministic) {
    const auto a = synthesize_dataset(100, 100, 6.0, 3);
    const auto b = synthesize_dataset(100, 100, 6.0, 3);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.count(kBenign), 100u);
    EXPECT_EQ(a.count(kMalicious), 100u);
    EXPECT_TRUE(validate_family_constraints(a).empty());
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        EXPECT_TRUE(validate_family_constraints(synthesize_dataset(200, 200, 1.0, seed)).empty());
    EXPECT_FALSE(a == synthesize_dataset(100, 100, 6.0, 4));
}

TEST(Synthesize, ZeroSeparationIsChanceLevel) {
    const auto ds = synthesize_dataset(100, 100, 0.0, 17);
    const auto cv = cross_validate(ds, default_hyperparams(ModelKind::LEVEL_BOOST), 5, 1);
    EXPECT_NEAR(cv.mean_f1, 0.5, 0.1);
}

TEST(Ingest, DropsNonFiniteRows) {
    const FeatureRow r = consistent_row();
    std::string text = canonical_header() + canonical_line(r, 0) + canonical_line(r, 1);
    std::string bad = canonical_line(r, 1);
    bad.replace(0, bad.find(','), "inf");
    text += bad;
    std::istringstream in(text);
    const auto res = ingest_csv(in, canonical_profile(), "t");
    EXPECT_EQ(res.rows_read, 3u);
    EXPECT_EQ(res.dataset.size(), 2u);
    EXPECT_EQ(res.dropped_rows, 1u);
}

TEST(Ingest, DropsNegativeAndEmptyCells) {
    const FeatureRow r = consistent_row();
    std::string neg = canonical_line(r, 1);
    neg.replace(0, neg.find(','), "-3");
    std::istringstream in(canonical_header() + canonical_line(r, 0) + neg + canonical_line(r, 1, 7) +
                          canonical_line(r, 1));
    const auto res = ingest_csv(in, canonical_profile(), "t");
    EXPECT_EQ(res.dataset.size(), 2u);
    EXPECT_EQ(res.dropped_rows, 2u);
    EXPECT_EQ(res.warnings.size(), 1u);
}

TEST(Ingest, OnlyRowEmptyIsAnError) {
    std::istringstream in(canonical_header() + canonical_line(consistent_row(), 0, 3));
    try {
        ingest_csv(in, canonical_profile(), "t");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("zero usable rows"), std::string::npos);
    }
}

TEST(Ingest, MissingColumnAndUnknownLabel) {
    std::string header = canonical_header();
    header.replace(0, std::string("flow_iat_mean").size(), "renamed");
    std::istringstream a(header + canonical_line(consistent_row(), 0));
    EXPECT_THROW(ingest_csv(a, canonical_profile(), "t"), DataError);
    std::istringstream b(canonical_header() + canonical_line(consistent_row(), 7));
    EXPECT_THROW(ingest_csv(b, canonical_profile(), "t"), DataError);
}

TEST(Ingest, ConstraintViolationsAreKeptWithWarning) {
    FeatureRow r = consistent_row();
    r[*family_columns(1).total] = 0.5;
    std::istringstream in(canonical_header() + canonical_line(r, 1) + canonical_line(consistent_row(), 0));
    const auto res = ingest_csv(in, canonical_profile(), "t");
    EXPECT_EQ(res.dataset.size(), 2u);
    EXPECT_EQ(res.constraint_warnings, 1u);
}

TEST(Ingest, CicflowmeterProfileBinarizesLabels) {
    const auto p = *builtin_profile("cicids2017");
    const auto& s = FeatureSchema::canonical();
    std::string header = " Destination Port";
    for (const auto& f : s.features()) header += ", " + p.feature_map.at(f.name);
    header += ", Label\n";
    const FeatureRow r = consistent_row();
    std::string body;
    for (const char* label : {"BENIGN", "DDoS", "PortScan", "BENIGN"}) {
        body += "80";
        for (double v : r) body += "," + csv::format_real(v);
        body += std::string(",") + label + "\n";
    }
    std::istringstream in(header + body);
    const auto res = ingest_csv(in, p, "cic");
    EXPECT_EQ(res.dataset.labels(), (std::vector<std::uint8_t>{0, 1, 1, 0}));
}

TEST(Ingest, BuiltinProfilesAreValid) {
    for (const char* name : {"canonical", "cicids2017", "newcicids", "hikari"}) {
        const auto p = builtin_profile(name);
        ASSERT_TRUE(p.has_value()) << name;
        EXPECT_NO_THROW(p->validate()) << name;
        EXPECT_EQ(ColumnProfile::from_json(p->to_json()).feature_map, p->feature_map);
    }
    EXPECT_EQ(builtin_profile("hikari")->feature_map.at("flow_iat_mean"), "flow_iat.avg");
    EXPECT_THROW(resolve_profile("no-such-profile"), DataError);
}

TEST(Ingest, ProfileRejectsDuplicateSources) {
    auto p = canonical_profile();
    p.feature_map["idle_min"] = "idle_max";
    EXPECT_THROW(p.validate(), DataError);
}

TEST(CanonicalCsv, WriteReadWriteIsIdentical) {
    const auto ds = synthesize_dataset(40, 30, 2.0, 8);
    std::ostringstream first;
    write_csv(first, ds);
    std::istringstream in(first.str());
    const auto back = ingest_csv(in, canonical_profile(), "rt").dataset;
    EXPECT_EQ(back, ds);
    std::ostringstream second;
    write_csv(second, back);
    EXPECT_EQ(first.str(), second.str());
}

TEST(Split, CountsPerClass) {
    std::vector<FeatureRow> rows(100, FeatureRow{});
    std::vector<std::uint8_t> labels(100, 0);
    std::fill(labels.begin() + 80, labels.end(), 1);
    const FlowDataset ds(rows, labels);
    const auto s = stratified_split(ds, {0.7, 1});
    EXPECT_EQ(s.train.size(), 70u);
    EXPECT_EQ(s.train.count(0), 56u);
    EXPECT_EQ(s.train.count(1), 14u);
    EXPECT_EQ(s.holdout.count(0), 24u);
    EXPECT_EQ(s.holdout.count(1), 6u);
}

TEST(Split, DeterministicDisjointCover) {
    const auto ds = synthesize_dataset(57, 31, 1.0, 2);
    const auto a = stratified_split(ds, {0.7, 11});
    const auto b = stratified_split(ds, {0.7, 11});
    EXPECT_EQ(a.train_index, b.train_index);
    std::vector<std::size_t> all = a.train_index;
    all.insert(all.end(), a.holdout_index.begin(), a.holdout_index.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
    EXPECT_NE(stratified_split(ds, {0.7, 12}).train_index, a.train_index);
}

TEST(Split, HalfOfTwoAndTwo) {
    const FlowDataset ds(std::vector<FeatureRow>(4), {0, 0, 1, 1});
    const auto s = stratified_split(ds, {0.5, 3});
    EXPECT_EQ(s.train.count(0), 1u);
    EXPECT_EQ(s.train.count(1), 1u);
    EXPECT_EQ(s.holdout.count(0), 1u);
    EXPECT_EQ(s.holdout.count(1), 1u);
}

TEST(Split, NeedsTwoPerClass) {
    const FlowDataset ds(std::vector<FeatureRow>(3), {0, 0, 1});
    EXPECT_THROW(stratified_split(ds, {0.7, 1}), DataError);
    EXPECT_THROW(stratified_split(ds, {1.0, 1}), ConfigError);
}

TEST(KFold, FiveByFive) {
    const FlowDataset ds(std::vector<FeatureRow>(10), {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
    const auto folds = stratified_kfold(ds, 5, 4);
    for (const auto& f : folds) {
        EXPECT_EQ(f.validation.count(0), 1u);
        EXPECT_EQ(f.validation.count(1), 1u);
        EXPECT_EQ(f.train.size(), 8u);
    }
}

TEST(KFold, PartitionAndBalance) {
    std::vector<std::uint8_t> labels(40, 0);
    std::fill(labels.begin() + 27, labels.end(), 1);  // 13 malicious
    const FlowDataset ds(std::vector<FeatureRow>(40), labels);
    const auto folds = stratified_kfold(ds, 5, 9);
    std::vector<std::size_t> all, mal;
    for (const auto& f : folds) {
        all.insert(all.end(), f.validation_index.begin(), f.validation_index.end());
        mal.push_back(f.validation.count(1));
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
    EXPECT_EQ(all.size(), 40u);
    std::sort(mal.begin(), mal.end());
    EXPECT_EQ(mal, (std::vector<std::size_t>{2, 2, 3, 3, 3}));
    EXPECT_EQ(stratified_kfold(ds, 5, 9)[2].validation_index, folds[2].validation_index);
}
