#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace nidsbench;
using namespace testing_support;

namespace {

BenchConfig small_config(std::uint64_t seed = 42) {
    BenchConfig c;
    c.dataset.tag = "synthetic";
    c.dataset.synthetic = SyntheticSpec{150, 150, 1.5};
    c.seed = seed;
    c.cv_folds = 3;
    RfParams rf;
    rf.n_estimators = 10;
    LevelBoostParams lb;
    lb.n_estimators = 15;
    LeafBoostParams goss;
    goss.n_estimators = 15;
    goss.min_samples_leaf = 5;
    EbmParams ebm;
    ebm.n_estimators = 10;
    c.grid_overrides[ModelKind::RF] = {ModelKind::RF, {rf}};
    c.grid_overrides[ModelKind::LEVEL_BOOST] = {ModelKind::LEVEL_BOOST, {lb}};
    c.grid_overrides[ModelKind::LEAF_BOOST_GOSS] = {ModelKind::LEAF_BOOST_GOSS, {goss}};
    c.grid_overrides[ModelKind::CYCLIC_EBM] = {ModelKind::CYCLIC_EBM, {ebm}};
    return c;
}

BenchReport one_row_report() {
    BenchReport r;
    r.dataset = "HIKARI";
    r.rows.push_back({ModelKind::LEVEL_BOOST, TrainingMode::adversarial, true, {0.9984, 0.9990, 0.9964, 0.9977, 0.0005}});
    return r;
}

} // namespace

TEST(Report, TableShowsPercentagesToTwoDecimals) {
    const auto t = render_report(one_row_report(), "table");
    EXPECT_NE(t.find("99.84  99.90  99.64  99.77   0.05"), std::string::npos) << t;
    EXPECT_NE(t.find("Adversarial"), std::string::npos);
    EXPECT_NE(t.find("Yes"), std::string::npos);
}

TEST(Report, EmptyReportIsHeaderOnly) {
    BenchReport r;
    r.dataset = "x";
    const auto t = render_report(r, "table");
    EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 2);
    const auto c = render_report(r, "csv");
    EXPECT_EQ(std::count(c.begin(), c.end(), '\n'), 1);
    EXPECT_TRUE(parse_report_csv(c).rows.empty());
}

TEST(Report, CsvAndJsonRoundTrip) {
    auto r = one_row_report();
    r.rows.push_back({ModelKind::RF, TrainingMode::regular, false, {0.1 + 0.2, 1.0 / 3, 0, 2.0 / 7, 1e-17}});
    const auto from_csv = parse_report_csv(render_report(r, "csv"));
    EXPECT_EQ(from_csv.rows, r.rows);
    EXPECT_EQ(from_csv.dataset, r.dataset);
    const auto from_json = BenchReport::from_json(nlohmann::json::parse(render_report(r, "json")));
    EXPECT_EQ(from_json.rows, r.rows);
    EXPECT_THROW(render_report(r, "xml"), ConfigError);
    EXPECT_THROW(parse_report_csv("a,b\n"), DataError);
}

TEST(Config, ParsesAndRejects) {
    const auto c = BenchConfig::from_json(nlohmann::json::parse(R"({
        "dataset": {"csv": "data/flows.csv", "profile": "hikari", "tag": "HIKARI"},
        "seed": 7, "models": ["CYCLIC_EBM", "RF"],
        "grids": {"RF": [{"n_estimators": 5, "max_depth": 4}]}})"),
                                          "/base");
    EXPECT_EQ(c.dataset.csv, std::filesystem::path("/base/data/flows.csv"));
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.models.size(), 2u);
    EXPECT_EQ(c.grid(ModelKind::RF).candidates.size(), 1u);
    EXPECT_EQ(c.grid(ModelKind::CYCLIC_EBM).candidates.size(), 3u);

    auto bad = [](const char* text) { return BenchConfig::from_json(nlohmann::json::parse(text)); };
    EXPECT_THROW(bad(R"({})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {}})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {"synthetic": {}}, "train_fraction": 1.0})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {"synthetic": {}}, "cv_folds": 1})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {"synthetic": {}}, "models": ["SVM"]})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {"synthetic": {}}, "seed": "x"})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {"synthetic": {}}, "perturb": {"displacement_hi": 2}})"), ConfigError);
    EXPECT_THROW(bad(R"({"dataset": {"synthetic": {}}, "grids": {"RF": []}})"), ConfigError);
    EXPECT_THROW(BenchConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST(Pipeline, SixteenRowsWithAttackInvariants) {
    const auto r = run_benchmark(small_config());
    ASSERT_EQ(r.rows.size(), 16u);
    ASSERT_EQ(r.traces.size(), 8u);
    std::size_t k = 0;
    for (auto kind : kAllModelKinds)
        for (auto mode : {TrainingMode::regular, TrainingMode::adversarial})
            for (bool attacked : {false, true}) {
                EXPECT_EQ(r.rows[k].model, kind);
                EXPECT_EQ(r.rows[k].training, mode);
                EXPECT_EQ(r.rows[k].attacked, attacked);
                ++k;
            }
    for (std::size_t i = 0; i < 16; i += 2) {
        const auto& clean = r.rows[i].metrics;
        const auto& hit = r.rows[i + 1].metrics;
        EXPECT_EQ(clean.fpr, hit.fpr) << i;
        EXPECT_LE(hit.rcl, clean.rcl) << i;
    }
}

TEST(Pipeline, ReportIsIdenticalAcrossThreadCounts) {
    auto c = small_config(3);
    c.out_dir = temp_dir("bench_t1");
    set_thread_count(1);
    run_benchmark(c);
    const auto one = slurp(c.out_dir / "report.json");
    c.out_dir = temp_dir("bench_t4");
    set_thread_count(4);
    run_benchmark(c);
    set_thread_count(0);
    EXPECT_EQ(slurp(c.out_dir / "report.json"), one);
    for (const auto& name : {artifacts::train_csv(), artifacts::holdout_csv(), artifacts::patterns_json(),
                             artifacts::model_json(ModelKind::CYCLIC_EBM, TrainingMode::adversarial),
                             artifacts::attacked_csv(ModelKind::RF, TrainingMode::regular)})
        EXPECT_TRUE(std::filesystem::exists(c.out_dir / name)) << name;
}

TEST(Pipeline, ModelOrderDoesNotMatter) {
    auto c = small_config(5);
    c.models = {ModelKind::CYCLIC_EBM, ModelKind::RF};
    const auto a = run_benchmark(c);
    c.models = {ModelKind::RF, ModelKind::CYCLIC_EBM, ModelKind::RF};
    const auto b = run_benchmark(c);
    ASSERT_EQ(a.rows.size(), 8u);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.rows.front().model, ModelKind::RF);
}

TEST(Pipeline, PatternsRoundTrip) {
    const auto p = learn_patterns(synthetic(50, 2.0, 1));
    EXPECT_EQ(patterns_from_json(nlohmann::json::parse(to_json(p).dump())), p);
    EXPECT_THROW(patterns_from_json(nlohmann::json::parse(R"({"benign": {}})")), SchemaError);
}

TEST(Pipeline, ErrorsNameTheStage) {
    auto c = small_config();
    const auto dir = temp_dir("bench_errors");
    const auto ds = synthetic(20, 1.0, 1);
    std::vector<std::size_t> benign(20);
    std::iota(benign.begin(), benign.end(), 0);
    write_csv(dir / "benign.csv", ds.subset(benign));
    c.dataset.synthetic.reset();
    c.dataset.csv = dir / "benign.csv";
    try {
        run_benchmark(c);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("[split]", 0), 0u) << e.what();
    }
    c.dataset.csv = dir / "missing.csv";
    try {
        run_benchmark(c);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("[ingest]", 0), 0u) << e.what();
    }
}
