#include <gtest/gtest.h>

#include <nidsbench/bench/cli.hpp>

#include "support.hpp"

using namespace nidsbench;
using namespace testing_support;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "nidsbench");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Small grids so a full bench stays quick.
void write_quick_config(const std::filesystem::path& path, const std::string& csv) {
    nlohmann::json j = {
        {"dataset", {{"csv", csv}, {"tag", "quick"}}},
        {"cv_folds", 3},
        {"grids",
         {{"RF", {{{"n_estimators", 8}, {"max_depth", 6}}}},
          {"LEVEL_BOOST", {{{"n_estimators", 10}, {"max_depth", 3}}}},
          {"LEAF_BOOST_GOSS", {{{"n_estimators", 10}, {"min_samples_leaf", 5}}}},
          {"CYCLIC_EBM", {{{"n_estimators", 8}}}}}}};
    std::ofstream(path) << j.dump(2);
}

} // namespace

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(cli({}).code, 1);
    EXPECT_EQ(cli({"frobnicate"}).code, 1);
    EXPECT_EQ(cli({"train", "--train", "x.csv"}).code, 1);
    EXPECT_EQ(cli({"--help"}).code, 0);
    const auto dir = temp_dir("cli_usage");
    EXPECT_EQ(cli({"--out", dir.string(), "synth", "--benign", "0"}).code, 1);
    EXPECT_EQ(cli({"--out", dir.string(), "tune", "--train", "x.csv", "--model", "SVM"}).code, 1);
}

TEST(Cli, MissingInputExitsTwo) {
    const auto r = cli({"evaluate", "--model", "/nonexistent/model.json", "--data", "/nonexistent/data.csv"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, SchemaMismatchedModelIsRejected) {
    const auto dir = temp_dir("cli_schema");
    const auto d = dir.string();
    ASSERT_EQ(cli({"--out", d, "synth", "--benign", "60", "--malicious", "60"}).code, 0);
    ASSERT_EQ(cli({"--out", d, "prepare", "--input", d + "/synthetic.csv"}).code, 0);
    ASSERT_EQ(cli({"--out", d, "train", "--train", d + "/train.csv", "--model", "LEVEL_BOOST"}).code, 0);
    auto j = nlohmann::json::parse(slurp(dir / "model_LEVEL_BOOST_regular.json"));
    j["metadata"]["schema"] = "some-other-schema";
    std::ofstream(dir / "foreign.json") << j.dump();
    const auto r = cli({"--out", d, "attack", "--model", d + "/foreign.json", "--holdout", d + "/holdout.csv",
                        "--patterns", d + "/patterns.json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("schema mismatch"), std::string::npos) << r.err;
}

TEST(Cli, StagesReproduceTheBenchmark) {
    const auto dir = temp_dir("cli_stages");
    const auto d = dir.string();
    ASSERT_EQ(cli({"--out", d, "synth", "--benign", "150", "--malicious", "150", "--separation", "1.5"}).code, 0);
    write_quick_config(dir / "quick.json", "synthetic.csv");

    const auto bench_dir = (dir / "bench").string();
    const auto b = cli({"--config", d + "/quick.json", "--out", bench_dir, "--format", "csv", "bench"});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto report = parse_report_csv(b.out);
    ASSERT_EQ(report.rows.size(), 16u);

    const auto cfg = d + "/quick.json";
    ASSERT_EQ(cli({"--out", d, "prepare", "--input", d + "/synthetic.csv"}).code, 0);
    EXPECT_EQ(slurp(dir / "train.csv"), slurp(dir / "bench" / "train.csv"));
    ASSERT_EQ(cli({"--config", cfg, "--out", d, "tune", "--train", d + "/train.csv", "--model", "CYCLIC_EBM", "--folds", "3"})
                  .code,
              0);
    ASSERT_EQ(cli({"--config", cfg, "--out", d, "train", "--train", d + "/train.csv", "--model", "CYCLIC_EBM", "--tuning",
                   d + "/tune_CYCLIC_EBM.json", "--mode", "adversarial"})
                  .code,
              0);
    auto staged = nlohmann::json::parse(slurp(dir / "model_CYCLIC_EBM_adversarial.json"));
    auto benched = nlohmann::json::parse(slurp(dir / "bench" / "model_CYCLIC_EBM_adversarial.json"));
    staged["metadata"].erase("provenance");  // names the input file
    benched["metadata"].erase("provenance");
    EXPECT_EQ(staged, benched);
    ASSERT_EQ(cli({"--config", cfg, "--out", d, "attack", "--model", d + "/model_CYCLIC_EBM_adversarial.json",
                   "--holdout", d + "/holdout.csv", "--patterns", d + "/patterns.json"})
                  .code,
              0);
    const auto e = cli({"--format", "json", "evaluate", "--model", d + "/model_CYCLIC_EBM_adversarial.json", "--data",
                        d + "/attacked_holdout_CYCLIC_EBM_adversarial.csv"});
    ASSERT_EQ(e.code, 0) << e.err;
    const auto m = nlohmann::json::parse(e.out);
    const auto& row = report.rows[15];
    ASSERT_EQ(row.model, ModelKind::CYCLIC_EBM);
    ASSERT_TRUE(row.attacked);
    EXPECT_EQ(m.at("rcl").get<double>(), row.metrics.rcl);
    EXPECT_EQ(m.at("f1s").get<double>(), row.metrics.f1s);

    const auto again = cli({"--config", cfg, "--out", (dir / "bench2").string(), "--threads", "3", "--format", "csv", "bench"});
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(slurp(dir / "bench" / "report.json"), slurp(dir / "bench2" / "report.json"));

    const auto table = cli({"--format", "table", "report", "--input", bench_dir + "/report.json"});
    EXPECT_EQ(table.code, 0);
    EXPECT_NE(table.out.find("CYCLIC_EBM"), std::string::npos);
    std::ofstream(dir / "report.csv") << b.out;
    const auto from_csv = cli({"--format", "csv", "report", "--input", d + "/report.csv"});
    EXPECT_EQ(from_csv.out, b.out);
}
