#pragma once
#include <filesystem>
#include <random>
#include <string>

#include <nidsbench/nidsbench.hpp>

namespace testing_support {

using namespace nidsbench;

// Random small dataset with integer-valued features drawn from [0, levels).
// Few distinct values per feature keep exhaustive oracles cheap and make ties
// common.
inline FlowDataset random_grid_dataset(std::size_t n, std::uint64_t seed, int levels = 6) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> value(0, levels - 1);
    std::vector<FeatureRow> rows(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : rows[i]) v = value(gen);
        // label leans on features 3 and 11 with noise
        const double s = rows[i][3] + 0.5 * rows[i][11] + std::uniform_real_distribution<double>(-2, 2)(gen);
        labels[i] = s > levels * 0.75 ? 1 : 0;
    }
    labels[0] = 0;
    labels[1] = 1;
    return FlowDataset(std::move(rows), std::move(labels), "grid");
}

inline FlowDataset synthetic(std::size_t per_class, double separation, std::uint64_t seed) {
    return synthesize_dataset(per_class, per_class, separation, seed);
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("nidsbench_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testing_support
