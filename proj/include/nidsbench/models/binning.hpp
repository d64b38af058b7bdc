#pragma once
#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "../core/error.hpp"
#include "../schema.hpp"

namespace nidsbench {

// Column-major matrix of bin ids, one byte per cell.
struct BinnedMatrix {
    std::size_t n_rows = 0;
    std::array<std::vector<std::uint8_t>, kFeatureCount> columns;

    std::uint8_t at(std::size_t row, std::size_t feature) const { return columns[feature][row]; }
};

// Per-feature sorted bin edges. The bin id of v is the number of edges < v,
// so bin b holds the values in (edges[b-1], edges[b]].
struct BinIndex {
    std::array<std::vector<double>, kFeatureCount> edges;

    std::size_t bin_count(std::size_t feature) const { return edges[feature].size() + 1; }

    std::uint8_t bin(std::size_t feature, double v) const {
        const auto& e = edges[feature];
        return static_cast<std::uint8_t>(std::lower_bound(e.begin(), e.end(), v) - e.begin());
    }

    // Value threshold equivalent to the bin split "bin <= b".
    double threshold(std::size_t feature, std::size_t b) const { return edges[feature][b]; }

    BinnedMatrix apply(std::span<const FeatureRow> rows) const {
        BinnedMatrix m;
        m.n_rows = rows.size();
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            auto& col = m.columns[f];
            col.resize(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) col[i] = bin(f, rows[i][f]);
        }
        return m;
    }

    friend bool operator==(const BinIndex&, const BinIndex&) = default;
};

// Edges at empirical quantiles. Edges sit at midpoints between consecutive
// distinct training values, so duplicates collapse by construction; with no
// more distinct values than bins every distinct value gets its own bin.
inline BinIndex build_bins(std::span<const FeatureRow> rows, std::size_t max_bins = 256) {
    if (max_bins < 2 || max_bins > 256) throw ConfigError("build_bins: max_bins must lie in [2, 256]");
    BinIndex index;
    std::vector<double> values(rows.size());
    std::vector<double> distinct;
    std::vector<std::size_t> cumulative;  // rows with value <= distinct[i]
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i][f];
        std::sort(values.begin(), values.end());
        distinct.clear();
        cumulative.clear();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (distinct.empty() || values[i] != distinct.back()) {
                distinct.push_back(values[i]);
                cumulative.push_back(0);
            }
            cumulative.back() = i + 1;
        }
        auto& edges = index.edges[f];
        auto midpoint = [&](std::size_t i) { return distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0; };
        if (distinct.size() <= max_bins) {
            for (std::size_t i = 0; i + 1 < distinct.size(); ++i) edges.push_back(midpoint(i));
            continue;
        }
        // Close a bin after distinct value i once the running count reaches the
        // next quantile target; at most one edge per gap keeps edges increasing.
        const double n = static_cast<double>(values.size());
        std::size_t next_target = 1;
        for (std::size_t i = 0; i + 1 < distinct.size() && edges.size() + 1 < max_bins; ++i) {
            const double target = n * static_cast<double>(next_target) / static_cast<double>(max_bins);
            if (static_cast<double>(cumulative[i]) >= target) {
                edges.push_back(midpoint(i));
                while (next_target < max_bins &&
                       static_cast<double>(cumulative[i]) >=
                           n * static_cast<double>(next_target) / static_cast<double>(max_bins))
                    ++next_target;
            }
        }
    }
    return index;
}

} // namespace nidsbench
