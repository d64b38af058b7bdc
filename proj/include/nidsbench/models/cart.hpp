#pragma once
#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "../core/error.hpp"
#include "../core/rng.hpp"
#include "../dataflow.hpp"
#include "hyperparams.hpp"
#include "tree.hpp"

namespace nidsbench {

// 1 - sum of squared class proportions; in [0, 0.5] for two classes.
inline double gini_impurity(std::array<std::size_t, 2> counts) {
    const double n = static_cast<double>(counts[0] + counts[1]);
    if (n == 0.0) throw std::invalid_argument("gini_impurity: empty node");
    const double p0 = static_cast<double>(counts[0]) / n;
    const double p1 = static_cast<double>(counts[1]) / n;
    return 1.0 - (p0 * p0 + p1 * p1);
}

// Draws `count` distinct features uniformly and returns them ascending.
inline std::vector<std::size_t> sample_features(std::size_t count, Rng& rng) {
    std::vector<std::size_t> all(kFeatureCount);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (count >= kFeatureCount) return all;
    for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng.below(kFeatureCount - i)]);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

namespace detail {

class CartBuilder {
public:
    CartBuilder(const FlowDataset& data, const RfParams& hp, Rng& rng) : data_(data), hp_(hp), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> rows) {
        rows_ = std::move(rows);
        tree_.nodes.clear();
        tree_.nodes.emplace_back();
        struct Task {
            std::size_t node, begin, end, depth;
        };
        std::vector<Task> stack{{0, 0, rows_.size(), 0}};
        while (!stack.empty()) {
            const Task t = stack.back();
            stack.pop_back();
            std::array<std::size_t, 2> counts{0, 0};
            for (std::size_t i = t.begin; i < t.end; ++i) ++counts[data_.label(rows_[i])];
            const std::size_t n = t.end - t.begin;
            tree_.nodes[t.node].value = static_cast<double>(counts[1]) / static_cast<double>(n);
            if (t.depth >= hp_.max_depth || counts[0] == 0 || counts[1] == 0 || n < 2 * hp_.min_samples_leaf)
                continue;
            const auto split = best_split(t.begin, t.end, counts);
            if (!split) continue;
            auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(t.begin),
                                             rows_.begin() + static_cast<std::ptrdiff_t>(t.end), [&](std::size_t r) {
                                                 return data_.row(r)[split->first] <= split->second;
                                             });
            const auto m = static_cast<std::size_t>(mid - rows_.begin());
            const auto left = static_cast<std::int32_t>(tree_.nodes.size());
            tree_.nodes.emplace_back();
            tree_.nodes.emplace_back();
            auto& nd = tree_.nodes[t.node];
            nd.feature = static_cast<std::int32_t>(split->first);
            nd.threshold = split->second;
            nd.left = left;
            nd.right = left + 1;
            // Right pushed first so the left subtree is grown first.
            stack.push_back({static_cast<std::size_t>(left + 1), m, t.end, t.depth + 1});
            stack.push_back({static_cast<std::size_t>(left), t.begin, m, t.depth + 1});
        }
        return std::move(tree_);
    }

private:
    // Maximizes the weighted Gini decrease over the sampled features. The
    // score sum_c n_c^2 / n per child equals n - n * gini, so maximizing the
    // children's total score minimizes their weighted impurity.
    std::optional<std::pair<std::size_t, double>> best_split(std::size_t begin, std::size_t end,
                                                             std::array<std::size_t, 2> counts) {
        const auto features = sample_features(hp_.max_features, rng_);
        const std::size_t n = end - begin;
        auto score = [](double a, double b) { return (a * a + b * b) / (a + b); };
        const double parent = score(static_cast<double>(counts[0]), static_cast<double>(counts[1]));
        double best = parent + 1e-12 * static_cast<double>(n);
        std::optional<std::pair<std::size_t, double>> result;
        buf_.resize(n);
        for (auto f : features) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto r = rows_[begin + i];
                buf_[i] = {data_.row(r)[f], data_.label(r)};
            }
            std::sort(buf_.begin(), buf_.end());
            std::array<double, 2> left{0, 0};
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left[buf_[i].second] += 1.0;
                if (buf_[i].first == buf_[i + 1].first) continue;
                const std::size_t n_left = i + 1;
                if (n_left < hp_.min_samples_leaf || n - n_left < hp_.min_samples_leaf) continue;
                const double r0 = static_cast<double>(counts[0]) - left[0];
                const double r1 = static_cast<double>(counts[1]) - left[1];
                const double s = score(left[0], left[1]) + score(r0, r1);
                if (s > best) {
                    best = s;
                    const double a = buf_[i].first, b = buf_[i + 1].first;
                    result = {f, a + (b - a) / 2.0};
                }
            }
        }
        return result;
    }

    const FlowDataset& data_;
    const RfParams& hp_;
    Rng& rng_;
    std::vector<std::size_t> rows_;
    std::vector<std::pair<double, std::uint8_t>> buf_;
    DecisionTree tree_;
};

} // namespace detail

// Greedy Gini tree on `row_indices` (duplicates allowed, as in a bootstrap
// sample). Each node considers a fresh uniform subset of max_features
// features; growth stops at max_depth, at pure nodes, or when no split leaves
// min_samples_leaf rows on both sides and strictly decreases impurity.
inline DecisionTree fit_cart(const FlowDataset& train, std::vector<std::size_t> row_indices, const RfParams& hp,
                             Rng& rng) {
    if (row_indices.empty()) throw std::invalid_argument("fit_cart: no rows");
    detail::CartBuilder builder(train, hp, rng);
    return builder.build(std::move(row_indices));
}

} // namespace nidsbench
