#pragma once
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "../core/error.hpp"
#include "../core/rng.hpp"
#include "../dataflow.hpp"
#include "binning.hpp"
#include "cart.hpp"
#include "model.hpp"
#include "tree.hpp"

namespace nidsbench {

enum class GrowMode { level_wise, leaf_wise };

struct GradientTreeConfig {
    GrowMode mode = GrowMode::level_wise;
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
    std::size_t max_leaves = std::numeric_limits<std::size_t>::max();
    double min_child_weight = 0.0;     // hessian sum per child
    std::size_t min_samples_leaf = 1;  // raw row count per child
    double min_loss_reduction = 0.0;   // a split needs gain strictly above this
    double lambda = kLeafL2;
};

inline double leaf_weight(double g_sum, double h_sum, double lambda = kLeafL2) { return -g_sum / (h_sum + lambda); }

// Loss reduction of splitting (G, H) into (GL, HL) and (G - GL, H - HL).
inline double split_gain(double gl, double hl, double gr, double hr, double g, double h, double lambda = kLeafL2) {
    return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda));
}

// Number of candidate features drawn per tree for a subsample fraction.
inline std::size_t subsample_count(double fraction) {
    return std::clamp<std::size_t>(round_half_down(fraction * static_cast<double>(kFeatureCount)), 1, kFeatureCount);
}

namespace detail {

struct BinSplit {
    std::size_t feature = 0;
    std::size_t bin = 0;  // left child takes bins <= bin
    double gain = 0.0;
};

class GradientTreeBuilder {
public:
    GradientTreeBuilder(std::span<const double> grad, std::span<const double> hess, const BinnedMatrix& binned,
                        const BinIndex& bins, std::span<const std::size_t> features, const GradientTreeConfig& cfg)
        : grad_(grad), hess_(hess), binned_(binned), bins_(bins), features_(features), cfg_(cfg) {}

    DecisionTree build(std::span<const std::uint32_t> rows) {
        rows_.assign(rows.begin(), rows.end());
        tree_.nodes.clear();
        std::vector<Pending> frontier{make_node(0, rows_.size(), 0)};
        std::size_t leaves = 1;

        if (cfg_.mode == GrowMode::level_wise) {
            while (!frontier.empty()) {
                std::vector<Pending> next;
                for (auto& p : frontier) {
                    if (p.depth >= cfg_.max_depth || leaves >= cfg_.max_leaves) continue;
                    if (auto s = best_split(p)) {
                        auto [l, r] = split(p, *s);
                        ++leaves;
                        next.push_back(l);
                        next.push_back(r);
                    }
                }
                frontier = std::move(next);
            }
        } else {
            for (auto& p : frontier) p.split = candidate(p);
            while (leaves < cfg_.max_leaves) {
                // Largest gain first; ties go to the earliest-created leaf.
                std::size_t pick = frontier.size();
                for (std::size_t i = 0; i < frontier.size(); ++i)
                    if (frontier[i].split && (pick == frontier.size() || frontier[i].split->gain > frontier[pick].split->gain))
                        pick = i;
                if (pick == frontier.size()) break;
                Pending p = frontier[pick];
                frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
                auto [l, r] = split(p, *p.split);
                ++leaves;
                l.split = candidate(l);
                r.split = candidate(r);
                frontier.push_back(l);
                frontier.push_back(r);
            }
        }
        return std::move(tree_);
    }

private:
    struct Pending {
        std::size_t node, begin, end, depth;
        double g, h;
        std::optional<BinSplit> split;
    };

    Pending make_node(std::size_t begin, std::size_t end, std::size_t depth) {
        double g = 0.0, h = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            g += grad_[rows_[i]];
            h += hess_[rows_[i]];
        }
        const std::size_t id = tree_.nodes.size();
        tree_.nodes.emplace_back();
        tree_.nodes[id].value = leaf_weight(g, h, cfg_.lambda);
        return {id, begin, end, depth, g, h, std::nullopt};
    }

    std::optional<BinSplit> candidate(const Pending& p) {
        if (p.depth >= cfg_.max_depth) return std::nullopt;
        return best_split(p);
    }

    // Scans every candidate feature's histogram; features and bins are
    // visited in ascending order and only a strictly larger gain replaces the
    // incumbent.
    std::optional<BinSplit> best_split(const Pending& p) {
        const std::size_t n = p.end - p.begin;
        if (n < 2 * cfg_.min_samples_leaf || n < 2) return std::nullopt;
        std::optional<BinSplit> best;
        double best_gain = cfg_.min_loss_reduction;
        for (auto f : features_) {
            const std::size_t nb = bins_.bin_count(f);
            if (nb < 2) continue;
            hg_.assign(nb, 0.0);
            hh_.assign(nb, 0.0);
            hc_.assign(nb, 0);
            const auto& col = binned_.columns[f];
            for (std::size_t i = p.begin; i < p.end; ++i) {
                const auto r = rows_[i];
                const auto b = col[r];
                hg_[b] += grad_[r];
                hh_[b] += hess_[r];
                ++hc_[b];
            }
            double gl = 0.0, hl = 0.0;
            std::size_t cl = 0;
            for (std::size_t b = 0; b + 1 < nb; ++b) {
                gl += hg_[b];
                hl += hh_[b];
                cl += hc_[b];
                if (cl == 0) continue;
                const std::size_t cr = n - cl;
                if (cr == 0) break;
                if (cl < cfg_.min_samples_leaf || cr < cfg_.min_samples_leaf) continue;
                const double gr = p.g - gl, hr = p.h - hl;
                if (hl < cfg_.min_child_weight || hr < cfg_.min_child_weight) continue;
                const double gain = split_gain(gl, hl, gr, hr, p.g, p.h, cfg_.lambda);
                if (gain > best_gain) {
                    best_gain = gain;
                    best = BinSplit{f, b, gain};
                }
            }
        }
        return best;
    }

    std::pair<Pending, Pending> split(const Pending& p, const BinSplit& s) {
        const auto& col = binned_.columns[s.feature];
        auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(p.begin),
                                         rows_.begin() + static_cast<std::ptrdiff_t>(p.end),
                                         [&](std::uint32_t r) { return col[r] <= s.bin; });
        const auto m = static_cast<std::size_t>(mid - rows_.begin());
        Pending l = make_node(p.begin, m, p.depth + 1);
        Pending r = make_node(m, p.end, p.depth + 1);
        auto& nd = tree_.nodes[p.node];
        nd.feature = static_cast<std::int32_t>(s.feature);
        nd.threshold = bins_.threshold(s.feature, s.bin);
        nd.left = static_cast<std::int32_t>(l.node);
        nd.right = static_cast<std::int32_t>(r.node);
        return {l, r};
    }

    std::span<const double> grad_, hess_;
    const BinnedMatrix& binned_;
    const BinIndex& bins_;
    std::span<const std::size_t> features_;
    const GradientTreeConfig& cfg_;
    std::vector<std::uint32_t> rows_;
    std::vector<double> hg_, hh_;
    std::vector<std::size_t> hc_;
    DecisionTree tree_;
};

} // namespace detail

// Second-order regression tree on binned features over `rows` (ascending).
// Leaves hold -G / (H + lambda). Level-wise growth expands every frontier node
// depth by depth; leaf-wise growth repeatedly splits the leaf with the largest
// gain until max_leaves.
inline DecisionTree fit_gradient_tree(std::span<const double> grad, std::span<const double> hess,
                                      std::span<const std::uint32_t> rows, const BinnedMatrix& binned,
                                      const BinIndex& bins, std::span<const std::size_t> features,
                                      const GradientTreeConfig& cfg) {
    if (grad.size() != hess.size()) throw std::invalid_argument("fit_gradient_tree: grad/hess length mismatch");
    if (binned.n_rows != grad.size()) throw std::invalid_argument("fit_gradient_tree: binned rows mismatch");
    if (rows.empty()) throw std::invalid_argument("fit_gradient_tree: no rows");
    for (auto r : rows)
        if (!(hess[r] >= 0.0)) throw std::invalid_argument("fit_gradient_tree: negative hessian");
    detail::GradientTreeBuilder builder(grad, hess, binned, bins, features, cfg);
    return builder.build(rows);
}

// Draws the per-tree candidate features from `rng`, then fits on all rows.
inline DecisionTree fit_gradient_tree(std::span<const double> grad, std::span<const double> hess,
                                      const BinnedMatrix& binned, const BinIndex& bins, const GradientTreeConfig& cfg,
                                      double feature_subsample, Rng& rng) {
    const auto features = sample_features(subsample_count(feature_subsample), rng);
    std::vector<std::uint32_t> rows(grad.size());
    std::iota(rows.begin(), rows.end(), std::uint32_t{0});
    return fit_gradient_tree(grad, hess, rows, binned, bins, features, cfg);
}

} // namespace nidsbench
