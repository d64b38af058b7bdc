#pragma once
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "../schema.hpp"

namespace nidsbench {

// Binary decision tree stored as a flat node array; node 0 is the root.
// An internal node sends x to `left` when x[feature] <= threshold. Leaves hold
// one real: the malicious-class frequency for classification trees (the pair
// is {1 - value, value}) or an additive logit score for gradient trees.
struct DecisionTree {
    struct Node {
        std::int32_t feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;

        bool is_leaf() const { return feature < 0; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    std::vector<Node> nodes;

    bool empty() const { return nodes.empty(); }

    std::size_t leaf_count() const {
        std::size_t n = 0;
        for (const auto& nd : nodes) n += nd.is_leaf();
        return n;
    }

    std::size_t depth() const { return nodes.empty() ? 0 : depth_from(0); }

    std::size_t leaf_index(const FeatureRow& x) const {
        std::size_t i = 0;
        while (!nodes[i].is_leaf())
            i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold
                                             ? nodes[i].left
                                             : nodes[i].right);
        return i;
    }

    double predict(const FeatureRow& x) const { return nodes[leaf_index(x)].value; }

    // Structural checks: children in range, acyclic (children after parents),
    // every internal node with exactly two children, every non-root node
    // reached exactly once.
    void validate() const {
        if (nodes.empty()) throw std::logic_error("tree: no nodes");
        std::vector<int> parents(nodes.size(), 0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto& nd = nodes[i];
            if (nd.is_leaf()) continue;
            if (nd.feature >= static_cast<std::int32_t>(kFeatureCount)) throw std::logic_error("tree: bad feature index");
            for (auto c : {nd.left, nd.right}) {
                if (c <= static_cast<std::int32_t>(i) || c >= static_cast<std::int32_t>(nodes.size()))
                    throw std::logic_error("tree: child index out of order");
                ++parents[static_cast<std::size_t>(c)];
            }
        }
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (parents[i] != 1) throw std::logic_error("tree: node reached " + std::to_string(parents[i]) + " times");
    }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    std::size_t depth_from(std::size_t i) const {
        const auto& nd = nodes[i];
        if (nd.is_leaf()) return 0;
        return 1 + std::max(depth_from(static_cast<std::size_t>(nd.left)), depth_from(static_cast<std::size_t>(nd.right)));
    }
};

} // namespace nidsbench
