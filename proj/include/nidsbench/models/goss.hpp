#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "../core/rng.hpp"

namespace nidsbench {

struct GossSample {
    std::vector<std::uint32_t> indices;  // ascending
    std::vector<double> weights;         // aligned with indices
};

namespace detail {
// ceil(x) that ignores floating noise just above an integer (0.7 * 100).
inline std::size_t ceil_count(double x) {
    const double r = std::round(x);
    return static_cast<std::size_t>(std::abs(x - r) < 1e-9 ? r : std::ceil(x));
}
} // namespace detail

// Gradient-based one-side sampling: keeps the ceil(a*N) largest |grad| rows
// with weight 1 and draws ceil(b*N) of the remaining rows uniformly without
// replacement, weighted (1 - a) / b to keep the gradient sum unbiased.
// Ties in |grad| resolve to the lower index.
inline GossSample goss_sample(std::span<const double> grad, double top_fraction, double other_fraction, Rng& rng) {
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw std::invalid_argument("goss_sample: a must lie in (0, 1]");
    if (!(other_fraction >= 0.0 && other_fraction <= 1.0 - top_fraction + 1e-12))
        throw std::invalid_argument("goss_sample: b must lie in [0, 1 - a]");
    const std::size_t n = grad.size();
    GossSample out;
    const std::size_t n_top = std::min(n, detail::ceil_count(top_fraction * static_cast<double>(n)));
    if (n_top == n) {
        out.indices.resize(n);
        std::iota(out.indices.begin(), out.indices.end(), std::uint32_t{0});
        out.weights.assign(n, 1.0);
        return out;
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    auto by_magnitude = [&](std::uint32_t a, std::uint32_t b) {
        const double ga = std::abs(grad[a]), gb = std::abs(grad[b]);
        return ga != gb ? ga > gb : a < b;
    };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_top), order.end(), by_magnitude);
    std::vector<std::uint32_t> rest(order.begin() + static_cast<std::ptrdiff_t>(n_top), order.end());
    std::sort(rest.begin(), rest.end());
    const std::size_t n_other = std::min(rest.size(), detail::ceil_count(other_fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < n_other; ++i) std::swap(rest[i], rest[i + rng.below(rest.size() - i)]);

    std::vector<std::pair<std::uint32_t, double>> picked;
    picked.reserve(n_top + n_other);
    for (std::size_t i = 0; i < n_top; ++i) picked.emplace_back(order[i], 1.0);
    const double amplify = n_other ? (1.0 - top_fraction) / other_fraction : 0.0;
    for (std::size_t i = 0; i < n_other; ++i) picked.emplace_back(rest[i], amplify);
    std::sort(picked.begin(), picked.end());
    for (auto [i, w] : picked) {
        out.indices.push_back(i);
        out.weights.push_back(w);
    }
    return out;
}

} // namespace nidsbench
