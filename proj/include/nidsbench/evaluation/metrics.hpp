#pragma once
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "../core/error.hpp"

namespace nidsbench {

// Malicious is the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> predictions) {
    if (labels.size() != predictions.size())
        throw std::invalid_argument("confusion: " + std::to_string(labels.size()) + " labels vs " +
                                    std::to_string(predictions.size()) + " predictions");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 1 || predictions[i] > 1) throw std::invalid_argument("confusion: non-binary value");
        if (labels[i])
            predictions[i] ? ++cm.tp : ++cm.fn;
        else
            predictions[i] ? ++cm.fp : ++cm.tn;
    }
    return cm;
}

struct Metrics {
    double acc = 0, prc = 0, rcl = 0, f1s = 0, fpr = 0;

    nlohmann::ordered_json to_json() const {
        return {{"acc", acc}, {"prc", prc}, {"rcl", rcl}, {"f1s", f1s}, {"fpr", fpr}};
    }
    friend bool operator==(const Metrics&, const Metrics&) = default;
};

// a / b with 0 / 0 defined as 0.
inline double safe_ratio(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline double f1_from(double prc, double rcl) { return safe_ratio(2.0 * prc * rcl, prc + rcl); }

inline Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("metrics_from_confusion: empty confusion matrix");
    Metrics m;
    const auto d = [](std::size_t v) { return static_cast<double>(v); };
    m.acc = d(cm.tp + cm.tn) / d(cm.total());
    m.prc = safe_ratio(d(cm.tp), d(cm.tp + cm.fp));
    m.rcl = safe_ratio(d(cm.tp), d(cm.tp + cm.fn));
    m.f1s = f1_from(m.prc, m.rcl);
    m.fpr = safe_ratio(d(cm.fp), d(cm.fp + cm.tn));
    return m;
}

inline double f1_score(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> predictions) {
    return metrics_from_confusion(confusion(labels, predictions)).f1s;
}

} // namespace nidsbench
