#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reefkit/grid.hpp"

// Count-based evaluation metrics: confusion matrix, per-class pixel accuracy
// and IoU, and their means (mPA / mIoU).

namespace reefkit {

// Entry (t, p) counts pixels of true class t predicted as p.
struct ConfusionMatrix {
    int classes = 0;
    std::vector<std::int64_t> counts;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int c) : classes(c) {
        if (c < 1) throw DataError("confusion matrix needs at least one class");
        counts.assign(static_cast<std::size_t>(c) * c, 0);
    }

    std::int64_t at(int truth, int pred) const {
        return counts[static_cast<std::size_t>(truth) * classes + pred];
    }
    std::int64_t& at(int truth, int pred) {
        return counts[static_cast<std::size_t>(truth) * classes + pred];
    }

    std::int64_t row_sum(int truth) const {
        std::int64_t s = 0;
        for (int j = 0; j < classes; ++j) s += at(truth, j);
        return s;
    }
    std::int64_t col_sum(int pred) const {
        std::int64_t s = 0;
        for (int i = 0; i < classes; ++i) s += at(i, pred);
        return s;
    }
    std::int64_t total() const {
        std::int64_t s = 0;
        for (std::int64_t v : counts) s += v;
        return s;
    }
};

// Per-pixel tally over aligned masks; pixels with nodata in either are skipped.
inline ConfusionMatrix confusion(const ClassMask& pred, const ClassMask& truth,
                                 int classes = 3) {
    require_aligned(pred, truth, "confusion");

    ConfusionMatrix m(classes);
    for (std::size_t i = 0; i < truth.ids.size(); ++i) {
        std::uint8_t t = truth.ids[i];
        std::uint8_t p = pred.ids[i];
        if (t == ClassMask::nodata || p == ClassMask::nodata) continue;
        if (t >= classes || p >= classes) throw DataError("class id out of range");
        ++m.at(t, p);
    }
    return m;
}

// Recall of class c; empty when the class has no truth pixels.
inline std::optional<double> class_accuracy(const ConfusionMatrix& m, int c) {
    std::int64_t row = m.row_sum(c);
    if (row == 0) return std::nullopt;
    return static_cast<double>(m.at(c, c)) / static_cast<double>(row);
}

// IoU of class c; empty when the class appears in neither truth nor prediction.
inline std::optional<double> class_iou(const ConfusionMatrix& m, int c) {
    std::int64_t uni = m.row_sum(c) + m.col_sum(c) - m.at(c, c);
    if (uni == 0) return std::nullopt;
    return static_cast<double>(m.at(c, c)) / static_cast<double>(uni);
}

inline double mpa(const ConfusionMatrix& m) {
    double total = 0.0;
    int n = 0;
    for (int c = 0; c < m.classes; ++c) {
        if (auto acc = class_accuracy(m, c)) {
            total += *acc;
            ++n;
        }
    }
    if (n == 0) throw DataError("confusion matrix has no truth pixels");
    return total / n;
}

inline double miou(const ConfusionMatrix& m) {
    double total = 0.0;
    int n = 0;
    for (int c = 0; c < m.classes; ++c) {
        if (auto iou = class_iou(m, c)) {
            total += *iou;
            ++n;
        }
    }
    if (n == 0) throw DataError("confusion matrix is empty");
    return total / n;
}

}  // namespace reefkit
