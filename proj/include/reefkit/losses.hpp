#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "reefkit/grid.hpp"

// Segmentation training losses evaluated on per-pixel class probabilities:
// cross entropy, soft (probability-weighted) IoU over the foreground classes,
// and their hybrid combination ce + mu * iou. Pixels whose truth id is the
// nodata sentinel are skipped everywhere.

namespace reefkit {

// Per-cell class probability vectors, row-major with the class index minor.
struct ProbMap {
    int width = 0;
    int height = 0;
    int classes = 0;
    std::vector<double> p;

    ProbMap() = default;
    ProbMap(int w, int h, int c) : width(w), height(h), classes(c) {
        if (w < 1 || h < 1 || c < 1) throw DataError("probability map dimensions must be >= 1");
        p.assign(static_cast<std::size_t>(w) * h * c, 0.0);
    }

    double at(int row, int col, int cls) const {
        return p[(static_cast<std::size_t>(row) * width + col) * classes + cls];
    }
    double& at(int row, int col, int cls) {
        return p[(static_cast<std::size_t>(row) * width + col) * classes + cls];
    }
};

// Each cell's probabilities must be non-negative and sum to 1 within tol.
inline void validate_probmap(const ProbMap& pm, double tol = 1e-6) {
    for (int r = 0; r < pm.height; ++r) {
        for (int c = 0; c < pm.width; ++c) {
            double sum = 0.0;
            for (int k = 0; k < pm.classes; ++k) {
                double v = pm.at(r, c, k);
                if (v < 0.0) throw DataError("negative probability");
                sum += v;
            }
            if (std::abs(sum - 1.0) > tol) {
                throw DataError("cell probabilities do not sum to 1");
            }
        }
    }
}

namespace detail {

inline void require_loss_inputs(const ProbMap& p, const ClassMask& truth) {
    if (p.width != truth.width || p.height != truth.height) {
        throw DataError("probability map and truth mask differ in size");
    }
}

}  // namespace detail

// Mean negative log-likelihood of the true class; probabilities are floored
// at 1e-12 before the log.
inline double ce_loss(const ProbMap& p, const ClassMask& truth) {
    detail::require_loss_inputs(p, truth);

    constexpr double floor = 1e-12;
    KahanSum sum;
    std::int64_t n = 0;
    for (int r = 0; r < truth.height; ++r) {
        for (int c = 0; c < truth.width; ++c) {
            std::uint8_t id = truth.at(r, c);
            if (id == ClassMask::nodata) continue;
            if (id >= p.classes) throw DataError("truth class id out of range");
            sum.add(-std::log(std::max(p.at(r, c, id), floor)));
            ++n;
        }
    }
    if (n == 0) throw DataError("no evaluated pixels");
    return sum.value() / static_cast<double>(n);
}

// Mean over the foreground classes present in the truth of
// 1 - intersection/union, with probability-weighted intersections.
inline double soft_iou_loss(const ProbMap& p, const ClassMask& truth,
                            const std::vector<int>& foreground = {1, 2}) {
    detail::require_loss_inputs(p, truth);

    double total = 0.0;
    int present = 0;
    for (int cls : foreground) {
        if (cls < 0) throw DataError("foreground class id out of range");
        if (cls >= p.classes) continue;  // cannot be present in a valid truth mask
        KahanSum inter, prob_sum;
        std::int64_t truth_count = 0;
        for (int r = 0; r < truth.height; ++r) {
            for (int c = 0; c < truth.width; ++c) {
                std::uint8_t id = truth.at(r, c);
                if (id == ClassMask::nodata) continue;
                double prob = p.at(r, c, cls);
                prob_sum.add(prob);
                if (id == cls) {
                    inter.add(prob);
                    ++truth_count;
                }
            }
        }
        if (truth_count == 0) continue;
        double i = inter.value();
        double u = prob_sum.value() + static_cast<double>(truth_count) - i;
        total += 1.0 - i / u;
        ++present;
    }
    if (present == 0) throw DataError("no foreground pixels in truth");
    return total / present;
}

// ce + mu * iou. With mu = 0 this is exactly the cross-entropy loss and the
// IoU term is never evaluated.
inline double hybrid_loss(const ProbMap& p, const ClassMask& truth, double mu = 0.4,
                          const std::vector<int>& foreground = {1, 2}) {
    if (mu < 0.0) throw DataError("mu must be >= 0");
    double ce = ce_loss(p, truth);
    if (mu == 0.0) return ce;
    return ce + mu * soft_iou_loss(p, truth, foreground);
}

}  // namespace reefkit
