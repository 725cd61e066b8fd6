#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "reefkit/grid.hpp"

namespace reefkit {

struct SummaryStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct Histogram {
    double bin_width = 0.0;
    double origin = 0.0;  // left edge of bin 0; 0 is always a bin edge
    std::vector<std::int64_t> counts;
};

struct ViolinData {
    int class_id = 0;
    std::optional<int> window;
    SummaryStats stats;
    std::vector<std::pair<double, double>> density;  // (value, density), ascending
};

// Cell-wise later - earlier, so positive values mean growth. Nodata in either
// operand propagates to the output.
inline Grid dsm_diff(const Grid& later, const Grid& earlier) {
    if (later.unit != Unit::meters || earlier.unit != Unit::meters) {
        throw DataError("dsm_diff expects both DSMs in meters");
    }
    require_aligned(later, earlier, "dsm_diff");

    Grid out(later.width, later.height, later.transform, later.nodata, Unit::meters);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double a = later.values[i];
        double b = earlier.values[i];
        if (later.is_nodata(a) || earlier.is_nodata(b)) continue;
        out.values[i] = a - b;
    }
    return out;
}

// Clamp values to [-limit, +limit]; nodata cells pass through.
inline Grid truncate(const Grid& g, double limit) {
    if (!(limit > 0.0)) throw DataError("truncate limit must be > 0");
    Grid out = g;
    for (double& v : out.values) {
        if (out.is_nodata(v)) continue;
        v = std::clamp(v, -limit, limit);
    }
    return out;
}

namespace detail {

// Non-nodata cells of g, optionally restricted by a class mask. With a
// class_id the selection is mask == class_id; with a mask alone it is every
// labeled (non-255) cell.
inline std::vector<double> select_cells(const Grid& g, const ClassMask* mask,
                                        std::optional<int> class_id) {
    if (class_id && !mask) throw DataError("class_id given without a mask");
    if (mask) require_aligned(g, *mask, "masked selection");

    std::vector<double> out;
    out.reserve(g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        double v = g.values[i];
        if (g.is_nodata(v)) continue;
        if (mask) {
            std::uint8_t id = mask->ids[i];
            if (class_id) {
                if (id != *class_id) continue;
            } else if (id == ClassMask::nodata) {
                continue;
            }
        }
        out.push_back(v);
    }
    return out;
}

// Lower-interpolation quantile: sorted[floor(p * (n - 1))].
inline double quantile_lower(const std::vector<double>& sorted, double p) {
    auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(sorted.size() - 1)));
    return sorted[idx];
}

inline SummaryStats stats_of(std::vector<double> values) {
    if (values.empty()) throw DataError("empty selection");
    std::sort(values.begin(), values.end());
    KahanSum sum;
    for (double v : values) sum.add(v);

    SummaryStats s;
    s.count = static_cast<std::int64_t>(values.size());
    s.mean = sum.value() / static_cast<double>(values.size());
    s.median = quantile_lower(values, 0.5);
    s.q1 = quantile_lower(values, 0.25);
    s.q3 = quantile_lower(values, 0.75);
    s.min = values.front();
    s.max = values.back();
    return s;
}

}  // namespace detail

// Summary statistics over the selected cells. The median (and quartiles) use
// lower interpolation: for even counts the smaller of the two middle values.
inline SummaryStats masked_stats(const Grid& g, const ClassMask* mask = nullptr,
                                 std::optional<int> class_id = std::nullopt) {
    return detail::stats_of(detail::select_cells(g, mask, class_id));
}

// Half-open bins [edge, edge + width); the origin is the largest multiple of
// bin_width not exceeding the minimum, so 0 is always a bin edge.
inline Histogram histogram(const Grid& g, double bin_width,
                           const ClassMask* mask = nullptr,
                           std::optional<int> class_id = std::nullopt) {
    if (!(bin_width > 0.0)) throw DataError("histogram bin_width must be > 0");
    std::vector<double> values = detail::select_cells(g, mask, class_id);
    if (values.empty()) throw DataError("empty selection");

    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Histogram h;
    h.bin_width = bin_width;
    h.origin = std::floor(*mn / bin_width) * bin_width;
    auto nbins = static_cast<std::size_t>(std::floor((*mx - h.origin) / bin_width)) + 1;
    h.counts.assign(nbins, 0);
    for (double v : values) {
        auto idx = static_cast<std::size_t>(std::floor((v - h.origin) / bin_width));
        if (idx >= nbins) idx = nbins - 1;
        ++h.counts[idx];
    }
    return h;
}

namespace detail {

// Gaussian KDE on n_eval evenly spaced points spanning [min, max] of the
// samples, Silverman bandwidth. Degenerate samples (zero spread) fall back to
// a 1e-9 bandwidth and a single evaluation point.
inline std::vector<std::pair<double, double>> gaussian_kde(
    const std::vector<double>& samples, const SummaryStats& s, int n_eval = 256) {
    const auto n = static_cast<double>(samples.size());

    KahanSum sq;
    for (double v : samples) sq.add((v - s.mean) * (v - s.mean));
    double sd = samples.size() > 1 ? std::sqrt(sq.value() / (n - 1.0)) : 0.0;
    double iqr = s.q3 - s.q1;
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
    double bandwidth = 0.9 * spread * std::pow(n, -0.2);
    if (!(bandwidth > 0.0)) bandwidth = 1e-9;

    const double span = s.max - s.min;
    const int points = span > 0.0 ? n_eval : 1;
    const double inv_h = 1.0 / bandwidth;
    const double norm = inv_h / (n * std::sqrt(2.0 * std::numbers::pi));

    std::vector<std::pair<double, double>> out;
    out.reserve(points);
    for (int j = 0; j < points; ++j) {
        double x = points > 1 ? s.min + span * j / (points - 1) : s.min;
        KahanSum acc;
        for (double v : samples) {
            double u = (x - v) * inv_h;
            acc.add(std::exp(-0.5 * u * u));
        }
        out.emplace_back(x, norm * acc.value());
    }
    return out;
}

}  // namespace detail

// Per-class distribution summaries for violin plots. Classes with zero cells
// come back as empty entries rather than errors.
inline std::vector<ViolinData> violin_data(const Grid& g, const ClassMask& mask,
                                           const std::vector<int>& classes) {
    if (classes.empty()) throw DataError("violin_data needs at least one class");
    require_aligned(g, mask, "violin_data");

    std::vector<ViolinData> out;
    out.reserve(classes.size());
    for (int cls : classes) {
        ViolinData vd;
        vd.class_id = cls;
        std::vector<double> values = detail::select_cells(g, &mask, cls);
        if (!values.empty()) {
            vd.stats = detail::stats_of(values);
            vd.density = detail::gaussian_kde(values, vd.stats);
        }
        out.push_back(std::move(vd));
    }
    return out;
}

}  // namespace reefkit
