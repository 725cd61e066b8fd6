#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "reefkit/grid.hpp"
#include "reefkit/terrain.hpp"

// Vector Ruggedness Measure. For each cell, the unit normals inside the
// window x window neighborhood are summed; with R = |sum| and N = number of
// valid cells, the output is 1 - R/N: 0 for a flat or planar patch, 1 for
// maximally dispersed normals.

namespace reefkit {

struct VrmParams {
    int window = 3;                    // odd, >= 3
    double min_valid_fraction = 0.5;   // of the full window area, in (0, 1]
};

enum class VrmKernel { naive, sat };

namespace detail {

inline void validate_vrm_params(const VrmParams& p, int width, int height) {
    if (p.window < 3 || p.window % 2 == 0) {
        throw DataError("VRM window must be an odd integer >= 3");
    }
    if (p.window > width || p.window > height) {
        throw DataError("VRM window larger than grid extent");
    }
    if (!(p.min_valid_fraction > 0.0) || p.min_valid_fraction > 1.0) {
        throw DataError("min_valid_fraction must be in (0, 1]");
    }
}

inline double vrm_cell_value(double sx, double sy, double sz, std::int64_t n) {
    double r = std::sqrt(sx * sx + sy * sy + sz * sz);
    double v = 1.0 - r / static_cast<double>(n);
    return std::clamp(v, 0.0, 1.0);
}

// Summed-area tables over the normal components and the valid-cell count.
// Accumulation runs in extended precision so corner-difference lookups stay
// accurate on very large grids.
struct NormalSat {
    int width = 0;
    int height = 0;
    std::vector<long double> sx, sy, sz;
    std::vector<std::int64_t> count;

    explicit NormalSat(const NormalField& nf) : width(nf.width), height(nf.height) {
        const std::size_t stride = static_cast<std::size_t>(width) + 1;
        const std::size_t total = stride * (height + 1);
        sx.assign(total, 0.0L);
        sy.assign(total, 0.0L);
        sz.assign(total, 0.0L);
        count.assign(total, 0);
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                std::size_t i = nf.index(r, c);
                std::size_t here = (r + 1) * stride + (c + 1);
                std::size_t up = r * stride + (c + 1);
                std::size_t left = (r + 1) * stride + c;
                std::size_t diag = r * stride + c;
                bool v = nf.valid[i] != 0;
                sx[here] = (v ? nf.nx[i] : 0.0) + sx[up] + sx[left] - sx[diag];
                sy[here] = (v ? nf.ny[i] : 0.0) + sy[up] + sy[left] - sy[diag];
                sz[here] = (v ? nf.nz[i] : 0.0) + sz[up] + sz[left] - sz[diag];
                count[here] = (v ? 1 : 0) + count[up] + count[left] - count[diag];
            }
        }
    }

    // Inclusive cell rectangle [r0, r1] x [c0, c1].
    template <typename T>
    T window_sum(const std::vector<T>& t, int r0, int c0, int r1, int c1) const {
        const std::size_t stride = static_cast<std::size_t>(width) + 1;
        return t[(r1 + 1) * stride + (c1 + 1)] - t[r0 * stride + (c1 + 1)] -
               t[(r1 + 1) * stride + c0] + t[r0 * stride + c0];
    }
};

}  // namespace detail

inline Grid vrm_from_normals(const NormalField& nf, const VrmParams& p,
                             VrmKernel kernel = VrmKernel::sat) {
    detail::validate_vrm_params(p, nf.width, nf.height);

    Grid out(nf.width, nf.height, nf.transform, -9999.0, Unit::dimensionless);
    const int hw = p.window / 2;
    const double full = static_cast<double>(p.window) * p.window;

    if (kernel == VrmKernel::naive) {
        for (int r = 0; r < nf.height; ++r) {
            for (int c = 0; c < nf.width; ++c) {
                if (!nf.valid[nf.index(r, c)]) continue;
                double sx = 0.0, sy = 0.0, sz = 0.0;
                std::int64_t n = 0;
                for (int dr = -hw; dr <= hw; ++dr) {
                    int rr = r + dr;
                    if (rr < 0 || rr >= nf.height) continue;
                    for (int dc = -hw; dc <= hw; ++dc) {
                        int cc = c + dc;
                        if (cc < 0 || cc >= nf.width) continue;
                        std::size_t i = nf.index(rr, cc);
                        if (!nf.valid[i]) continue;
                        sx += nf.nx[i];
                        sy += nf.ny[i];
                        sz += nf.nz[i];
                        ++n;
                    }
                }
                if (static_cast<double>(n) / full < p.min_valid_fraction) continue;
                out.at(r, c) = detail::vrm_cell_value(sx, sy, sz, n);
            }
        }
        return out;
    }

    detail::NormalSat sat(nf);
    for (int r = 0; r < nf.height; ++r) {
        int r0 = std::max(0, r - hw);
        int r1 = std::min(nf.height - 1, r + hw);
        for (int c = 0; c < nf.width; ++c) {
            if (!nf.valid[nf.index(r, c)]) continue;
            int c0 = std::max(0, c - hw);
            int c1 = std::min(nf.width - 1, c + hw);
            std::int64_t n = sat.window_sum(sat.count, r0, c0, r1, c1);
            if (static_cast<double>(n) / full < p.min_valid_fraction) continue;
            double sx = static_cast<double>(sat.window_sum(sat.sx, r0, c0, r1, c1));
            double sy = static_cast<double>(sat.window_sum(sat.sy, r0, c0, r1, c1));
            double sz = static_cast<double>(sat.window_sum(sat.sz, r0, c0, r1, c1));
            out.at(r, c) = detail::vrm_cell_value(sx, sy, sz, n);
        }
    }
    return out;
}

inline Grid vrm(const Grid& dsm, const VrmParams& p, VrmKernel kernel = VrmKernel::sat) {
    if (dsm.unit != Unit::meters) throw DataError("vrm expects a DSM in meters");
    detail::validate_vrm_params(p, dsm.width, dsm.height);
    SlopeAspect sa = slope_aspect(dsm);
    NormalField nf = decompose_normals(sa.slope, sa.aspect);
    return vrm_from_normals(nf, p, kernel);
}

// One VRM grid per window, in the given window order. The slope/normal stage
// is shared across windows.
inline std::vector<std::pair<int, Grid>> vrm_multiscale(
    const Grid& dsm, const std::vector<int>& windows,
    double min_valid_fraction = 0.5, VrmKernel kernel = VrmKernel::sat) {
    if (dsm.unit != Unit::meters) throw DataError("vrm expects a DSM in meters");
    if (windows.empty()) throw DataError("vrm_multiscale needs at least one window");

    SlopeAspect sa = slope_aspect(dsm);
    NormalField nf = decompose_normals(sa.slope, sa.aspect);

    std::vector<std::pair<int, Grid>> out;
    out.reserve(windows.size());
    for (int w : windows) {
        try {
            out.emplace_back(w, vrm_from_normals(nf, VrmParams{w, min_valid_fraction}, kernel));
        } catch (const DataError& e) {
            throw DataError("window " + std::to_string(w) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace reefkit
