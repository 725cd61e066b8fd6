#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "reefkit/grid.hpp"

namespace reefkit {

// Per-cell unit surface normals split from slope/aspect. Invalid cells carry
// no usable vector; valid cells satisfy nx^2+ny^2+nz^2 = 1 with nz >= 0.
struct NormalField {
    int width = 0;
    int height = 0;
    GeoTransform transform;
    std::vector<double> nx, ny, nz;
    std::vector<std::uint8_t> valid;

    NormalField() = default;
    NormalField(int w, int h, GeoTransform t) : width(w), height(h), transform(t) {
        const std::size_t n = static_cast<std::size_t>(w) * h;
        nx.assign(n, 0.0);
        ny.assign(n, 0.0);
        nz.assign(n, 1.0);
        valid.assign(n, 0);
    }

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width + col;
    }
};

struct SlopeAspect {
    Grid slope;   // radians, [0, pi/2)
    Grid aspect;  // radians clockwise from grid north, [0, 2*pi); nodata where undefined
};

// Horn 3x3 finite differences. Border cells and cells whose 3x3 neighborhood
// contains nodata come out as nodata in both outputs. Flat cells (zero
// gradient) get slope 0 and a nodata aspect, which marks aspect-undefined.
// Aspect is the downslope compass direction: 0 = north, pi/2 = east.
inline SlopeAspect slope_aspect(const Grid& dsm) {
    if (dsm.unit != Unit::meters) throw DataError("slope_aspect expects a DSM in meters");
    if (dsm.width < 3 || dsm.height < 3) {
        throw DataError("slope_aspect requires a grid of at least 3x3 cells");
    }

    constexpr double derived_nodata = -9999.0;
    SlopeAspect out{
        Grid(dsm.width, dsm.height, dsm.transform, derived_nodata, Unit::dimensionless),
        Grid(dsm.width, dsm.height, dsm.transform, derived_nodata, Unit::dimensionless)};

    const double inv8cell = 1.0 / (8.0 * dsm.transform.cell_size);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    for (int r = 1; r < dsm.height - 1; ++r) {
        for (int c = 1; c < dsm.width - 1; ++c) {
            double z[3][3];
            bool ok = true;
            for (int dr = -1; dr <= 1 && ok; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    double v = dsm.at(r + dr, c + dc);
                    if (dsm.is_nodata(v)) {
                        ok = false;
                        break;
                    }
                    z[dr + 1][dc + 1] = v;
                }
            }
            if (!ok) continue;

            // z[0][*] is the northern row. gx points east, gy points north.
            double gx = ((z[0][2] + 2.0 * z[1][2] + z[2][2]) -
                         (z[0][0] + 2.0 * z[1][0] + z[2][0])) * inv8cell;
            double gy = ((z[0][0] + 2.0 * z[0][1] + z[0][2]) -
                         (z[2][0] + 2.0 * z[2][1] + z[2][2])) * inv8cell;

            out.slope.at(r, c) = std::atan(std::hypot(gx, gy));
            if (gx == 0.0 && gy == 0.0) continue;  // aspect stays nodata: undefined

            double a = std::atan2(-gx, -gy);  // downslope direction, clockwise from north
            if (a < 0.0) a += two_pi;
            if (a >= two_pi) a = 0.0;
            out.aspect.at(r, c) = a;
        }
    }
    return out;
}

// nz = cos(slope), horizontal magnitude sin(slope) split by aspect:
// nx = sin(slope)*sin(aspect), ny = sin(slope)*cos(aspect). Cells with an
// undefined aspect (flat) get the vertical unit vector.
inline NormalField decompose_normals(const Grid& slope, const Grid& aspect) {
    require_aligned(slope, aspect, "decompose_normals");

    NormalField nf(slope.width, slope.height, slope.transform);
    for (int r = 0; r < slope.height; ++r) {
        for (int c = 0; c < slope.width; ++c) {
            double s = slope.at(r, c);
            if (slope.is_nodata(s)) continue;
            std::size_t i = nf.index(r, c);
            nf.valid[i] = 1;
            double a = aspect.at(r, c);
            if (aspect.is_nodata(a)) {
                nf.nx[i] = 0.0;
                nf.ny[i] = 0.0;
                nf.nz[i] = 1.0;
            } else {
                double ss = std::sin(s);
                nf.nx[i] = ss * std::sin(a);
                nf.ny[i] = ss * std::cos(a);
                nf.nz[i] = std::cos(s);
            }
        }
    }
    return nf;
}

}  // namespace reefkit
