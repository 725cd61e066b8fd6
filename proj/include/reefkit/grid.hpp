#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "reefkit/common.hpp"

namespace reefkit {

enum class Unit { meters, dimensionless };

// Maps cell indices to world coordinates. The origin is the outer corner of
// the south-west cell; cell_size is uniform in x and y.
struct GeoTransform {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_size = 1.0;
};

inline bool transforms_equal(const GeoTransform& a, const GeoTransform& b,
                             double tol = 1e-9) {
    return std::abs(a.origin_x - b.origin_x) <= tol &&
           std::abs(a.origin_y - b.origin_y) <= tol &&
           std::abs(a.cell_size - b.cell_size) <= tol;
}

// Georeferenced single-band raster. Row 0 is the northernmost row. Every
// value is finite or exactly the nodata sentinel; nodata comparison is
// bitwise, never epsilon-based. Grids are treated as immutable once built:
// raster operations return new grids.
struct Grid {
    int width = 0;
    int height = 0;
    GeoTransform transform;
    double nodata = -9999.0;
    Unit unit = Unit::meters;
    std::vector<double> values;

    Grid() = default;
    Grid(int w, int h, GeoTransform t, double nd, Unit u)
        : width(w), height(h), transform(t), nodata(nd), unit(u) {
        if (w < 1 || h < 1) throw DataError("grid dimensions must be at least 1x1");
        values.assign(static_cast<std::size_t>(w) * h, nd);
    }

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    double& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }

    bool is_nodata(double v) const { return bit_equal(v, nodata); }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }

    // World coordinates of a cell center.
    double cell_x(int col) const {
        return transform.origin_x + (col + 0.5) * transform.cell_size;
    }
    double cell_y(int row) const {
        return transform.origin_y + (height - row - 0.5) * transform.cell_size;
    }

    // Cell containing a world point; may be out of bounds.
    int col_of(double x) const {
        return static_cast<int>(std::floor((x - transform.origin_x) / transform.cell_size));
    }
    int row_of(double y) const {
        return height - 1 -
               static_cast<int>(std::floor((y - transform.origin_y) / transform.cell_size));
    }
};

// Georeferenced raster of class ids: 0 = background, 1 = live coral,
// 2 = dead coral, 255 = nodata.
struct ClassMask {
    static constexpr std::uint8_t nodata = 255;

    int width = 0;
    int height = 0;
    GeoTransform transform;
    std::vector<std::uint8_t> ids;

    ClassMask() = default;
    ClassMask(int w, int h, GeoTransform t)
        : width(w), height(h), transform(t) {
        if (w < 1 || h < 1) throw DataError("mask dimensions must be at least 1x1");
        ids.assign(static_cast<std::size_t>(w) * h, nodata);
    }

    std::uint8_t at(int row, int col) const {
        return ids[static_cast<std::size_t>(row) * width + col];
    }
    std::uint8_t& at(int row, int col) {
        return ids[static_cast<std::size_t>(row) * width + col];
    }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }

    int col_of(double x) const {
        return static_cast<int>(std::floor((x - transform.origin_x) / transform.cell_size));
    }
    int row_of(double y) const {
        return height - 1 -
               static_cast<int>(std::floor((y - transform.origin_y) / transform.cell_size));
    }
};

// True iff both rasters cover the same cells: equal dimensions and transforms
// matching within 1e-9 m.
template <typename A, typename B>
inline bool check_aligned(const A& a, const B& b) {
    return a.width == b.width && a.height == b.height &&
           transforms_equal(a.transform, b.transform);
}

template <typename A, typename B>
inline void require_aligned(const A& a, const B& b, const char* what) {
    if (!check_aligned(a, b)) {
        throw DataError(std::string(what) + ": inputs are not aligned");
    }
}

}  // namespace reefkit
