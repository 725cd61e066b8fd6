#pragma once

#include <algorithm>
#include <cmath>
#include <map>

#include "reefkit/grid.hpp"
#include "reefkit/mesh.hpp"

// Orthographic texturing of meshes from rasters: per-face class + palette
// color from a class mask, or a diverging blue-white-yellow color from a
// scalar grid. Faces are attributed by their centroid: the mask cell the
// centroid (x, y) falls in. Vertex coordinates and topology are never touched.

namespace reefkit {

using Palette = std::map<int, Rgb>;

inline Palette default_palette() {
    return Palette{
        {0, Rgb{160, 160, 160}},    // background
        {1, Rgb{222, 49, 99}},      // live coral, dark pink
        {2, Rgb{255, 182, 193}},    // dead coral, light pink
        {255, Rgb{80, 80, 80}},     // outside the mask / unlabeled
    };
}

namespace detail {

inline std::array<double, 2> face_centroid_xy(const Mesh& mesh,
                                              const std::array<std::int32_t, 3>& f) {
    const auto& a = mesh.vertices[f[0]];
    const auto& b = mesh.vertices[f[1]];
    const auto& c = mesh.vertices[f[2]];
    return {(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0};
}

inline int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace detail

// Symmetric diverging map: -limit -> blue (0,0,255), 0 -> white
// (255,255,255), +limit -> yellow (255,255,0); linear per segment,
// components rounded half-up.
inline Rgb diverging_color(double value, double limit) {
    double t = std::clamp(value / limit, -1.0, 1.0);
    if (t < 0.0) {
        int s = detail::round_half_up(255.0 * (1.0 + t));
        return Rgb{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(s), 255};
    }
    int b = detail::round_half_up(255.0 * (1.0 - t));
    return Rgb{255, 255, static_cast<std::uint8_t>(b)};
}

inline Mesh project_mask(const Mesh& mesh, const ClassMask& mask,
                         const Palette& palette = default_palette()) {
    validate_mesh(mesh);
    auto color_of = [&](int cls) {
        auto it = palette.find(cls);
        if (it == palette.end()) {
            throw DataError("palette has no color for class " + std::to_string(cls));
        }
        return it->second;
    };

    Mesh out = mesh;
    out.face_class.assign(mesh.faces.size(), ClassMask::nodata);
    out.face_color.assign(mesh.faces.size(), color_of(ClassMask::nodata));

    std::size_t hits = 0;
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        auto [cx, cy] = detail::face_centroid_xy(mesh, mesh.faces[i]);
        int row = mask.row_of(cy);
        int col = mask.col_of(cx);
        if (!mask.in_bounds(row, col)) continue;
        ++hits;
        std::uint8_t id = mask.at(row, col);
        if (id == ClassMask::nodata) continue;
        out.face_class[i] = id;
        out.face_color[i] = color_of(id);
    }
    if (hits == 0) throw DataError("no face centroids fall inside the mask extent");
    return out;
}

inline Mesh project_scalar(const Mesh& mesh, const Grid& values, double limit) {
    validate_mesh(mesh);
    if (!(limit > 0.0)) throw DataError("limit must be > 0");

    const Rgb neutral{80, 80, 80};
    Mesh out = mesh;
    out.face_color.assign(mesh.faces.size(), neutral);

    std::size_t hits = 0;
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        auto [cx, cy] = detail::face_centroid_xy(mesh, mesh.faces[i]);
        int row = values.row_of(cy);
        int col = values.col_of(cx);
        if (!values.in_bounds(row, col)) continue;
        ++hits;
        double v = values.at(row, col);
        if (values.is_nodata(v)) continue;
        out.face_color[i] = diverging_color(v, limit);
    }
    if (hits == 0) throw DataError("no face centroids fall inside the grid extent");
    return out;
}

}  // namespace reefkit
