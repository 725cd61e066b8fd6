#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "reefkit/common.hpp"

namespace reefkit {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

// Triangular mesh in meters. face_class / face_color are either empty or hold
// one entry per face.
struct Mesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<std::int32_t, 3>> faces;
    std::vector<std::uint8_t> face_class;
    std::vector<Rgb> face_color;

    bool has_face_class() const { return !face_class.empty(); }
    bool has_face_color() const { return !face_color.empty(); }

    bool operator==(const Mesh&) const = default;
};

inline void validate_mesh(const Mesh& m) {
    const auto n = static_cast<std::int32_t>(m.vertices.size());
    for (const auto& f : m.faces) {
        for (std::int32_t idx : f) {
            if (idx < 0 || idx >= n) throw DataError("face index out of range");
        }
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            throw DataError("face has repeated vertex indices");
        }
    }
    if (m.has_face_class() && m.face_class.size() != m.faces.size()) {
        throw DataError("face_class must have one entry per face");
    }
    if (m.has_face_color() && m.face_color.size() != m.faces.size()) {
        throw DataError("face_color must have one entry per face");
    }
}

}  // namespace reefkit
