#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "reefkit/mesh_texture.hpp"
#include "reefkit/ply.hpp"

using namespace reefkit;

namespace {

// two triangles forming a unit quad at z = 0
Mesh quad_mesh() {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

Mesh random_mesh(std::mt19937& rng, bool with_color, bool with_class) {
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_int_distribution<int> byte(0, 255);
    Mesh m;
    int n = 3 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
        m.vertices.push_back({coord(rng), coord(rng), coord(rng)});
    }
    int faces = 1 + static_cast<int>(rng() % 30);
    std::uniform_int_distribution<int> vi(0, n - 1);
    for (int i = 0; i < faces; ++i) {
        int a = vi(rng), b = vi(rng), c = vi(rng);
        if (a == b || b == c || a == c) {
            --i;
            continue;
        }
        m.faces.push_back({a, b, c});
        if (with_color) {
            m.face_color.push_back(Rgb{static_cast<std::uint8_t>(byte(rng)),
                                       static_cast<std::uint8_t>(byte(rng)),
                                       static_cast<std::uint8_t>(byte(rng))});
        }
        if (with_class) {
            m.face_class.push_back(static_cast<std::uint8_t>(byte(rng)));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("a two-triangle quad mesh round-trips exactly") {
    Mesh m = quad_mesh();
    Mesh again = parse_ply(ply_to_string(m));
    REQUIRE(again == m);
}

TEST_CASE("randomized meshes round-trip through ASCII PLY") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        Mesh m = random_mesh(rng, trial % 2 == 0, trial % 3 == 0);
        Mesh again = parse_ply(ply_to_string(m));
        REQUIRE(again == m);
    }
}

TEST_CASE("ply reader rejects what it cannot represent") {
    SECTION("binary ply") {
        REQUIRE_THROWS_AS(parse_ply("ply\nformat binary_little_endian 1.0\nend_header\n"),
                          ParseError);
    }
    SECTION("face index out of range") {
        REQUIRE_THROWS_AS(parse_ply("ply\nformat ascii 1.0\n"
                                    "element vertex 3\n"
                                    "property float x\nproperty float y\nproperty float z\n"
                                    "element face 1\n"
                                    "property list uchar int vertex_indices\n"
                                    "end_header\n"
                                    "0 0 0\n1 0 0\n0 1 0\n"
                                    "3 0 1 3\n"),
                          ParseError);
    }
    SECTION("non-triangle face") {
        REQUIRE_THROWS_AS(parse_ply("ply\nformat ascii 1.0\n"
                                    "element vertex 4\n"
                                    "property float x\nproperty float y\nproperty float z\n"
                                    "element face 1\n"
                                    "property list uchar int vertex_indices\n"
                                    "end_header\n"
                                    "0 0 0\n1 0 0\n1 1 0\n0 1 0\n"
                                    "4 0 1 2 3\n"),
                          ParseError);
    }
    SECTION("unsupported vertex property") {
        try {
            parse_ply("ply\nformat ascii 1.0\n"
                      "element vertex 1\n"
                      "property float x\nproperty float y\nproperty float z\n"
                      "property float nx\n"
                      "element face 0\n"
                      "property list uchar int vertex_indices\n"
                      "end_header\n"
                      "0 0 0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            REQUIRE(std::string(e.what()).find("unsupported vertex property") !=
                    std::string::npos);
        }
    }
    SECTION("unsupported element") {
        REQUIRE_THROWS_AS(parse_ply("ply\nformat ascii 1.0\n"
                                    "element edge 1\n"
                                    "property int vertex1\n"
                                    "end_header\n"),
                          ParseError);
    }
    SECTION("wrong vertex count") {
        REQUIRE_THROWS_AS(parse_ply("ply\nformat ascii 1.0\n"
                                    "element vertex 2\n"
                                    "property float x\nproperty float y\nproperty float z\n"
                                    "element face 0\n"
                                    "property list uchar int vertex_indices\n"
                                    "end_header\n"
                                    "0 0 0\n"),
                          ParseError);
    }
}

TEST_CASE("project_mask assigns classes and colors by centroid cell") {
    // 2x1 mask: west cell live (1), east cell dead (2); cell size 1
    ClassMask mask(2, 1, GeoTransform{0, 0, 1});
    mask.at(0, 0) = 1;
    mask.at(0, 1) = 2;

    Mesh m;
    m.vertices = {
        {0.1, 0.1, 0}, {0.4, 0.1, 0}, {0.25, 0.4, 0},  // centroid x = 0.25: west
        {1.1, 0.1, 0}, {1.9, 0.1, 0}, {1.5, 0.8, 0},   // centroid x = 1.5: east
        {5.0, 5.0, 0}, {6.0, 5.0, 0}, {5.5, 6.0, 0},   // outside the extent
    };
    m.faces = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};

    Palette palette = default_palette();
    Mesh textured = project_mask(m, mask, palette);

    REQUIRE(textured.vertices == m.vertices);
    REQUIRE(textured.faces == m.faces);
    REQUIRE(textured.face_class == std::vector<std::uint8_t>{1, 2, 255});
    REQUIRE(textured.face_color[0] == palette.at(1));
    REQUIRE(textured.face_color[1] == palette.at(2));
    REQUIRE(textured.face_color[2] == palette.at(255));
}

TEST_CASE("project_mask maps nodata cells to the neutral class") {
    ClassMask mask(1, 1, GeoTransform{0, 0, 1});
    mask.at(0, 0) = ClassMask::nodata;
    Mesh m;
    m.vertices = {{0.2, 0.2, 0}, {0.8, 0.2, 0}, {0.5, 0.8, 0}};
    m.faces = {{0, 1, 2}};
    Mesh textured = project_mask(m, mask);
    REQUIRE(textured.face_class[0] == 255);
}

TEST_CASE("project_mask requires overlap and palette coverage") {
    ClassMask mask(1, 1, GeoTransform{0, 0, 1});
    mask.at(0, 0) = 1;

    Mesh far_away;
    far_away.vertices = {{100, 100, 0}, {101, 100, 0}, {100.5, 101, 0}};
    far_away.faces = {{0, 1, 2}};
    REQUIRE_THROWS_AS(project_mask(far_away, mask), DataError);

    Mesh inside;
    inside.vertices = {{0.2, 0.2, 0}, {0.8, 0.2, 0}, {0.5, 0.8, 0}};
    inside.faces = {{0, 1, 2}};
    Palette missing_live{{0, Rgb{0, 0, 0}}, {255, Rgb{80, 80, 80}}};
    REQUIRE_THROWS_AS(project_mask(inside, mask, missing_live), DataError);
}

TEST_CASE("translating mesh and mask together preserves face classes") {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> coord(0.0, 4.0);
    std::uniform_int_distribution<int> cls(0, 2);

    ClassMask mask(4, 4, GeoTransform{0, 0, 1});
    for (auto& id : mask.ids) id = static_cast<std::uint8_t>(cls(rng));

    Mesh m;
    for (int i = 0; i < 30; ++i) {
        double x = coord(rng), y = coord(rng);
        int base = static_cast<int>(m.vertices.size());
        m.vertices.push_back({x, y, 0});
        m.vertices.push_back({x + 0.05, y, 0});
        m.vertices.push_back({x, y + 0.05, 0});
        m.faces.push_back({base, base + 1, base + 2});
    }

    Mesh textured = project_mask(m, mask);

    const double dx = 12.75, dy = -3.5;
    Mesh shifted = m;
    for (auto& v : shifted.vertices) {
        v[0] += dx;
        v[1] += dy;
    }
    ClassMask shifted_mask = mask;
    shifted_mask.transform.origin_x += dx;
    shifted_mask.transform.origin_y += dy;

    Mesh shifted_textured = project_mask(shifted, shifted_mask);
    REQUIRE(shifted_textured.face_class == textured.face_class);
    REQUIRE(shifted_textured.face_color == textured.face_color);
}

TEST_CASE("diverging colormap anchors and midpoints") {
    const double limit = 0.05;
    REQUIRE(diverging_color(0.0, limit) == Rgb{255, 255, 255});
    REQUIRE(diverging_color(limit, limit) == Rgb{255, 255, 0});
    REQUIRE(diverging_color(limit * 2, limit) == Rgb{255, 255, 0});  // clamped
    REQUIRE(diverging_color(-limit, limit) == Rgb{0, 0, 255});
    REQUIRE(diverging_color(-limit * 3, limit) == Rgb{0, 0, 255});
    // +limit/2: halfway white -> yellow, blue channel 127.5 rounds half-up to 128
    REQUIRE(diverging_color(limit / 2, limit) == Rgb{255, 255, 128});
    REQUIRE(diverging_color(-limit / 2, limit) == Rgb{128, 128, 255});
}

TEST_CASE("project_scalar colors faces from the grid") {
    Grid values(2, 1, GeoTransform{0, 0, 1}, -9999.0, Unit::meters);
    values.at(0, 0) = 0.0;
    values.at(0, 1) = values.nodata;

    Mesh m;
    m.vertices = {
        {0.2, 0.2, 0}, {0.8, 0.2, 0}, {0.5, 0.8, 0},  // over the 0.0 cell
        {1.2, 0.2, 0}, {1.8, 0.2, 0}, {1.5, 0.8, 0},  // over the nodata cell
    };
    m.faces = {{0, 1, 2}, {3, 4, 5}};

    Mesh textured = project_scalar(m, values, 0.05);
    REQUIRE(textured.face_color[0] == Rgb{255, 255, 255});
    REQUIRE(textured.face_color[1] == Rgb{80, 80, 80});

    REQUIRE_THROWS_AS(project_scalar(m, values, 0.0), DataError);
}

TEST_CASE("validate_mesh catches bad topology") {
    Mesh m = quad_mesh();
    m.faces.push_back({0, 0, 1});
    REQUIRE_THROWS_AS(validate_mesh(m), DataError);

    Mesh m2 = quad_mesh();
    m2.faces.push_back({0, 1, 9});
    REQUIRE_THROWS_AS(validate_mesh(m2), DataError);
}
