#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "reefkit/ascii_grid.hpp"  // detail tokenizer
#include "reefkit/mesh.hpp"

// ASCII PLY mesh I/O. Supported schema: vertex properties x, y, z; face
// property list vertex_indices, optionally followed by red/green/blue (uchar)
// and class (uchar). Anything else is rejected with a named error so foreign
// files fail loudly instead of being half-read.

namespace reefkit {

namespace detail {

struct PlyLine {
    std::string text;
    int number = 0;
};

inline bool next_line(std::istream& in, PlyLine& line) {
    while (std::getline(in, line.text)) {
        ++line.number;
        if (!line.text.empty() && line.text.back() == '\r') line.text.pop_back();
        // skip blank lines between header fields
        if (line.text.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline bool is_float_type(const std::string& t) { return t == "float" || t == "float32"; }
inline bool is_uchar_type(const std::string& t) { return t == "uchar" || t == "uint8"; }
inline bool is_int_type(const std::string& t) { return t == "int" || t == "int32"; }

}  // namespace detail

inline Mesh read_ply(std::istream& in) {
    using detail::PlyLine;
    PlyLine line;

    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(msg, line.number, 1);
    };

    if (!detail::next_line(in, line) || line.text != "ply") throw fail("not a PLY file");
    if (!detail::next_line(in, line)) throw fail("missing format line");
    if (line.text.rfind("format binary", 0) == 0) throw fail("binary PLY is not supported");
    if (line.text != "format ascii 1.0") throw fail("unsupported PLY format line");

    long n_vertices = -1;
    long n_faces = -1;
    bool has_color = false;
    bool has_class = false;
    int vertex_props = 0;
    int color_props = 0;

    enum class Section { none, vertex, face } section = Section::none;
    static const char* vertex_names[3] = {"x", "y", "z"};
    static const char* color_names[3] = {"red", "green", "blue"};

    while (true) {
        if (!detail::next_line(in, line)) throw fail("missing end_header");
        if (line.text == "end_header") break;
        std::vector<std::string> tok = detail::split_ws(line.text);
        if (tok[0] == "comment") continue;
        if (tok[0] == "element") {
            if (tok.size() != 3) throw fail("malformed element line");
            long count = 0;
            try {
                count = std::stol(tok[2]);
            } catch (...) {
                throw fail("malformed element count");
            }
            if (count < 0) throw fail("malformed element count");
            if (tok[1] == "vertex" && n_vertices < 0) {
                n_vertices = count;
                section = Section::vertex;
            } else if (tok[1] == "face" && n_faces < 0 && n_vertices >= 0) {
                n_faces = count;
                section = Section::face;
            } else {
                throw fail("unsupported element '" + tok[1] + "'");
            }
            continue;
        }
        if (tok[0] == "property") {
            if (section == Section::vertex) {
                if (tok.size() != 3 || !detail::is_float_type(tok[1]) || vertex_props >= 3 ||
                    tok[2] != vertex_names[vertex_props]) {
                    throw fail("unsupported vertex property '" + line.text + "'");
                }
                ++vertex_props;
            } else if (section == Section::face) {
                if (tok.size() == 5 && tok[1] == "list") {
                    if (!detail::is_uchar_type(tok[2]) || !detail::is_int_type(tok[3]) ||
                        (tok[4] != "vertex_indices" && tok[4] != "vertex_index")) {
                        throw fail("unsupported face list property '" + line.text + "'");
                    }
                } else if (tok.size() == 3 && detail::is_uchar_type(tok[1]) &&
                           color_props < 3 && tok[2] == color_names[color_props]) {
                    ++color_props;
                    has_color = color_props == 3;
                } else if (tok.size() == 3 && detail::is_uchar_type(tok[1]) && tok[2] == "class") {
                    has_class = true;
                } else {
                    throw fail("unsupported face property '" + line.text + "'");
                }
            } else {
                throw fail("property before any element");
            }
            continue;
        }
        throw fail("unsupported header line '" + line.text + "'");
    }
    if (n_vertices < 0) throw fail("missing vertex element");
    if (n_faces < 0) throw fail("missing face element");
    if (vertex_props != 3) throw fail("vertex element must declare x, y, z");
    if (color_props != 0 && color_props != 3) {
        throw fail("face color requires red, green and blue");
    }

    // Body: whitespace-separated tokens, line structure not significant.
    std::ostringstream rest;
    rest << in.rdbuf();
    std::string body = rest.str();
    detail::Tokenizer tok(body);
    const int header_lines = line.number;
    auto next_token = [&](const char* what) {
        detail::Token t;
        if (!tok.next(t)) {
            throw ParseError(std::string("unexpected end of data reading ") + what,
                             header_lines + tok.line(), tok.column());
        }
        t.line += header_lines;
        return t;
    };

    Mesh mesh;
    mesh.vertices.reserve(n_vertices);
    for (long i = 0; i < n_vertices; ++i) {
        std::array<double, 3> v{};
        for (double& coord : v) coord = detail::parse_double_token(next_token("a vertex"));
        mesh.vertices.push_back(v);
    }

    mesh.faces.reserve(n_faces);
    if (has_color) mesh.face_color.reserve(n_faces);
    if (has_class) mesh.face_class.reserve(n_faces);
    for (long i = 0; i < n_faces; ++i) {
        detail::Token t = next_token("a face");
        long count = detail::parse_int_token(t);
        if (count != 3) {
            throw ParseError("only triangular faces are supported", t.line, t.column);
        }
        std::array<std::int32_t, 3> f{};
        for (std::int32_t& idx : f) {
            detail::Token vt = next_token("a face index");
            long raw = detail::parse_int_token(vt);
            if (raw < 0 || raw >= n_vertices) {
                throw ParseError("face index out of range", vt.line, vt.column);
            }
            idx = static_cast<std::int32_t>(raw);
        }
        mesh.faces.push_back(f);
        if (has_color) {
            Rgb rgb;
            for (std::uint8_t* ch : {&rgb.r, &rgb.g, &rgb.b}) {
                detail::Token ct = next_token("a color component");
                long raw = detail::parse_int_token(ct);
                if (raw < 0 || raw > 255) {
                    throw ParseError("color component out of range", ct.line, ct.column);
                }
                *ch = static_cast<std::uint8_t>(raw);
            }
            mesh.face_color.push_back(rgb);
        }
        if (has_class) {
            detail::Token ct = next_token("a class id");
            long raw = detail::parse_int_token(ct);
            if (raw < 0 || raw > 255) {
                throw ParseError("class id out of range", ct.line, ct.column);
            }
            mesh.face_class.push_back(static_cast<std::uint8_t>(raw));
        }
    }
    detail::Token extra;
    if (tok.next(extra)) {
        throw ParseError("extra data after the last face", header_lines + extra.line, extra.column);
    }
    validate_mesh(mesh);
    return mesh;
}

inline Mesh parse_ply(const std::string& text) {
    std::istringstream in(text);
    return read_ply(in);
}

inline void write_ply(const Mesh& mesh, std::ostream& out) {
    validate_mesh(mesh);
    out << "ply\n";
    out << "format ascii 1.0\n";
    out << "element vertex " << mesh.vertices.size() << '\n';
    out << "property float x\n";
    out << "property float y\n";
    out << "property float z\n";
    out << "element face " << mesh.faces.size() << '\n';
    out << "property list uchar int vertex_indices\n";
    if (mesh.has_face_color()) {
        out << "property uchar red\n";
        out << "property uchar green\n";
        out << "property uchar blue\n";
    }
    if (mesh.has_face_class()) {
        out << "property uchar class\n";
    }
    out << "end_header\n";
    for (const auto& v : mesh.vertices) {
        out << fmt_double(v[0]) << ' ' << fmt_double(v[1]) << ' ' << fmt_double(v[2]) << '\n';
    }
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const auto& f = mesh.faces[i];
        out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2];
        if (mesh.has_face_color()) {
            const Rgb& c = mesh.face_color[i];
            out << ' ' << int(c.r) << ' ' << int(c.g) << ' ' << int(c.b);
        }
        if (mesh.has_face_class()) {
            out << ' ' << int(mesh.face_class[i]);
        }
        out << '\n';
    }
}

inline std::string ply_to_string(const Mesh& mesh) {
    std::ostringstream out;
    write_ply(mesh, out);
    return out.str();
}

}  // namespace reefkit
