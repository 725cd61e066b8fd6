#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "reefkit/grid.hpp"

// ESRI ASCII grid I/O. Header keys (any order, case-insensitive):
// ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value; followed by
// nrows rows of ncols numbers, north row first. Parsing is locale-independent
// (dot decimal separator); writing uses shortest round-trip formatting so
// read(write(g)) reproduces g exactly.

namespace reefkit {

namespace detail {

struct Token {
    std::string_view text;
    int line = 0;
    int column = 0;
};

class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    bool next(Token& out) {
        while (pos_ < text_.size() && is_space(text_[pos_])) advance();
        if (pos_ >= text_.size()) return false;
        std::size_t start = pos_;
        out.line = line_;
        out.column = column_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) advance();
        out.text = text_.substr(start, pos_ - start);
        return true;
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }
    static bool is_space(char ch) {
        return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' || ch == '\v';
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

inline double parse_double_token(const Token& t) {
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw ParseError("expected a number, got '" + std::string(t.text) + "'",
                         t.line, t.column);
    }
    return v;
}

inline long parse_int_token(const Token& t) {
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw ParseError("expected an integer, got '" + std::string(t.text) + "'",
                         t.line, t.column);
    }
    return v;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool looks_like_key(std::string_view s) {
    return !s.empty() && (std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_');
}

struct AsciiHeader {
    long ncols = 0;
    long nrows = 0;
    double xllcorner = 0.0;
    double yllcorner = 0.0;
    double cellsize = 0.0;
    double nodata = -9999.0;
    Token first_value;  // first data token, already consumed from the stream
};

inline AsciiHeader parse_ascii_header(Tokenizer& tok, double default_nodata) {
    AsciiHeader h;
    h.nodata = default_nodata;
    std::optional<long> ncols, nrows;
    std::optional<double> xll, yll, cell, nodata;

    Token t;
    while (true) {
        if (!tok.next(t)) {
            throw ParseError("unexpected end of input before grid data", tok.line(), tok.column());
        }
        if (!looks_like_key(t.text)) break;  // data section starts

        std::string key = lower(t.text);
        Token value;
        if (!tok.next(value)) {
            throw ParseError("header key '" + key + "' has no value", t.line, t.column);
        }
        auto set_once = [&](auto& slot, auto v) {
            if (slot.has_value()) {
                throw ParseError("duplicate header key '" + key + "'", t.line, t.column);
            }
            slot = v;
        };
        if (key == "ncols") {
            long v = parse_int_token(value);
            if (v < 1) throw ParseError("ncols must be >= 1", value.line, value.column);
            set_once(ncols, v);
        } else if (key == "nrows") {
            long v = parse_int_token(value);
            if (v < 1) throw ParseError("nrows must be >= 1", value.line, value.column);
            set_once(nrows, v);
        } else if (key == "xllcorner") {
            set_once(xll, parse_double_token(value));
        } else if (key == "yllcorner") {
            set_once(yll, parse_double_token(value));
        } else if (key == "cellsize") {
            double v = parse_double_token(value);
            if (!(v > 0.0)) throw ParseError("cellsize must be > 0", value.line, value.column);
            set_once(cell, v);
        } else if (key == "nodata_value") {
            set_once(nodata, parse_double_token(value));
        } else {
            throw ParseError("unknown header key '" + std::string(t.text) + "'",
                             t.line, t.column);
        }
    }

    auto require = [&](const auto& slot, const char* name) {
        if (!slot.has_value()) {
            throw ParseError(std::string("missing header key '") + name + "'", t.line, t.column);
        }
    };
    require(ncols, "ncols");
    require(nrows, "nrows");
    require(xll, "xllcorner");
    require(yll, "yllcorner");
    require(cell, "cellsize");

    h.ncols = *ncols;
    h.nrows = *nrows;
    h.xllcorner = *xll;
    h.yllcorner = *yll;
    h.cellsize = *cell;
    if (nodata) h.nodata = *nodata;
    h.first_value = t;
    return h;
}

inline void expect_no_trailing(Tokenizer& tok) {
    Token extra;
    if (tok.next(extra)) {
        throw ParseError("extra data after the last cell", extra.line, extra.column);
    }
}

}  // namespace detail

inline Grid parse_ascii_grid(std::string_view text, Unit unit = Unit::meters) {
    detail::Tokenizer tok(text);
    detail::AsciiHeader h = detail::parse_ascii_header(tok, -9999.0);

    Grid g(static_cast<int>(h.ncols), static_cast<int>(h.nrows),
           GeoTransform{h.xllcorner, h.yllcorner, h.cellsize}, h.nodata, unit);

    const std::size_t n = g.values.size();
    detail::Token t = h.first_value;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !tok.next(t)) {
            throw ParseError("expected " + std::to_string(n) + " values, found " +
                                 std::to_string(i),
                             tok.line(), tok.column());
        }
        double v = detail::parse_double_token(t);
        if (!std::isfinite(v)) {
            throw ParseError("non-finite value '" + std::string(t.text) + "'", t.line, t.column);
        }
        g.values[i] = v;
    }
    detail::expect_no_trailing(tok);
    return g;
}

inline Grid read_ascii_grid(std::istream& in, Unit unit = Unit::meters) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ascii_grid(buf.str(), unit);
}

inline void write_ascii_grid(const Grid& g, std::ostream& out) {
    out << "ncols " << g.width << '\n';
    out << "nrows " << g.height << '\n';
    out << "xllcorner " << fmt_double(g.transform.origin_x) << '\n';
    out << "yllcorner " << fmt_double(g.transform.origin_y) << '\n';
    out << "cellsize " << fmt_double(g.transform.cell_size) << '\n';
    out << "NODATA_value " << fmt_double(g.nodata) << '\n';
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            if (c > 0) out << ' ';
            out << fmt_double(g.at(r, c));
        }
        out << '\n';
    }
}

inline std::string ascii_grid_to_string(const Grid& g) {
    std::ostringstream out;
    write_ascii_grid(g, out);
    return out.str();
}

inline ClassMask parse_class_mask(std::string_view text) {
    detail::Tokenizer tok(text);
    detail::AsciiHeader h = detail::parse_ascii_header(tok, 255.0);

    ClassMask m(static_cast<int>(h.ncols), static_cast<int>(h.nrows),
                GeoTransform{h.xllcorner, h.yllcorner, h.cellsize});
    const long nodata_id = static_cast<long>(h.nodata);

    const std::size_t n = m.ids.size();
    detail::Token t = h.first_value;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !tok.next(t)) {
            throw ParseError("expected " + std::to_string(n) + " values, found " +
                                 std::to_string(i),
                             tok.line(), tok.column());
        }
        long v = detail::parse_int_token(t);
        if (v == nodata_id || v == 255) {
            m.ids[i] = ClassMask::nodata;
        } else if (v == 0 || v == 1 || v == 2) {
            m.ids[i] = static_cast<std::uint8_t>(v);
        } else {
            throw ParseError("class id out of range: " + std::string(t.text), t.line, t.column);
        }
    }
    detail::expect_no_trailing(tok);
    return m;
}

inline ClassMask read_class_mask(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_class_mask(buf.str());
}

inline void write_class_mask(const ClassMask& m, std::ostream& out) {
    out << "ncols " << m.width << '\n';
    out << "nrows " << m.height << '\n';
    out << "xllcorner " << fmt_double(m.transform.origin_x) << '\n';
    out << "yllcorner " << fmt_double(m.transform.origin_y) << '\n';
    out << "cellsize " << fmt_double(m.transform.cell_size) << '\n';
    out << "NODATA_value 255\n";
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            if (c > 0) out << ' ';
            out << static_cast<int>(m.at(r, c));
        }
        out << '\n';
    }
}

inline std::string class_mask_to_string(const ClassMask& m) {
    std::ostringstream out;
    write_class_mask(m, out);
    return out.str();
}

}  // namespace reefkit
