#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace reefkit {

// Input violates a documented contract (misaligned grids, empty selection,
// out-of-range class ids, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line/column of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error(message + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"),
          line(line),
          column(column) {}

    int line;
    int column;
};

// Compensated (Kahan) accumulator; keeps large reductions order-stable.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline bool bit_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// Shortest decimal form that parses back to the identical double.
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace reefkit
