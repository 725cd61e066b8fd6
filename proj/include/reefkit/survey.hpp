#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "reefkit/common.hpp"

// Survey quality control: check-point RMSE against surveyed coordinates and
// the RootSIFT descriptor transform.

namespace reefkit {

struct GcpObservation {
    std::string id;
    std::array<double, 3> measured{};   // model coordinates, meters
    std::array<double, 3> reference{};  // surveyed coordinates, meters
};

struct RmseReport {
    double horizontal = 0.0;
    double vertical = 0.0;
    double total = 0.0;
    std::int64_t n = 0;
};

inline RmseReport gcp_rmse(std::span<const GcpObservation> obs) {
    if (obs.empty()) throw DataError("gcp_rmse needs at least one observation");

    KahanSum hsq, vsq;
    for (const GcpObservation& o : obs) {
        double dx = o.measured[0] - o.reference[0];
        double dy = o.measured[1] - o.reference[1];
        double dz = o.measured[2] - o.reference[2];
        if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(dz)) {
            throw DataError("non-finite GCP coordinates");
        }
        hsq.add(dx * dx + dy * dy);
        vsq.add(dz * dz);
    }
    const auto n = static_cast<double>(obs.size());
    RmseReport r;
    r.n = static_cast<std::int64_t>(obs.size());
    r.horizontal = std::sqrt(hsq.value() / n);
    r.vertical = std::sqrt(vsq.value() / n);
    r.total = std::sqrt((hsq.value() + vsq.value()) / n);
    return r;
}

inline constexpr int sift_descriptor_length = 128;

// L1-normalize, then take the element-wise square root; the result has unit
// L2 norm and is invariant to positive scaling of the input.
inline std::vector<double> rootsift(std::span<const double> descriptor) {
    if (descriptor.size() != sift_descriptor_length) {
        throw DataError("descriptor must have 128 elements");
    }
    KahanSum l1;
    for (double v : descriptor) {
        if (v < 0.0) throw DataError("descriptor elements must be non-negative");
        l1.add(v);
    }
    if (!(l1.value() > 0.0)) throw DataError("descriptor must have a positive element");

    std::vector<double> out(descriptor.size());
    const double inv = 1.0 / l1.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::sqrt(descriptor[i] * inv);
    }
    return out;
}

// CSV rows id,mx,my,mz,rx,ry,rz in meters; an optional "id,..." header row is
// skipped.
inline std::vector<GcpObservation> read_gcp_csv(std::istream& in) {
    std::vector<GcpObservation> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (line_no == 1 && !fields.empty() && fields[0] == "id") continue;
        if (fields.size() != 7) {
            throw ParseError("expected 7 comma-separated fields", line_no, 1);
        }

        GcpObservation o;
        o.id = fields[0];
        for (int i = 0; i < 6; ++i) {
            const std::string& f = fields[i + 1];
            double v = 0.0;
            std::size_t start = f.find_first_not_of(" \t");
            if (start == std::string::npos) throw ParseError("empty coordinate field", line_no, 1);
            const char* begin = f.data() + start;
            const char* end = f.data() + f.find_last_not_of(" \t") + 1;
            if (*begin == '+') ++begin;
            auto [p, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || p != end || !std::isfinite(v)) {
                throw ParseError("expected a number, got '" + f + "'", line_no, i + 2);
            }
            (i < 3 ? o.measured[i] : o.reference[i - 3]) = v;
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace reefkit
