#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reefkit/change.hpp"
#include "reefkit/metrics.hpp"
#include "reefkit/survey.hpp"
#include "reefkit/tiling.hpp"

// JSON / CSV serialization of analysis results. nlohmann::json keeps object
// keys sorted, so dumps are deterministic for deterministic inputs.

namespace reefkit {

using json = nlohmann::json;

inline json to_json(const SummaryStats& s) {
    return json{{"count", s.count}, {"mean", s.mean},   {"median", s.median},
                {"q1", s.q1},       {"q3", s.q3},       {"min", s.min},
                {"max", s.max},     {"median_rule", "lower"}};
}

inline json to_json(const Histogram& h) {
    return json{{"bin_width", h.bin_width}, {"origin", h.origin}, {"counts", h.counts}};
}

inline json to_json(const ViolinData& v) {
    json j{{"class", v.class_id}, {"count", v.stats.count}};
    if (v.window) j["window"] = *v.window;
    if (v.stats.count > 0) {
        j["stats"] = to_json(v.stats);
        json density = json::array();
        for (const auto& [value, d] : v.density) {
            density.push_back(json::array({value, d}));
        }
        j["density"] = density;
    }
    return j;
}

inline json to_json(const ConfusionMatrix& m) {
    json rows = json::array();
    for (int t = 0; t < m.classes; ++t) {
        json row = json::array();
        for (int p = 0; p < m.classes; ++p) row.push_back(m.at(t, p));
        rows.push_back(row);
    }
    json per_class = json::array();
    for (int c = 0; c < m.classes; ++c) {
        json entry{{"class", c}};
        if (auto acc = class_accuracy(m, c)) entry["accuracy"] = *acc;
        if (auto iou = class_iou(m, c)) entry["iou"] = *iou;
        per_class.push_back(entry);
    }
    return json{{"classes", m.classes},
                {"counts", rows},
                {"total", m.total()},
                {"per_class", per_class},
                {"mpa", mpa(m)},
                {"miou", miou(m)}};
}

inline json to_json(const RmseReport& r) {
    return json{{"n", r.n},
                {"horizontal_m", r.horizontal},
                {"vertical_m", r.vertical},
                {"total_m", r.total}};
}

inline json to_json(const TileSpec& t) {
    return json{{"row0", t.row0}, {"col0", t.col0}, {"size", t.size}, {"fold", t.fold}};
}

inline json to_json(const AugmentTransform& t) {
    return json{{"rotation_deg", t.rotation_deg},
                {"hflip", t.hflip},
                {"row0", t.row0},
                {"col0", t.col0}};
}

// One row per class: class,count,mean,median,q1,q3,min,max
inline std::string stats_csv(const std::vector<std::pair<std::string, SummaryStats>>& rows) {
    std::string out = "class,count,mean,median,q1,q3,min,max\n";
    for (const auto& [label, s] : rows) {
        out += label + ',' + std::to_string(s.count) + ',' + fmt_double(s.mean) + ',' +
               fmt_double(s.median) + ',' + fmt_double(s.q1) + ',' + fmt_double(s.q3) + ',' +
               fmt_double(s.min) + ',' + fmt_double(s.max) + '\n';
    }
    return out;
}

inline std::string metrics_csv(const ConfusionMatrix& m) {
    std::string out = "class,accuracy,iou\n";
    for (int c = 0; c < m.classes; ++c) {
        auto acc = class_accuracy(m, c);
        auto iou = class_iou(m, c);
        out += std::to_string(c) + ',' + (acc ? fmt_double(*acc) : "") + ',' +
               (iou ? fmt_double(*iou) : "") + '\n';
    }
    out += "mean," + fmt_double(mpa(m)) + ',' + fmt_double(miou(m)) + '\n';
    return out;
}

}  // namespace reefkit
