// reefkit command line front end: binds the raster, mesh and survey-QC
// modules into reproducible runs. Every subcommand writes its artifacts
// atomically (temp file + rename) plus a manifest.json recording parameters
// and content hashes, so identical inputs give byte-identical outputs.
//
// Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input data.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reefkit/ascii_grid.hpp"
#include "reefkit/change.hpp"
#include "reefkit/mesh_texture.hpp"
#include "reefkit/metrics.hpp"
#include "reefkit/ply.hpp"
#include "reefkit/reports.hpp"
#include "reefkit/sha256.hpp"
#include "reefkit/survey.hpp"
#include "reefkit/tiling.hpp"
#include "reefkit/version.hpp"
#include "reefkit/vrm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // input paths
    std::string dsm;
    std::string dsm_earlier;
    std::string dsm_later;
    std::string mask;
    std::string mesh;
    std::string gcp;
    // parameters
    std::vector<int> windows = {5, 7, 11, 21, 31, 51, 71, 101, 131};
    std::string kernel = "sat";
    double limit = 0.050;
    int tile = 448;
    int stride = 224;
    int folds = 5;
    std::uint64_t seed = 0;
    double mu = 0.4;
    double bin_width = 0.005;
    double min_valid_fraction = 0.5;
    int block = 0;  // 0 = use the tile size
    int augment = 0;
    int class_id = -1;  // -1 = all classes
    std::string palette_path;
    std::string out = "out";
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw reefkit::DataError("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw reefkit::DataError("config file " + path + ": " + e.what());
    }

    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key) && !j[key].is_null()) slot = j[key].get<std::decay_t<decltype(slot)>>();
    };
    get("dsm", cfg.dsm);
    get("dsm_earlier", cfg.dsm_earlier);
    get("dsm_later", cfg.dsm_later);
    get("mask", cfg.mask);
    get("mesh", cfg.mesh);
    get("gcp", cfg.gcp);
    get("windows", cfg.windows);
    get("kernel", cfg.kernel);
    get("limit", cfg.limit);
    get("tile", cfg.tile);
    get("stride", cfg.stride);
    get("folds", cfg.folds);
    get("seed", cfg.seed);
    get("mu", cfg.mu);
    get("bin_width", cfg.bin_width);
    get("min_valid_fraction", cfg.min_valid_fraction);
    get("block", cfg.block);
    get("augment", cfg.augment);
    get("class", cfg.class_id);
    get("palette", cfg.palette_path);
    get("out", cfg.out);
}

void validate_config(const RunConfig& cfg) {
    if (cfg.mu < 0.0) throw UsageError("mu must be >= 0");
    for (int w : cfg.windows) {
        if (w < 3 || w % 2 == 0) throw UsageError("windows must be odd integers >= 3");
    }
    if (cfg.stride < 1 || cfg.tile < cfg.stride) throw UsageError("need tile >= stride >= 1");
    if (cfg.kernel != "naive" && cfg.kernel != "sat") {
        throw UsageError("kernel must be 'naive' or 'sat'");
    }
    if (!(cfg.limit > 0.0)) throw UsageError("limit must be > 0");
    if (!(cfg.bin_width > 0.0)) throw UsageError("bin_width must be > 0");
    if (cfg.folds < 2) throw UsageError("folds must be >= 2");
    if (cfg.augment < 0) throw UsageError("augment must be >= 0");
}

json parameters_json(const RunConfig& cfg) {
    return json{{"windows", cfg.windows},
                {"kernel", cfg.kernel},
                {"limit", cfg.limit},
                {"tile", cfg.tile},
                {"stride", cfg.stride},
                {"folds", cfg.folds},
                {"seed", cfg.seed},
                {"mu", cfg.mu},
                {"bin_width", cfg.bin_width},
                {"min_valid_fraction", cfg.min_valid_fraction},
                {"block", cfg.block == 0 ? cfg.tile : cfg.block},
                {"augment", cfg.augment},
                {"class", cfg.class_id}};
}

// Collects artifacts in memory, then writes each one atomically and finishes
// with a manifest of input/output content hashes.
class Run {
public:
    Run(std::string subcommand, const RunConfig& cfg)
        : subcommand_(std::move(subcommand)), out_dir_(cfg.out) {
        manifest_["tool"] = "reefkit";
        manifest_["version"] = reefkit::version;
        manifest_["subcommand"] = subcommand_;
        manifest_["parameters"] = parameters_json(cfg);
        manifest_["inputs"] = json::array();
    }

    std::string load_input(const std::string& role, const std::string& path) {
        if (path.empty()) {
            throw UsageError("subcommand '" + subcommand_ + "' needs --" + role);
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) throw reefkit::DataError("cannot read input file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        manifest_["inputs"].push_back(
            json{{"role", role}, {"path", path}, {"sha256", reefkit::sha256_hex(text)}});
        return text;
    }

    void add_artifact(const std::string& name, std::string content) {
        artifacts_.emplace_back(name, std::move(content));
    }

    void finish() {
        fs::create_directories(out_dir_);
        json outputs = json::array();
        for (const auto& [name, content] : artifacts_) {
            write_atomic(name, content);
            outputs.push_back(json{{"path", name}, {"sha256", reefkit::sha256_hex(content)}});
        }
        manifest_["outputs"] = outputs;
        write_atomic("manifest.json", manifest_.dump(2) + "\n");
    }

private:
    void write_atomic(const std::string& name, const std::string& content) {
        fs::path final_path = out_dir_ / name;
        fs::path tmp_path = out_dir_ / (name + ".tmp");
        {
            std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
            if (!out) throw reefkit::DataError("cannot write " + tmp_path.string());
            out << content;
            if (!out) throw reefkit::DataError("failed writing " + tmp_path.string());
        }
        fs::rename(tmp_path, final_path);
    }

    std::string subcommand_;
    fs::path out_dir_;
    json manifest_;
    std::vector<std::pair<std::string, std::string>> artifacts_;
};

reefkit::VrmKernel kernel_of(const RunConfig& cfg) {
    return cfg.kernel == "naive" ? reefkit::VrmKernel::naive : reefkit::VrmKernel::sat;
}

std::optional<int> class_filter(const RunConfig& cfg) {
    if (cfg.class_id < 0) return std::nullopt;
    return cfg.class_id;
}

int run_vrm(const RunConfig& cfg) {
    Run run("vrm", cfg);
    reefkit::Grid dsm = reefkit::parse_ascii_grid(run.load_input("dsm", cfg.dsm));
    auto grids = reefkit::vrm_multiscale(dsm, cfg.windows, cfg.min_valid_fraction, kernel_of(cfg));
    for (const auto& [window, grid] : grids) {
        run.add_artifact("vrm_w" + std::to_string(window) + ".asc",
                         reefkit::ascii_grid_to_string(grid));
    }
    run.finish();
    return 0;
}

int run_diff(const RunConfig& cfg) {
    Run run("diff", cfg);
    reefkit::Grid earlier = reefkit::parse_ascii_grid(run.load_input("dsm-earlier", cfg.dsm_earlier));
    reefkit::Grid later = reefkit::parse_ascii_grid(run.load_input("dsm-later", cfg.dsm_later));

    reefkit::Grid diff = reefkit::dsm_diff(later, earlier);
    reefkit::Grid truncated = reefkit::truncate(diff, cfg.limit);
    run.add_artifact("diff.asc", reefkit::ascii_grid_to_string(diff));
    run.add_artifact("diff_truncated.asc", reefkit::ascii_grid_to_string(truncated));
    run.finish();
    return 0;
}

int run_stats(const RunConfig& cfg) {
    Run run("stats", cfg);
    reefkit::Grid grid = reefkit::parse_ascii_grid(run.load_input("dsm", cfg.dsm));

    std::optional<reefkit::ClassMask> mask;
    if (!cfg.mask.empty()) {
        mask = reefkit::parse_class_mask(run.load_input("mask", cfg.mask));
    }
    std::optional<int> cls = class_filter(cfg);
    if (cls && !mask) throw UsageError("--class needs --mask");

    const reefkit::ClassMask* mask_ptr = mask ? &*mask : nullptr;
    reefkit::SummaryStats overall = reefkit::masked_stats(grid, mask_ptr, cls);
    reefkit::Histogram hist = reefkit::histogram(grid, cfg.bin_width, mask_ptr, cls);

    json doc{{"input", cfg.dsm},
             {"mask", cfg.mask.empty() ? json() : json(cfg.mask)},
             {"class", cls ? json(*cls) : json()},
             {"parameters", parameters_json(cfg)},
             {"overall", reefkit::to_json(overall)},
             {"histogram", reefkit::to_json(hist)}};

    std::vector<std::pair<std::string, reefkit::SummaryStats>> csv_rows;
    csv_rows.emplace_back(cls ? std::to_string(*cls) : "all", overall);

    if (mask && !cls) {
        auto violins = reefkit::violin_data(grid, *mask, {0, 1, 2});
        json per_class = json::array();
        for (const auto& v : violins) {
            per_class.push_back(reefkit::to_json(v));
            if (v.stats.count > 0) {
                csv_rows.emplace_back(std::to_string(v.class_id), v.stats);
            }
        }
        doc["per_class"] = per_class;
    }

    run.add_artifact("stats.json", doc.dump(2) + "\n");
    run.add_artifact("stats.csv", reefkit::stats_csv(csv_rows));
    run.finish();
    return 0;
}

int run_tiles(const RunConfig& cfg) {
    Run run("tiles", cfg);
    int width = 0;
    int height = 0;
    if (!cfg.dsm.empty()) {
        reefkit::Grid g = reefkit::parse_ascii_grid(run.load_input("dsm", cfg.dsm));
        width = g.width;
        height = g.height;
    } else if (!cfg.mask.empty()) {
        reefkit::ClassMask m = reefkit::parse_class_mask(run.load_input("mask", cfg.mask));
        width = m.width;
        height = m.height;
    } else {
        throw UsageError("subcommand 'tiles' needs --dsm or --mask for the raster extent");
    }

    const int block = cfg.block == 0 ? cfg.tile : cfg.block;
    if (block < cfg.stride) throw UsageError("block must be >= stride");

    auto tiles = reefkit::tile_plan(width, height, cfg.tile, cfg.stride);
    tiles = reefkit::assign_folds(std::move(tiles), cfg.folds, block, cfg.seed);

    json tile_list = json::array();
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        json t = reefkit::to_json(tiles[i]);
        if (cfg.augment > 0) {
            auto plan = reefkit::augment_plan(tiles[i], cfg.augment,
                                              cfg.seed + static_cast<std::uint64_t>(i) + 1,
                                              cfg.stride, width, height);
            json transforms = json::array();
            for (const auto& tr : plan) transforms.push_back(reefkit::to_json(tr));
            t["augment"] = transforms;
        }
        tile_list.push_back(t);
    }

    json doc{{"width", width},   {"height", height}, {"tile", cfg.tile},
             {"stride", cfg.stride}, {"folds", cfg.folds},  {"block", block},
             {"seed", cfg.seed}, {"augment", cfg.augment}, {"tiles", tile_list}};
    run.add_artifact("tiles.json", doc.dump(2) + "\n");
    run.finish();
    return 0;
}

int run_metrics(const RunConfig& cfg, const std::string& pred_path,
                const std::string& truth_path) {
    Run run("metrics", cfg);
    reefkit::ClassMask pred = reefkit::parse_class_mask(run.load_input("pred", pred_path));
    reefkit::ClassMask truth = reefkit::parse_class_mask(run.load_input("truth", truth_path));

    reefkit::ConfusionMatrix m = reefkit::confusion(pred, truth);
    json doc = reefkit::to_json(m);
    doc["pred"] = pred_path;
    doc["truth"] = truth_path;
    run.add_artifact("metrics.json", doc.dump(2) + "\n");
    run.add_artifact("metrics.csv", reefkit::metrics_csv(m));
    run.finish();
    return 0;
}

reefkit::Palette load_palette(Run& run, const RunConfig& cfg) {
    reefkit::Palette palette = reefkit::default_palette();
    if (cfg.palette_path.empty()) return palette;

    json j;
    try {
        j = json::parse(run.load_input("palette", cfg.palette_path));
    } catch (const json::exception& e) {
        throw reefkit::DataError("palette file " + cfg.palette_path + ": " + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (!value.is_array() || value.size() != 3) {
            throw reefkit::DataError("palette entries must be [r, g, b] triples");
        }
        int id = 0;
        try {
            id = std::stoi(key);
        } catch (...) {
            throw reefkit::DataError("palette keys must be integer class ids, got '" + key + "'");
        }
        palette[id] = reefkit::Rgb{value[0].get<std::uint8_t>(), value[1].get<std::uint8_t>(),
                                   value[2].get<std::uint8_t>()};
    }
    return palette;
}

int run_project_mesh(const RunConfig& cfg) {
    Run run("project-mesh", cfg);
    if (cfg.mask.empty() == cfg.dsm.empty()) {
        throw UsageError("project-mesh needs exactly one of --mask (classes) or --dsm (scalar)");
    }

    std::istringstream mesh_in(run.load_input("mesh", cfg.mesh));
    reefkit::Mesh mesh = reefkit::read_ply(mesh_in);

    if (!cfg.mask.empty()) {
        reefkit::Palette palette = load_palette(run, cfg);
        reefkit::ClassMask mask = reefkit::parse_class_mask(run.load_input("mask", cfg.mask));
        reefkit::Mesh textured = reefkit::project_mask(mesh, mask, palette);
        run.add_artifact("mesh_classes.ply", reefkit::ply_to_string(textured));
    } else {
        reefkit::Grid values = reefkit::parse_ascii_grid(run.load_input("dsm", cfg.dsm));
        reefkit::Mesh textured = reefkit::project_scalar(mesh, values, cfg.limit);
        run.add_artifact("mesh_values.ply", reefkit::ply_to_string(textured));
    }
    run.finish();
    return 0;
}

int run_gcp_rmse(const RunConfig& cfg) {
    Run run("gcp-rmse", cfg);
    std::istringstream in(run.load_input("gcp", cfg.gcp));
    auto obs = reefkit::read_gcp_csv(in);
    reefkit::RmseReport report = reefkit::gcp_rmse(obs);
    run.add_artifact("gcp_rmse.json", reefkit::to_json(report).dump(2) + "\n");
    run.finish();
    return 0;
}

int run_rootsift(const RunConfig& cfg, const std::string& input_path) {
    Run run("rootsift", cfg);
    std::istringstream in(run.load_input("descriptors", input_path));

    std::string out_csv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::vector<double> d;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) {
            try {
                d.push_back(std::stod(field));
            } catch (...) {
                throw reefkit::ParseError("expected a number, got '" + field + "'", line_no, 1);
            }
        }
        if (d.size() != static_cast<std::size_t>(reefkit::sift_descriptor_length)) {
            throw reefkit::ParseError("descriptor must have 128 elements", line_no, 1);
        }
        auto transformed = reefkit::rootsift(d);
        for (std::size_t i = 0; i < transformed.size(); ++i) {
            if (i > 0) out_csv += ',';
            out_csv += reefkit::fmt_double(transformed[i]);
        }
        out_csv += '\n';
    }
    if (line_no == 0) throw reefkit::DataError("descriptor file is empty");
    run.add_artifact("rootsift.csv", out_csv);
    run.finish();
    return 0;
}

int dispatch(int argc, char** argv) {
    RunConfig cfg;

    // apply --config first so explicit flags can override it
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") apply_config_file(cfg, argv[i + 1]);
    }

    CLI::App app{"coral reef survey analysis toolbox"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--mu", cfg.mu, "hybrid loss weight");
    };

    CLI::App* vrm = app.add_subcommand("vrm", "multiscale vector ruggedness maps from a DSM");
    vrm->add_option("--dsm", cfg.dsm, "input DSM (.asc)");
    vrm->add_option("--windows", cfg.windows, "odd window sizes in cells")->delimiter(',');
    vrm->add_option("--kernel", cfg.kernel, "naive|sat");
    add_common(vrm);

    CLI::App* diff = app.add_subcommand("diff", "height change map between two epochs");
    diff->add_option("--dsm-earlier", cfg.dsm_earlier, "earlier DSM (.asc)");
    diff->add_option("--dsm-later", cfg.dsm_later, "later DSM (.asc)");
    diff->add_option("--limit", cfg.limit, "truncation limit in meters");
    add_common(diff);

    CLI::App* stats = app.add_subcommand("stats", "summary stats, histogram and violin data");
    stats->add_option("--dsm", cfg.dsm, "input grid (.asc)");
    stats->add_option("--mask", cfg.mask, "class mask (.asc)");
    stats->add_option("--class", cfg.class_id, "restrict to one class id");
    add_common(stats);

    CLI::App* tiles = app.add_subcommand("tiles", "sliding-window tile/fold/augment plan");
    tiles->add_option("--dsm", cfg.dsm, "raster defining the extent");
    tiles->add_option("--mask", cfg.mask, "raster defining the extent");
    tiles->add_option("--tile", cfg.tile, "tile side in cells");
    tiles->add_option("--stride", cfg.stride, "stride in cells");
    tiles->add_option("--folds", cfg.folds, "cross-validation folds");
    add_common(tiles);

    CLI::App* metrics = app.add_subcommand("metrics", "confusion matrix, mPA and mIoU");
    std::string pred_path, truth_path;
    metrics->add_option("pred", pred_path, "predicted class mask (.asc)")->required();
    metrics->add_option("truth", truth_path, "ground-truth class mask (.asc)")->required();
    add_common(metrics);

    CLI::App* project = app.add_subcommand("project-mesh", "texture a mesh from a mask or grid");
    project->add_option("--mesh", cfg.mesh, "input mesh (.ply)");
    project->add_option("--mask", cfg.mask, "class mask for class texturing");
    project->add_option("--dsm", cfg.dsm, "scalar grid for height-change texturing");
    project->add_option("--limit", cfg.limit, "scalar color range in meters");
    project->add_option("--palette", cfg.palette_path, "JSON palette override");
    add_common(project);

    CLI::App* gcp = app.add_subcommand("gcp-rmse", "check-point RMSE report");
    gcp->add_option("--gcp", cfg.gcp, "observations CSV: id,mx,my,mz,rx,ry,rz");
    add_common(gcp);

    CLI::App* rsift = app.add_subcommand("rootsift", "RootSIFT-transform SIFT descriptors");
    std::string descriptors_path;
    rsift->add_option("descriptors", descriptors_path, "CSV, one 128-value descriptor per line")
        ->required();
    add_common(rsift);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // prints help text for --help (exit 0) or the usage problem (exit 1)
        return app.exit(e) == 0 ? 0 : 1;
    }
    validate_config(cfg);

    if (vrm->parsed()) return run_vrm(cfg);
    if (diff->parsed()) return run_diff(cfg);
    if (stats->parsed()) return run_stats(cfg);
    if (tiles->parsed()) return run_tiles(cfg);
    if (metrics->parsed()) return run_metrics(cfg, pred_path, truth_path);
    if (project->parsed()) return run_project_mesh(cfg);
    if (gcp->parsed()) return run_gcp_rmse(cfg);
    if (rsift->parsed()) return run_rootsift(cfg, descriptors_path);
    throw UsageError("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const reefkit::ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const reefkit::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
