#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "reefkit/tiling.hpp"

using namespace reefkit;

namespace {

std::set<int> col_anchors(const std::vector<TileSpec>& tiles) {
    std::set<int> out;
    for (const TileSpec& t : tiles) out.insert(t.col0);
    return out;
}

std::set<int> row_anchors(const std::vector<TileSpec>& tiles) {
    std::set<int> out;
    for (const TileSpec& t : tiles) out.insert(t.row0);
    return out;
}

}  // namespace

TEST_CASE("tile_plan enumerates the 896x672 case") {
    auto tiles = tile_plan(896, 672, 448, 224);
    REQUIRE(tiles.size() == 6);
    REQUIRE(col_anchors(tiles) == std::set<int>{0, 224, 448});
    REQUIRE(row_anchors(tiles) == std::set<int>{0, 224});

    // row-major order
    REQUIRE(tiles[0].row0 == 0);
    REQUIRE(tiles[0].col0 == 0);
    REQUIRE(tiles[1].row0 == 0);
    REQUIRE(tiles[1].col0 == 224);
    REQUIRE(tiles[3].row0 == 224);
    REQUIRE(tiles[3].col0 == 0);
}

TEST_CASE("tile_plan adds a flush-edge anchor when the stride overruns") {
    auto tiles = tile_plan(1000, 448, 448, 224);
    REQUIRE(col_anchors(tiles) == std::set<int>{0, 224, 448, 552});
    REQUIRE(row_anchors(tiles) == std::set<int>{0});
}

TEST_CASE("tile_plan with raster == tile yields exactly one tile") {
    auto tiles = tile_plan(448, 448, 448, 224);
    REQUIRE(tiles.size() == 1);
    REQUIRE(tiles[0].row0 == 0);
    REQUIRE(tiles[0].col0 == 0);
    REQUIRE(tiles[0].size == 448);
    REQUIRE(tiles[0].fold == -1);
}

TEST_CASE("tile_plan rejects oversized tiles and bad strides") {
    REQUIRE_THROWS_AS(tile_plan(100, 100, 448, 224), DataError);
    REQUIRE_THROWS_AS(tile_plan(448, 448, 448, 0), DataError);
    REQUIRE_THROWS_AS(tile_plan(448, 448, 448, 500), DataError);
}

TEST_CASE("tile_plan covers every cell for random raster sizes") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> tile_dist(8, 32);
    for (int trial = 0; trial < 50; ++trial) {
        int tile = tile_dist(rng);
        std::uniform_int_distribution<int> stride_dist(1, tile);
        int stride = stride_dist(rng);
        std::uniform_int_distribution<int> extent(tile, 4 * tile);
        int w = extent(rng);
        int h = extent(rng);

        auto tiles = tile_plan(w, h, tile, stride);
        std::vector<std::uint8_t> covered(static_cast<std::size_t>(w) * h, 0);
        for (const TileSpec& t : tiles) {
            REQUIRE(t.row0 >= 0);
            REQUIRE(t.col0 >= 0);
            REQUIRE(t.row0 + t.size <= h);
            REQUIRE(t.col0 + t.size <= w);
            for (int r = t.row0; r < t.row0 + t.size; ++r) {
                for (int c = t.col0; c < t.col0 + t.size; ++c) {
                    covered[static_cast<std::size_t>(r) * w + c] = 1;
                }
            }
        }
        for (std::uint8_t c : covered) REQUIRE(c == 1);
    }
}

TEST_CASE("assign_folds deals blocks evenly and deterministically") {
    auto tiles = tile_plan(10 * 64, 64, 64, 64);  // 10 tiles, one block each
    auto folded = assign_folds(tiles, 5, 64, 42);

    std::map<int, int> fold_sizes;
    for (const TileSpec& t : folded) {
        REQUIRE(t.fold >= 0);
        REQUIRE(t.fold < 5);
        ++fold_sizes[t.fold];
    }
    REQUIRE(fold_sizes.size() == 5);
    for (const auto& [fold, n] : fold_sizes) REQUIRE(n == 2);

    // same seed, same assignment
    auto again = assign_folds(tiles, 5, 64, 42);
    REQUIRE(again == folded);

    // a different seed reshuffles (with 10!/(2!^5) arrangements a collision
    // would point at a seeding bug)
    auto other = assign_folds(tiles, 5, 64, 43);
    REQUIRE(other != folded);
}

TEST_CASE("overlapping tiles in one block never straddle folds") {
    auto tiles = tile_plan(896, 896, 128, 64);
    auto folded = assign_folds(tiles, 5, 256, 7);

    std::map<std::pair<int, int>, int> fold_of_block;
    for (const TileSpec& t : folded) {
        auto key = std::pair{t.row0 / 256, t.col0 / 256};
        auto [it, inserted] = fold_of_block.emplace(key, t.fold);
        REQUIRE(it->second == t.fold);
    }
}

TEST_CASE("assign_folds validates inputs") {
    auto tiles = tile_plan(128, 128, 64, 64);  // 4 tiles, 4 blocks of 64
    REQUIRE_THROWS_AS(assign_folds(tiles, 5, 64, 0), DataError);  // 4 blocks < 5 folds
    REQUIRE_THROWS_AS(assign_folds(tiles, 1, 64, 0), DataError);
    REQUIRE_THROWS_AS(assign_folds(tiles, 2, 0, 0), DataError);
}

TEST_CASE("augment_plan: n = 0 gives an empty plan") {
    TileSpec tile{0, 0, 64, -1};
    REQUIRE(augment_plan(tile, 0, 9, 32, 512, 512).empty());
}

TEST_CASE("augment_plan anchors stay in bounds") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pos(0, 448);
    for (int trial = 0; trial < 20; ++trial) {
        TileSpec tile{pos(rng), pos(rng), 64, -1};
        auto plan = augment_plan(tile, 50, trial, 32, 512, 512);
        REQUIRE(plan.size() == 50);
        for (const AugmentTransform& t : plan) {
            REQUIRE(t.row0 >= 0);
            REQUIRE(t.col0 >= 0);
            REQUIRE(t.row0 + tile.size <= 512);
            REQUIRE(t.col0 + tile.size <= 512);
            REQUIRE((t.rotation_deg == 0 || t.rotation_deg == 90 || t.rotation_deg == 180 ||
                     t.rotation_deg == 270));
            REQUIRE(std::abs(t.row0 - tile.row0) <= 16);
            REQUIRE(std::abs(t.col0 - tile.col0) <= 16);
        }
    }
}

TEST_CASE("augment_plan reproduces bit-identically for a seed") {
    TileSpec tile{128, 64, 448, 2};
    auto a = augment_plan(tile, 25, 1234, 224, 2048, 2048);
    auto b = augment_plan(tile, 25, 1234, 224, 2048, 2048);
    REQUIRE(a == b);

    auto c = augment_plan(tile, 25, 1235, 224, 2048, 2048);
    REQUIRE(a != c);
}

TEST_CASE("augment_plan rotations are roughly uniform") {
    TileSpec tile{0, 0, 64, -1};
    auto plan = augment_plan(tile, 10000, 77, 32, 256, 256);

    std::map<int, int> rotation_counts;
    for (const AugmentTransform& t : plan) ++rotation_counts[t.rotation_deg];
    REQUIRE(rotation_counts.size() == 4);

    // chi-squared against uniform; 16.27 is the 0.1% cutoff for 3 dof
    double chi2 = 0.0;
    for (const auto& [rot, n] : rotation_counts) {
        double diff = n - 2500.0;
        chi2 += diff * diff / 2500.0;
    }
    REQUIRE(chi2 < 16.27);
}
