#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "reefkit/common.hpp"

// Dataset preparation protocol: sliding-window tile plans, spatially blocked
// fold assignment, and seeded augmentation plans. Everything here is
// deterministic for a given seed.

namespace reefkit {

struct TileSpec {
    int row0 = 0;
    int col0 = 0;
    int size = 0;
    int fold = -1;  // unassigned until assign_folds

    bool operator==(const TileSpec&) const = default;
};

struct AugmentTransform {
    int rotation_deg = 0;  // 0, 90, 180, 270
    bool hflip = false;
    int row0 = 0;  // re-anchored tile position after the random offset
    int col0 = 0;

    bool operator==(const AugmentTransform&) const = default;
};

namespace detail {

// Unbiased-enough bounded draw via 128-bit multiply; deterministic for a
// given engine state on every platform we build on.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng()) * n) >> 64);
}

template <typename T>
inline void seeded_shuffle(std::vector<T>& items, std::mt19937_64& eng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_below(eng, i)]);
    }
}

// Stride-multiple anchors plus one flush-to-edge anchor when the last
// multiple stops short of full coverage.
inline std::vector<int> window_anchors(int extent, int tile, int stride) {
    std::vector<int> anchors;
    for (int a = 0; a + tile <= extent; a += stride) anchors.push_back(a);
    if (anchors.back() + tile < extent) anchors.push_back(extent - tile);
    return anchors;
}

}  // namespace detail

// Sliding-window tiling with full coverage, row-major order.
inline std::vector<TileSpec> tile_plan(int width, int height, int tile = 448,
                                       int stride = 224) {
    if (tile < 1 || tile > width || tile > height) {
        throw DataError("tile size must be in [1, min(width, height)]");
    }
    if (stride < 1 || stride > tile) throw DataError("stride must be in [1, tile]");

    std::vector<int> rows = detail::window_anchors(height, tile, stride);
    std::vector<int> cols = detail::window_anchors(width, tile, stride);
    std::vector<TileSpec> tiles;
    tiles.reserve(rows.size() * cols.size());
    for (int r : rows) {
        for (int c : cols) tiles.push_back(TileSpec{r, c, tile, -1});
    }
    return tiles;
}

// Groups tiles into square spatial blocks of side `block` (by anchor), then
// deals the shuffled blocks round-robin onto k folds. Tiles sharing a block
// always land in the same fold, so overlapping tiles cannot leak across folds.
inline std::vector<TileSpec> assign_folds(std::vector<TileSpec> tiles, int k,
                                          int block, std::uint64_t seed) {
    if (k < 2) throw DataError("fold count must be >= 2");
    if (block < 1) throw DataError("block side must be >= 1");

    std::map<std::pair<int, int>, int> fold_of_block;
    for (const TileSpec& t : tiles) {
        fold_of_block.emplace(std::pair{t.row0 / block, t.col0 / block}, -1);
    }
    if (fold_of_block.size() < static_cast<std::size_t>(k)) {
        throw DataError("fewer spatial blocks than folds");
    }

    std::vector<std::pair<int, int>> blocks;  // row-major via map ordering
    blocks.reserve(fold_of_block.size());
    for (const auto& [key, unused] : fold_of_block) blocks.push_back(key);

    std::mt19937_64 eng(seed);
    detail::seeded_shuffle(blocks, eng);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        fold_of_block[blocks[i]] = static_cast<int>(i % k);
    }

    for (TileSpec& t : tiles) {
        t.fold = fold_of_block[{t.row0 / block, t.col0 / block}];
    }
    return tiles;
}

// n random transforms for one tile: a right-angle rotation, an optional
// horizontal flip, and a translation of up to +/- stride/2 cells re-anchored
// inside the raster.
inline std::vector<AugmentTransform> augment_plan(const TileSpec& tile, int n,
                                                  std::uint64_t seed, int stride,
                                                  int raster_width,
                                                  int raster_height) {
    if (n < 0) throw DataError("augmentation count must be >= 0");
    if (tile.size > raster_width || tile.size > raster_height) {
        throw DataError("tile does not fit inside the raster");
    }

    std::mt19937_64 eng(seed);
    const int max_off = stride / 2;
    const std::uint64_t span = static_cast<std::uint64_t>(2 * max_off) + 1;

    std::vector<AugmentTransform> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        AugmentTransform t;
        t.rotation_deg = 90 * static_cast<int>(detail::uniform_below(eng, 4));
        t.hflip = detail::uniform_below(eng, 2) != 0;
        int dr = static_cast<int>(detail::uniform_below(eng, span)) - max_off;
        int dc = static_cast<int>(detail::uniform_below(eng, span)) - max_off;
        t.row0 = std::clamp(tile.row0 + dr, 0, raster_height - tile.size);
        t.col0 = std::clamp(tile.col0 + dc, 0, raster_width - tile.size);
        out.push_back(t);
    }
    return out;
}

}  // namespace reefkit
