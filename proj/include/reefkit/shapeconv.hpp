#pragma once

#include <span>
#include <vector>

#include "reefkit/common.hpp"

// Shape-aware convolution forward kernel for a single patch. The patch is
// split per channel into a base component (its spatial mean) and a shape
// component (the residual); each side gets its own learnable weight before
// the ordinary convolution sum.
//
// Layouts: patch[(pos) * c_in + ci] with pos = row * k + col;
//          kernel[(pos * c_in + ci) * c_out + co].

namespace reefkit {

struct ShapeConvWeights {
    int k = 0;
    int c_in = 0;
    int c_out = 0;
    std::vector<double> kernel;   // k*k*c_in*c_out
    std::vector<double> w_base;   // per input channel
    std::vector<double> w_shape;  // per spatial position, k*k
};

namespace detail {

inline void validate_shapeconv(const ShapeConvWeights& w, std::size_t patch_size) {
    if (w.k < 1 || w.k % 2 == 0) throw DataError("kernel size must be odd and >= 1");
    if (w.c_in < 1 || w.c_out < 1) throw DataError("channel counts must be >= 1");
    const auto kk = static_cast<std::size_t>(w.k) * w.k;
    if (patch_size != kk * w.c_in) throw DataError("patch size mismatch");
    if (w.kernel.size() != kk * w.c_in * w.c_out) throw DataError("kernel size mismatch");
    if (w.w_base.size() != static_cast<std::size_t>(w.c_in)) {
        throw DataError("w_base must have one weight per input channel");
    }
    if (w.w_shape.size() != kk) {
        throw DataError("w_shape must have one weight per spatial position");
    }
}

}  // namespace detail

// Spatial mean per channel, computed as first value plus the mean deviation
// from it so a constant patch yields its value exactly (and a zero shape
// component).
inline std::vector<double> shapeconv_base(std::span<const double> patch, int k, int c_in) {
    const int kk = k * k;
    std::vector<double> base(c_in);
    for (int ci = 0; ci < c_in; ++ci) {
        double first = patch[static_cast<std::size_t>(ci)];
        KahanSum dev;
        for (int pos = 0; pos < kk; ++pos) {
            dev.add(patch[static_cast<std::size_t>(pos) * c_in + ci] - first);
        }
        base[ci] = first + dev.value() / kk;
    }
    return base;
}

inline std::vector<double> shapeconv_forward(std::span<const double> patch,
                                             const ShapeConvWeights& w) {
    detail::validate_shapeconv(w, patch.size());

    const int kk = w.k * w.k;
    std::vector<double> base = shapeconv_base(patch, w.k, w.c_in);

    std::vector<KahanSum> out(w.c_out);
    for (int pos = 0; pos < kk; ++pos) {
        for (int ci = 0; ci < w.c_in; ++ci) {
            double v = patch[static_cast<std::size_t>(pos) * w.c_in + ci];
            double shape = v - base[ci];
            double rew = w.w_base[ci] * base[ci] + w.w_shape[pos] * shape;
            const std::size_t koff = (static_cast<std::size_t>(pos) * w.c_in + ci) * w.c_out;
            for (int co = 0; co < w.c_out; ++co) {
                out[co].add(rew * w.kernel[koff + co]);
            }
        }
    }

    std::vector<double> result(w.c_out);
    for (int co = 0; co < w.c_out; ++co) result[co] = out[co].value();
    return result;
}

}  // namespace reefkit
