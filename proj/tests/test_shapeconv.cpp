#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>
#include <vector>

#include "reefkit/shapeconv.hpp"

using namespace reefkit;
using Catch::Approx;

namespace {

// plain convolution oracle: sum over patch x kernel per output channel
std::vector<double> conv_oracle(const std::vector<double>& patch,
                                const ShapeConvWeights& w) {
    std::vector<double> out(w.c_out, 0.0);
    const int kk = w.k * w.k;
    for (int pos = 0; pos < kk; ++pos) {
        for (int ci = 0; ci < w.c_in; ++ci) {
            double v = patch[static_cast<std::size_t>(pos) * w.c_in + ci];
            for (int co = 0; co < w.c_out; ++co) {
                out[co] += v * w.kernel[(static_cast<std::size_t>(pos) * w.c_in + ci) * w.c_out + co];
            }
        }
    }
    return out;
}

ShapeConvWeights random_weights(std::mt19937& rng, int k, int c_in, int c_out) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ShapeConvWeights w;
    w.k = k;
    w.c_in = c_in;
    w.c_out = c_out;
    w.kernel.resize(static_cast<std::size_t>(k) * k * c_in * c_out);
    for (double& v : w.kernel) v = u(rng);
    w.w_base.assign(c_in, 1.0);
    w.w_shape.assign(static_cast<std::size_t>(k) * k, 1.0);
    return w;
}

}  // namespace

TEST_CASE("unit reweights reproduce the vanilla convolution") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        int k = std::array{1, 3, 5}[trial % 3];
        int c_in = 1 + trial % 3;
        int c_out = 1 + trial % 2;
        ShapeConvWeights w = random_weights(rng, k, c_in, c_out);
        std::vector<double> patch(static_cast<std::size_t>(k) * k * c_in);
        for (double& v : patch) v = u(rng);

        auto got = shapeconv_forward(patch, w);
        auto expected = conv_oracle(patch, w);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i] == Approx(expected[i]).margin(1e-12));
        }
    }
}

TEST_CASE("constant patch has an exactly zero shape component") {
    for (double value : {0.3, -7.5, 1e6, 1.0 / 3.0}) {
        std::vector<double> patch(9, value);
        auto base = shapeconv_base(patch, 3, 1);
        REQUIRE(base.size() == 1);
        REQUIRE(base[0] == value);  // bit-exact, so shape = patch - base is zero
    }
}

TEST_CASE("constant patch output depends only on the base path") {
    std::mt19937 rng(11);
    ShapeConvWeights w = random_weights(rng, 3, 2, 2);
    std::vector<double> patch(9 * 2);
    for (int pos = 0; pos < 9; ++pos) {
        patch[pos * 2 + 0] = 4.25;
        patch[pos * 2 + 1] = -1.5;
    }

    auto a = shapeconv_forward(patch, w);
    for (double& s : w.w_shape) s = 123.0;  // must not matter: shape is zero
    auto b = shapeconv_forward(patch, w);
    REQUIRE(a == b);

    // w_base scales the whole (constant) signal
    for (double& bse : w.w_base) bse = 2.0;
    auto doubled = shapeconv_forward(patch, w);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(doubled[i] == Approx(2.0 * a[i]).margin(1e-9));
    }
}

TEST_CASE("3x3 patch 1..9 with unit kernel matches the summation oracle") {
    // base = 5, reweighted = 2*5 + (v - 5), unit kernel sums to 90
    std::vector<double> patch{1, 2, 3, 4, 5, 6, 7, 8, 9};
    ShapeConvWeights w;
    w.k = 3;
    w.c_in = 1;
    w.c_out = 1;
    w.kernel.assign(9, 1.0);
    w.w_base = {2.0};
    w.w_shape.assign(9, 1.0);

    double expected = 0.0;
    for (double v : patch) expected += 2.0 * 5.0 + (v - 5.0);
    REQUIRE(expected == 90.0);

    auto out = shapeconv_forward(patch, w);
    REQUIRE(out.size() == 1);
    REQUIRE(out[0] == Approx(expected).margin(1e-12));
}

TEST_CASE("shapeconv_forward validates shapes") {
    ShapeConvWeights w;
    w.k = 2;  // even
    w.c_in = 1;
    w.c_out = 1;
    w.kernel.assign(4, 1.0);
    w.w_base = {1.0};
    w.w_shape.assign(4, 1.0);
    std::vector<double> patch(4, 0.0);
    REQUIRE_THROWS_AS(shapeconv_forward(patch, w), DataError);

    w.k = 3;
    w.kernel.assign(9, 1.0);
    w.w_shape.assign(9, 1.0);
    REQUIRE_THROWS_AS(shapeconv_forward(patch, w), DataError);  // patch size mismatch

    std::vector<double> patch9(9, 0.0);
    w.w_base = {1.0, 1.0};  // wrong channel count
    REQUIRE_THROWS_AS(shapeconv_forward(patch9, w), DataError);
}
