#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kdv5/error.hpp"
#include "kdv5/random_fields.hpp"
#include "kdv5/spectral.hpp"

using namespace kdv5;

namespace {
constexpr double pi = std::numbers::pi;

double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }
}  // namespace

TEST_CASE("grid rejects bad sizes") {
    CHECK_THROWS_AS(Grid(1.0, 7), ValidationError);
    CHECK_THROWS_AS(Grid(1.0, 6), ValidationError);
    CHECK_THROWS_AS(Grid(-1.0, 8), ValidationError);
    CHECK_THROWS_AS(Grid(NAN, 8), ValidationError);
    Grid g(2 * pi, 16);
    CHECK(g.x(0) == doctest::Approx(-pi));
    CHECK(g.wavenumber(8) == -8);
    CHECK(g.wavenumber(15) == -1);
}

TEST_CASE("field rejects non-finite samples") {
    Grid g(1.0, 8);
    CHECK_THROWS_AS(Field(g, std::vector<double>(8, NAN)), ValidationError);
    CHECK_THROWS_AS(Field(g, std::vector<double>(7, 0.0)), ValidationError);
}

TEST_CASE("cosine has coefficient pi/sqrt(2 pi) at m = +-1") {
    // (1/sqrt(2 pi)) integral_{-pi}^{pi} cos x e^{-ix} dx = pi / sqrt(2 pi)
    Grid g(2 * pi, 32);
    const Field f = Field::from_function(g, [](double x) { return std::cos(x); });
    const auto& c = f.spectrum();
    const double expect = pi / std::sqrt(2 * pi);
    CHECK(std::abs(c[1] - Complex(expect)) < 1e-13);
    CHECK(std::abs(c[31] - Complex(expect)) < 1e-13);
    double rest = 0.0;
    for (int k = 0; k < 32; ++k) {
        if (k != 1 && k != 31) rest = std::max(rest, std::abs(c[k]));
    }
    CHECK(rest < 1e-13);
}

TEST_CASE("transform round trip and Parseval") {
    Grid g(13.0, 64);
    const Field f = random_band_limited(g, 3, {0, 1.0});
    const auto back = inverse_transform_real(g, f.spectrum());
    for (int j = 0; j < 64; ++j) CHECK(back[j] == doctest::Approx(f[j]).epsilon(1e-12));
    double spec = 0.0;
    for (const auto& c : f.spectrum()) spec += std::norm(c);
    spec *= 2 * pi / g.length();
    CHECK(spec == doctest::Approx(inner(f, f)).epsilon(1e-12));
}

TEST_CASE("derivatives and resolvent of trigonometric fields") {
    Grid g(2 * pi, 32);
    const Field s3 = Field::from_function(g, [](double x) { return std::sin(3 * x); });
    const Field c3 = Field::from_function(g, [](double x) { return std::cos(3 * x); });
    CHECK(max_diff(derivative(s3, 1), 3.0 * c3) < 1e-12);
    CHECK(max_diff(derivative(s3, 2), -9.0 * s3) < 1e-11);
    // R0(kappa) cos(3x) = cos(3x) / (9 + kappa^2)
    CHECK(max_diff(resolvent(c3, 2.0), c3 * (1.0 / 13.0)) < 1e-14);
}

TEST_CASE("derivative removes the Nyquist mode") {
    Grid g(2 * pi, 16);
    std::vector<double> alt(16);
    for (int j = 0; j < 16; ++j) alt[j] = (j % 2 == 0) ? 1.0 : -1.0;
    CHECK(derivative(Field(g, alt), 1).max_abs() < 1e-14);
    CHECK(derivative(Field(g, alt), 2).max_abs() < 1e-14);
}

TEST_CASE("non-Hermitian symbols are refused on real fields") {
    Grid g(2 * pi, 16);
    const Field f = Field::from_function(g, [](double x) { return std::cos(x); });
    const Symbol odd_real([](double xi) { return Complex(xi); });
    CHECK_THROWS_AS(apply_multiplier(odd_real, f), ValidationError);
    CHECK_NOTHROW(apply_multiplier(Symbol::derivative(3), f));
}

TEST_CASE("Sobolev norm of cos(x)") {
    // sum over m = +-1 of (1 + 4)^{-1} (pi/2) (2 pi / 2 pi) = pi / 5
    Grid g(2 * pi, 32);
    const Field f = Field::from_function(g, [](double x) { return std::cos(x); });
    CHECK(sobolev_norm(f, -1.0, 1.0) == doctest::Approx(std::sqrt(pi / 5)).epsilon(1e-13));
    CHECK(sobolev_norm(f, 0.0, 1.0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
    CHECK_THROWS_AS(sobolev_norm(f, -1.0, 0.5), ValidationError);
    CHECK(sobolev_norm(Field(g), -1.0, 3.0) == 0.0);
}

TEST_CASE("dealiased product") {
    Grid g(2 * pi, 32);
    const Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
    const Field want = Field::from_function(g, [](double x) { return 0.5 + 0.5 * std::cos(2 * x); });
    CHECK(max_diff(dealiased_product(c1, c1), want) < 1e-14);
    // cos(10x)^2 = (1 + cos 20x)/2 and |20| lies outside the 2/3 band of N = 32.
    const Field c10 = Field::from_function(g, [](double x) { return std::cos(10 * x); });
    const Field half = Field::from_function(g, [](double) { return 0.5; });
    CHECK(max_diff(dealiased_product(c10, c10), half) < 1e-14);
    CHECK(is_dealiased_mode(g, 10));
    CHECK_FALSE(is_dealiased_mode(g, 11));
}

TEST_CASE("integral and inner product") {
    Grid g(2 * pi, 32);
    const Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
    CHECK(std::abs(integral(c1)) < 1e-14);
    CHECK(inner(c1, c1) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(l2_norm(c1) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
}

TEST_CASE("random fields are seeded, band-limited and scaled") {
    Grid g(30.0, 128);
    RandomFieldOptions opts;
    opts.h_minus1_norm = 0.2;
    const Field a = random_band_limited(g, 5, opts);
    const Field b = random_band_limited(g, 5, opts);
    const Field c = random_band_limited(g, 6, opts);
    CHECK(max_diff(a, b) == 0.0);
    CHECK(max_diff(a, c) > 0.0);
    CHECK(sobolev_norm(a, -1.0, 1.0) == doctest::Approx(0.2).epsilon(1e-12));
    const auto& spec = a.spectrum();
    for (int k = 0; k < 128; ++k) {
        if (std::abs(g.wavenumber(k)) >= 32) CHECK(std::abs(spec[k]) < 1e-13);
    }
}
