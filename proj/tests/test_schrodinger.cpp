#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kdv5/error.hpp"
#include "kdv5/hamiltonians.hpp"
#include "kdv5/random_fields.hpp"
#include "kdv5/schrodinger.hpp"
#include "kdv5/spectral.hpp"

using namespace kdv5;

namespace {

constexpr double pi = std::numbers::pi;

Field small_gaussian(const Grid& g, double a = 0.1) {
    return Field::from_function(g, [a](double x) { return a * std::exp(-x * x / 4); });
}

// Two-frequency kernel of the quadratic term, written out by hand.
double h2_kernel(double xi, double eta, double k) {
    const double k4 = 4 * k * k;
    const double d = xi - eta;
    return (xi * xi + d * d + eta * eta + 24 * k * k) / ((xi * xi + k4) * (d * d + k4) * (eta * eta + k4));
}

}  // namespace

TEST_CASE("vacuum: g = 1/(2 kappa) on every route") {
    Grid g(20.0, 128);
    const Field zero(g);
    for (double k : {1.0, 2.5, 8.0}) {
        for (GreenRoute route : {GreenRoute::Direct, GreenRoute::Series, GreenRoute::Spectral}) {
            GreenOptions opts;
            opts.route = route;
            const GreenReport rep = green_diagonal(zero, k, opts);
            CHECK((rep.g + (-0.5 / k)).max_abs() < 1e-6);
            CHECK(rep.rho.max_abs() < 1e-12);
            CHECK(std::abs(rep.alpha) < 1e-12);
        }
    }
}

TEST_CASE("h1 of a single mode") {
    // h1 = -(1/kappa) R0(2 kappa) q, so eps cos(kx) -> -eps cos(kx) / (kappa (k^2 + 4 kappa^2)).
    Grid g(2 * pi, 32);
    const double eps = 0.01, kappa = 1.5;
    const Field q = Field::from_function(g, [=](double x) { return eps * std::cos(3 * x); });
    const Field want = q * (-1.0 / (kappa * (9 + 4 * kappa * kappa)));
    CHECK((h1(q, kappa) - want).max_abs() < 1e-16);
}

TEST_CASE("h2 of a single mode from the two-point frequency sum") {
    // q = eps cos(kx): h2 = eps^2/(8 kappa) [2 K(0,k) + 2 K(2k,k) cos(2kx)].
    Grid g(2 * pi, 64);
    const double eps = 0.02;
    for (double kappa : {1.0, 3.0}) {
        for (int k : {1, 4}) {
            const Field q = Field::from_function(g, [=](double x) { return eps * std::cos(k * x); });
            const double c0 = 2 * h2_kernel(0, k, kappa);
            const double c2 = 2 * h2_kernel(2 * k, k, kappa);
            const Field want = Field::from_function(
                g, [=](double x) { return eps * eps / (8 * kappa) * (c0 + c2 * std::cos(2 * k * x)); });
            CHECK((h2(q, kappa) - want).max_abs() < 1e-15);
        }
    }
}

TEST_CASE("dense series terms agree with the closed forms") {
    Grid g(20.0, 64);
    const Field q = small_gaussian(g);
    const double kappa = 2.0;
    const auto terms = h_ell_terms(q, kappa, 2);
    CHECK((terms[0] - h1(q, kappa)).max_abs() < 1e-13);
    // The dense h2 misses frequencies outside the basis; it converges to the
    // double sum as the basis grows.
    SeriesOptions wide;
    wide.oversample = 4;
    const double coarse = (terms[1] - h2(q, kappa)).max_abs();
    const double fine = (h_ell_series(q, kappa, 2, wide) - h2(q, kappa)).max_abs();
    CHECK(fine < coarse);
    CHECK(fine < 1e-3 * h2(q, kappa).max_abs());
}

TEST_CASE("Green's routes agree on small data") {
    Grid g(20.0, 256);
    const Field q = Field::from_function(g, [](double x) { return 0.3 * std::exp(-x * x / 4) * std::cos(x); });
    for (double kappa : {1.0, 2.0, 8.0}) {
        GreenOptions opts;
        const GreenReport spec = green_diagonal_spectral(q, kappa, opts);
        const GreenReport direct = green_diagonal_direct(q, kappa, opts);
        const GreenReport series = green_diagonal_series(q, kappa, 6, opts);
        CHECK((spec.g - direct.g).max_abs() < 1e-9);
        CHECK((spec.g - series.g).max_abs() <= series.tail_estimate + 1e-9);
        CHECK(spec.iterations > 0);
        CHECK(direct.rcond > 0.0);
        CHECK(series.series_terms_used == 6);
    }
}

TEST_CASE("series route refuses data outside the Neumann ball") {
    Grid g(20.0, 64);
    const Field big = Field::from_function(g, [](double x) { return 5.0 * std::exp(-x * x); });
    CHECK(neumann_ratio(big, 1.0) >= 0.9);
    CHECK_THROWS_AS(green_diagonal_series(big, 1.0, 4), DivergenceError);
}

TEST_CASE("dense limit is enforced") {
    Grid g(20.0, 64);
    const Field q = small_gaussian(g);
    GreenOptions opts;
    opts.dense_limit = 32;
    CHECK_THROWS_AS(green_diagonal_direct(q, 2.0, opts), ResourceLimitError);
    CHECK_THROWS_AS(sandwich_operator(q, 2.0, 1, 32), ResourceLimitError);
}

TEST_CASE("Hilbert-Schmidt norm of the sandwich operator matches the H^-1 ratio") {
    // ||sqrt(R0) q sqrt(R0)||_HS^2 = (1/kappa) ||q||^2_{H^-1_kappa} for the
    // continuum; the lattice version agrees up to the truncated loop sum.
    Grid g(30.0, 128);
    const Field q = small_gaussian(g);
    const double kappa = 2.0;
    const double hs = hilbert_schmidt_norm_sq(sandwich_operator(q, kappa, 4, 1024));
    const double r = neumann_ratio(q, kappa);
    CHECK(hs == doctest::Approx(r * r).epsilon(2e-2));
}

TEST_CASE("g is positive and rho integrates to 2 kappa alpha") {
    Grid g(30.0, 256);
    const Field q = random_band_limited(g, 17, {0, 0.1});
    for (double kappa : {1.0, 4.0}) {
        const GreenReport rep = green_diagonal(q, kappa);
        for (double v : rep.g.values()) CHECK(v > 0.0);
        CHECK(integral(rep.rho) == doctest::Approx(2 * kappa * rep.alpha).epsilon(1e-12));
    }
}

TEST_CASE("alpha is translation invariant and vanishes on the vacuum") {
    Grid g(30.0, 128);
    const Field q = small_gaussian(g);
    CHECK(alpha_of(q, 2.0) == doctest::Approx(alpha_of(q.shifted(5), 2.0)).epsilon(1e-12));
    CHECK(alpha_of(Field(g), 2.0) == 0.0);
}

TEST_CASE("alpha leading order is P / (4 kappa^3)") {
    Grid g(50.0, 256);
    const Field q = small_gaussian(g, 0.05);
    const double kappa = 16.0;
    CHECK(alpha_of(q, kappa) == doctest::Approx(momentum(q) / (4 * std::pow(kappa, 3))).epsilon(1e-3));
}

TEST_CASE("diffeomorphism round trip") {
    Grid g(30.0, 128);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Field q = random_band_limited(g, seed, {0, 0.1});
        for (double kappa : {1.0, 4.0}) {
            const DiffeoResult inv = diffeo_inverse(diffeo_forward(q, kappa), kappa);
            CHECK(sobolev_norm(inv.q - q, -1.0, 1.0) < 1e-8);
            CHECK(inv.residual <= 1e-11);
        }
    }
}

TEST_CASE("diffeomorphism linearization is -4 kappa R0(2 kappa)") {
    Grid g(2 * pi, 32);
    const double eps = 1e-6, kappa = 2.0;
    const Field q = Field::from_function(g, [=](double x) { return eps * std::cos(2 * x); });
    const Field want = q * (-4 * kappa / (4 + 4 * kappa * kappa));
    CHECK((diffeo_forward(q, kappa) - want).max_abs() < 1e-4 * eps);
}

TEST_CASE("route names round trip") {
    for (GreenRoute r : {GreenRoute::Direct, GreenRoute::Series, GreenRoute::Spectral}) {
        CHECK(green_route_from_string(to_string(r)) == r);
    }
    CHECK_THROWS_AS(green_route_from_string("jost"), ValidationError);
}

TEST_CASE("kappa below one is refused") {
    Grid g(10.0, 32);
    CHECK_THROWS_AS(h1(Field(g), 0.5), ValidationError);
    CHECK_THROWS_AS(green_diagonal(Field(g), 0.9), ValidationError);
}
