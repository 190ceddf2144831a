#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "kdv5/error.hpp"
#include "kdv5/flows.hpp"
#include "kdv5/hamiltonians.hpp"
#include "kdv5/random_fields.hpp"
#include "kdv5/spectral.hpp"

using namespace kdv5;

namespace {

constexpr double pi = std::numbers::pi;

// Narrow band so that every product below is resolved exactly on the grid.
Field narrow_random(const Grid& g, std::uint64_t seed, double norm = 0.3) {
    RandomFieldOptions opts;
    opts.max_mode = g.size() / 16;
    opts.h_minus1_norm = norm;
    return random_band_limited(g, seed, opts);
}

}  // namespace

TEST_CASE("vacuum report is all zeros") {
    Grid g(20.0, 64);
    const ConservedReport r = conserved_report(Field(g), {2.0, 4.0});
    CHECK(r.M == 0.0);
    CHECK(r.P == 0.0);
    CHECK(r.H_KdV == 0.0);
    CHECK(r.H_5th == 0.0);
    REQUIRE(r.alpha_samples.size() == 2);
    CHECK(r.alpha_samples[0].second == 0.0);
    CHECK(h_kappa_value(Field(g), 3.0) == 0.0);
}

TEST_CASE("functionals of cos(x) on a 2 pi period") {
    // M = 0, P = pi/2, H_KdV = pi/2 + 0, H_5th = pi/2 + 0 + (5/2)(3 pi/4)
    Grid g(2 * pi, 32);
    const Field q = Field::from_function(g, [](double x) { return std::cos(x); });
    CHECK(std::abs(mass(q)) < 1e-14);
    CHECK(momentum(q) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(hamiltonian_kdv(q) == doctest::Approx(pi / 2).epsilon(1e-13));
    CHECK(hamiltonian_fifth(q) == doctest::Approx(pi / 2 + 15 * pi / 8).epsilon(1e-13));
}

TEST_CASE("reports are translation invariant") {
    Grid g(30.0, 128);
    const Field q = narrow_random(g, 4);
    const ConservedReport a = conserved_report(q, {2.0});
    const ConservedReport b = conserved_report(q.shifted(17), {2.0});
    CHECK(a.M == doctest::Approx(b.M).epsilon(1e-13));
    CHECK(a.P == doctest::Approx(b.P).epsilon(1e-13));
    CHECK(a.H_KdV == doctest::Approx(b.H_KdV).epsilon(1e-12));
    CHECK(a.H_5th == doctest::Approx(b.H_5th).epsilon(1e-12));
    CHECK(a.alpha_samples[0].second == doctest::Approx(b.alpha_samples[0].second).epsilon(1e-12));
}

TEST_CASE("kappa lists must be increasing") {
    Grid g(20.0, 32);
    CHECK_THROWS_AS(conserved_report(Field(g), {4.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(conserved_report(Field(g), {0.5}), ValidationError);
}

TEST_CASE("gradient of H_5th generates the fifth-order flow") {
    Grid g(30.0, 256);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Field q = narrow_random(g, seed);
        const Field lhs = derivative(grad_H5th(q), 1);
        const Field rhs_ = rhs_fifth(q);
        CHECK((lhs - rhs_).max_abs() <= 1e-10 * rhs_.max_abs());
    }
}

TEST_CASE("gradients pass the centered finite-difference test") {
    Grid g(30.0, 256);
    using Functional = std::function<double(const Field&)>;
    using Gradient = std::function<Field(const Field&)>;
    const std::vector<std::pair<Functional, Gradient>> pairs = {
        {momentum, grad_P}, {hamiltonian_kdv, grad_HKdV}, {hamiltonian_fifth, grad_H5th}};
    for (const auto& [H, dH] : pairs) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const Field q = narrow_random(g, seed);
            const Field v = narrow_random(g, 100 + seed);
            const double exact = inner(dH(q), v);
            const auto fd = [&](double eps) { return (H(q + eps * v) - H(q - eps * v)) / (2 * eps); };
            const double e1 = std::abs(fd(1e-2) - exact);
            const double e2 = std::abs(fd(5e-3) - exact);
            const double floor = 1e-11 * std::max(1.0, std::abs(exact));
            // Quadratic functionals are differenced exactly; others shrink 4x per halving.
            if (e1 > floor) CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
            else CHECK(e2 <= 10 * floor);
        }
    }
}

TEST_CASE("Poisson bracket is antisymmetric on the torus") {
    Grid g(30.0, 256);
    const Field q = narrow_random(g, 9);
    const std::vector<Field> grads = {grad_P(q), grad_HKdV(q), grad_H5th(q)};
    for (std::size_t i = 0; i < grads.size(); ++i) {
        for (std::size_t j = 0; j < grads.size(); ++j) {
            const double a = inner(grads[i], derivative(grads[j], 1));
            const double b = inner(grads[j], derivative(grads[i], 1));
            const double scale = l2_norm(grads[i]) * l2_norm(derivative(grads[j], 1)) + 1e-300;
            CHECK(std::abs(a + b) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("scaling law q -> lambda^2 q(lambda x)") {
    // Samples of q_lambda on a grid of length L/lambda equal lambda^2 times those of q.
    const double lambda = 2.0;
    Grid g(30.0, 256), gl(30.0 / lambda, 256);
    const Field q = narrow_random(g, 12);
    std::vector<double> scaled(q.values());
    for (double& v : scaled) v *= lambda * lambda;
    const Field ql(gl, scaled);
    CHECK(momentum(ql) == doctest::Approx(std::pow(lambda, 3) * momentum(q)).epsilon(1e-12));
    CHECK(hamiltonian_kdv(ql) == doctest::Approx(std::pow(lambda, 5) * hamiltonian_kdv(q)).epsilon(1e-12));
    CHECK(hamiltonian_fifth(ql) == doctest::Approx(std::pow(lambda, 7) * hamiltonian_fifth(q)).epsilon(1e-8));
}

TEST_CASE("H_kappa approaches H_5th as kappa grows") {
    Grid g(50.0, 256);
    const Field q = Field::from_function(g, [](double x) { return 0.1 * std::exp(-x * x / 4); });
    const double h5 = hamiltonian_fifth(q);
    double prev = INFINITY;
    for (double kappa : {4.0, 8.0, 16.0}) {
        const double err = std::abs(h_kappa_value(q, kappa) - h5);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-2 * std::abs(h5));
}
