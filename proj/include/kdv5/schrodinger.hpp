#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "kdv5/grid.hpp"

namespace kdv5 {

/// How the diagonal Green's function g(x; kappa, q) is evaluated.
enum class GreenRoute {
    /// Dense inverse of -d^2 + q + kappa^2 on the grid.
    Direct,
    /// Truncated Neumann series 1/(2 kappa) + h_1 + ... + h_lmax.
    Series,
    /// Fixed point of -2 g g'' + (g')^2 + 4 (q + kappa^2) g^2 = 1, spectrally discretized.
    Spectral,
};

const char* to_string(GreenRoute route);
GreenRoute green_route_from_string(const std::string& name);

struct GreenOptions {
    GreenRoute route = GreenRoute::Spectral;
    /// l_max for the series route.
    int series_terms = 6;
    /// Dense spectral basis size is oversample * N (series route, h_l with l >= 3).
    int oversample = 1;
    /// Largest dense matrix dimension any route may allocate.
    int dense_limit = 2048;
    /// Series refused when kappa^{-1/2} ||q||_{H^{-1}_kappa} reaches this value.
    double hs_guard = 0.9;
    double spectral_tol = 1e-14;
    int spectral_max_iter = 400;
};

/// g, rho and alpha for one (q, kappa).
struct GreenReport {
    explicit GreenReport(const Grid& grid)
        : g(grid), deviation(grid), h1(grid), remainder(grid), rho(grid) {}

    double kappa = 1.0;
    GreenRoute route = GreenRoute::Spectral;
    Field g;
    /// g - 1/(2 kappa), computed without cancellation.
    Field deviation;
    /// Closed-form first series term -(1/kappa) R0(2 kappa) q.
    Field h1;
    /// Everything beyond h1: g - 1/(2 kappa) - h1.
    Field remainder;
    Field rho;
    double alpha = 0.0;
    /// Number of h_l summed (series route); 0 for routes without truncation.
    int series_terms_used = 0;
    /// Geometric bound on the omitted series tail (series route), final update
    /// size (spectral route), or 0 (direct route).
    double tail_estimate = 0.0;
    /// Reciprocal condition estimate of the dense system (direct route only).
    double rcond = 0.0;
    int iterations = 0;
};

enum class Basis { Spectral, Physical };

/// Dense matrix of an operator on the grid's function space.
struct OperatorMatrix {
    Basis basis = Basis::Spectral;
    Eigen::MatrixXcd matrix;
    /// Angular frequencies labelling rows/columns (spectral basis).
    std::vector<double> frequencies;
};

/// sqrt(R0(kappa)) q sqrt(R0(kappa)) in an orthonormal Fourier basis of
/// oversample * N modes (Galerkin truncation, no aliasing of q).
OperatorMatrix sandwich_operator(const Field& q, double kappa, int oversample = 1,
                                 int dense_limit = 2048);
/// Squared Frobenius (Hilbert-Schmidt) norm.
double hilbert_schmidt_norm_sq(const OperatorMatrix& op);

/// h_1 = -(1/kappa) R0(2 kappa) q.
Field h1(const Field& q, double kappa);
/// Quadratic term by direct double sum over lattice frequencies, O(N^2).
Field h2(const Field& q, double kappa);

struct SeriesOptions {
    int oversample = 1;
    int dense_limit = 2048;
    /// Add the analytic free-loop tail outside the basis at l = 1.
    bool first_order_tail = true;
};

/// h_1 ... h_lmax from powers of the dense sandwich operator.
std::vector<Field> h_ell_terms(const Field& q, double kappa, int lmax, const SeriesOptions& opts = {});
/// h_l from the dense sandwich operator.
Field h_ell_series(const Field& q, double kappa, int ell, const SeriesOptions& opts = {});

/// kappa^{-1/2} ||q||_{H^{-1}_kappa}, the Hilbert-Schmidt norm of sqrt(R0) q sqrt(R0).
double neumann_ratio(const Field& q, double kappa);

GreenReport green_diagonal_series(const Field& q, double kappa, int lmax, const GreenOptions& opts = {});
GreenReport green_diagonal_direct(const Field& q, double kappa, const GreenOptions& opts = {});
GreenReport green_diagonal_spectral(const Field& q, double kappa, const GreenOptions& opts = {});
/// Dispatch on opts.route.
GreenReport green_diagonal(const Field& q, double kappa, const GreenOptions& opts = {});

/// alpha = (1/(2 kappa)) integral rho.
double alpha_of(const Field& q, double kappa, const GreenOptions& opts = {});

/// 2 kappa - 1/g.
Field diffeo_forward(const Field& q, double kappa, const GreenOptions& opts = {});

struct DiffeoOptions {
    /// Target residual ||forward(q) - w||_{H^1_kappa}.
    double tol = 1e-11;
    int max_iterations = 50;
    GreenOptions green;
};

struct DiffeoResult {
    Field q;
    int iterations = 0;
    double residual = 0.0;
};

/// Solves diffeo_forward(q) = w by quasi-Newton iteration preconditioned with the
/// linearization at zero, -4 kappa R0(2 kappa). Throws NumericalError when the
/// residual does not reach tol within max_iterations.
DiffeoResult diffeo_inverse(const Field& w, double kappa, const DiffeoOptions& opts = {});

}  // namespace kdv5
