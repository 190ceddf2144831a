#pragma once

#include <functional>
#include <span>

#include "kdv5/grid.hpp"

namespace kdv5 {

/// Forward transform with the symmetric continuum normalization
///
///     f^(xi_k) = dx / sqrt(2 pi) * sum_j f(x_j) exp(-i xi_k x_j),
///
/// so that sum_k |f^_k|^2 (2 pi / L) equals the trapezoid rule for the
/// integral of |f|^2, and f^_k approximates the Fourier transform on the line.
Spectrum forward_transform(const Grid& grid, std::span<const double> samples);
Spectrum forward_transform(const Grid& grid, std::span<const Complex> samples);
inline const Spectrum& forward_transform(const Field& f) { return f.spectrum(); }

/// Inverse of forward_transform.
std::vector<Complex> inverse_transform(const Grid& grid, std::span<const Complex> coeffs);
/// Inverse transform keeping only the real part.
std::vector<double> inverse_transform_real(const Grid& grid, std::span<const Complex> coeffs);

/// Fourier multiplier xi -> m(xi).
class Symbol {
public:
    using Rule = std::function<Complex(double)>;

    explicit Symbol(Rule rule) : rule_(std::move(rule)) {}

    Complex operator()(double xi) const { return rule_(xi); }
    Symbol operator*(const Symbol& other) const;

    /// m(-xi) == conj(m(xi)) on every non-Nyquist lattice frequency.
    bool is_hermitian_on(const Grid& grid, double rel_tol = 1e-12) const;

    static Symbol identity();
    /// (i xi)^order
    static Symbol derivative(int order);
    /// 1 / (xi^2 + kappa^2), i.e. R0(kappa) = (-d^2 + kappa^2)^{-1}.
    static Symbol resolvent(double kappa);
    /// (xi^2 + 4 kappa^2)^s
    static Symbol sobolev_weight(double s, double kappa);

private:
    Rule rule_;
};

/// Pure coefficient-wise product m(xi_k) c_k, Nyquist included. Composes exactly.
Spectrum apply_multiplier(const Symbol& m, const Grid& grid, std::span<const Complex> coeffs);

/// Real-to-real multiplier. The Nyquist coefficient is multiplied by Re m, so odd
/// symbols (derivatives of odd order) annihilate it. Throws ValidationError if
/// the symbol is not Hermitian on the lattice.
Field apply_multiplier(const Symbol& m, const Field& f);

/// d^order f / dx^order; the Nyquist mode is zeroed.
Field derivative(const Field& f, int order = 1);

/// R0(kappa) f = (-d^2 + kappa^2)^{-1} f.
Field resolvent(const Field& f, double kappa);

/// ( sum_k (xi_k^2 + 4 kappa^2)^s |f^_k|^2 (2 pi / L) )^{1/2}. Requires kappa >= 1.
double sobolev_norm(const Field& f, double s, double kappa);
/// Same norm on raw coefficients.
double sobolev_norm(const Grid& grid, std::span<const Complex> coeffs, double s, double kappa);

/// Trapezoid quadrature of integral f.
double integral(const Field& f);
/// Trapezoid quadrature of integral f g.
double inner(const Field& f, const Field& g);
/// Trapezoid quadrature L^2 norm.
double l2_norm(const Field& f);

/// Pointwise (collocation) product, no truncation.
Field product(const Field& f, const Field& g);

/// 2/3-rule filter: zeroes every mode with |k| >= N/3.
Field dealias(const Field& f);
bool is_dealiased_mode(const Grid& grid, int k);

/// Pointwise product with 2/3-rule truncation of inputs and output. Exact when
/// both inputs live in |k| < N/3 and the product does too.
Field dealiased_product(const Field& f, const Field& g);

}  // namespace kdv5
