#include "kdv5/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kdv5/error.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {
namespace {

constexpr double kPi = std::numbers::pi;

void require_kappa(double kappa, const char* what) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
        throw ValidationError(std::string(what) + ": kappa must be finite and >= 1");
    }
}

int fold_index(int wavenumber, int n) { return ((wavenumber % n) + n) % n; }

// Fourier coefficient of q at integer wavenumber m, Galerkin convention: the
// Nyquist mode is ambiguous for a real field and is dropped.
Complex q_hat_at(const Field& q, int m) {
    const int n = q.size();
    if (2 * std::abs(m) >= n) return 0.0;
    return q.spectrum()[fold_index(m, n)];
}

// Fills rho/alpha/g from h1 and the remainder r = g - 1/(2 kappa) - h1.
void finish_report(GreenReport& rep, const Field& q, double kappa) {
    const Grid& grid = q.grid();
    const int n = grid.size();
    const double free = 0.5 / kappa;
    std::vector<double> v(n), g(n), rho(n);
    for (int j = 0; j < n; ++j) {
        v[j] = rep.h1[j] + rep.remainder[j];
        g[j] = free + v[j];
        if (!(g[j] > 0.0)) {
            std::ostringstream msg;
            msg << "green: g is not positive at x=" << grid.x(j) << " (g=" << g[j]
                << "); kappa^2 does not dominate q";
            throw NumericalError(msg.str());
        }
        // rho = 2k^2 - k/g + 4k^2 R0(2k) q, rearranged to avoid cancellation.
        rho[j] = 2.0 * kappa * kappa * (rep.remainder[j] - 2.0 * kappa * rep.h1[j] * v[j]) / g[j];
    }
    rep.kappa = kappa;
    rep.deviation = Field(grid, std::move(v));
    rep.g = Field(grid, std::move(g));
    rep.rho = Field(grid, std::move(rho));
    rep.alpha = integral(rep.rho) / (2.0 * kappa);
}

// Circulant matrix of a real even Fourier multiplier acting on grid samples.
Eigen::MatrixXd circulant(const Grid& grid, const Symbol& m) {
    const int n = grid.size();
    std::vector<double> delta(n, 0.0);
    delta[0] = 1.0;
    const Field col = apply_multiplier(m, Field(grid, delta));
    Eigen::MatrixXd out(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) out(j, k) = col[fold_index(j - k, n)];
    }
    return out;
}

}  // namespace

const char* to_string(GreenRoute route) {
    switch (route) {
        case GreenRoute::Direct: return "direct";
        case GreenRoute::Series: return "series";
        case GreenRoute::Spectral: return "spectral";
    }
    return "?";
}

GreenRoute green_route_from_string(const std::string& name) {
    if (name == "direct") return GreenRoute::Direct;
    if (name == "series") return GreenRoute::Series;
    if (name == "spectral") return GreenRoute::Spectral;
    throw ValidationError("unknown green route '" + name + "' (direct|series|spectral)");
}

OperatorMatrix sandwich_operator(const Field& q, double kappa, int oversample, int dense_limit) {
    require_kappa(kappa, "sandwich_operator");
    if (oversample < 1) throw ValidationError("sandwich_operator: oversample must be >= 1");
    const Grid& grid = q.grid();
    const int m = oversample * grid.size();
    if (m > dense_limit) {
        throw ResourceLimitError("sandwich_operator: dense dimension " + std::to_string(m) +
                                 " exceeds limit " + std::to_string(dense_limit));
    }
    OperatorMatrix op;
    op.basis = Basis::Spectral;
    op.frequencies.resize(m);
    std::vector<double> s(m);
    for (int j = 0; j < m; ++j) {
        op.frequencies[j] = grid.dxi() * (j - m / 2);
        s[j] = 1.0 / std::sqrt(op.frequencies[j] * op.frequencies[j] + kappa * kappa);
    }
    const double qscale = std::sqrt(2.0 * kPi) / grid.length();
    op.matrix.resize(m, m);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            op.matrix(j, k) = s[j] * qscale * q_hat_at(q, j - k) * s[k];
        }
    }
    return op;
}

double hilbert_schmidt_norm_sq(const OperatorMatrix& op) { return op.matrix.squaredNorm(); }

double neumann_ratio(const Field& q, double kappa) {
    const double h = sobolev_norm(q, -1.0, kappa);
    return h / std::sqrt(kappa);
}

Field h1(const Field& q, double kappa) {
    require_kappa(kappa, "h1");
    return (-1.0 / kappa) * resolvent(q, 2.0 * kappa);
}

Field h2(const Field& q, double kappa) {
    require_kappa(kappa, "h2");
    const Grid& grid = q.grid();
    const int n = grid.size();
    const int half = n / 2;
    const double k2 = 4.0 * kappa * kappa;
    const double dxi = grid.dxi();
    const double prefactor = dxi / (2.0 * kappa * std::sqrt(2.0 * kPi));
    Spectrum out(n, 0.0);
    // Output wavenumber a = b + c with b, c the wavenumbers of the two q factors.
    for (int b = -half + 1; b < half; ++b) {
        const Complex qb = q_hat_at(q, b);
        if (qb == 0.0) continue;
        const double eta = dxi * b;
        for (int c = -half + 1; c < half; ++c) {
            const Complex qc = q_hat_at(q, c);
            if (qc == 0.0) continue;
            const double xi = dxi * (b + c);
            const double mid = xi - eta;
            const double num = xi * xi + mid * mid + eta * eta + 6.0 * k2;
            const double den = (xi * xi + k2) * (mid * mid + k2) * (eta * eta + k2);
            out[fold_index(b + c, n)] += prefactor * num / den * qc * qb;
        }
    }
    return Field::from_spectrum(grid, out);
}

std::vector<Field> h_ell_terms(const Field& q, double kappa, int lmax, const SeriesOptions& opts) {
    require_kappa(kappa, "h_ell_series");
    if (lmax < 1) throw ValidationError("h_ell_series: ell must be >= 1");
    const Grid& grid = q.grid();
    const int n = grid.size();
    const OperatorMatrix op = sandwich_operator(q, kappa, opts.oversample, opts.dense_limit);
    const int m = static_cast<int>(op.frequencies.size());
    Eigen::VectorXd s(m);
    for (int j = 0; j < m; ++j) {
        const double xi = op.frequencies[j];
        s[j] = 1.0 / std::sqrt(xi * xi + kappa * kappa);
    }
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * kPi);

    std::vector<Field> terms;
    terms.reserve(lmax);
    Eigen::MatrixXcd power = op.matrix;
    for (int ell = 1; ell <= lmax; ++ell) {
        if (ell > 1) power = (op.matrix * power).eval();
        // Sum each diagonal of S A^l S: entry (j, k) carries frequency j - k.
        std::vector<Complex> diag_sum(2 * m - 1, 0.0);
        for (int k = 0; k < m; ++k) {
            for (int j = 0; j < m; ++j) diag_sum[j - k + m - 1] += s[j] * power(j, k) * s[k];
        }
        if (ell == 1 && opts.first_order_tail) {
            // Free-loop lattice sum outside the basis, from the infinite sum
            // sum_eta 1/((eta^2+k^2)((eta+p)^2+k^2)) = L / (k (p^2 + 4 k^2)).
            const double qscale = std::sqrt(2.0 * kPi) / grid.length();
            for (int p = -(n / 2) + 1; p < n / 2; ++p) {
                const Complex qp = q_hat_at(q, p);
                if (qp == 0.0) continue;
                const double xp = grid.dxi() * p;
                double inside = 0.0;
                for (int k = 0; k < m; ++k) {
                    const int j = k + p;
                    if (j < 0 || j >= m) continue;
                    const double a = op.frequencies[k], b = op.frequencies[j];
                    inside += 1.0 / ((a * a + kappa * kappa) * (b * b + kappa * kappa));
                }
                const double full = grid.length() / (kappa * (xp * xp + 4.0 * kappa * kappa));
                diag_sum[p + m - 1] += qscale * qp * (full - inside);
            }
        }
        Spectrum coeffs(n, 0.0);
        const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
        for (int p = -(m - 1); p <= m - 1; ++p) {
            coeffs[fold_index(p, n)] += sign * inv_sqrt_2pi * diag_sum[p + m - 1];
        }
        terms.push_back(Field::from_spectrum(grid, coeffs));
    }
    return terms;
}

Field h_ell_series(const Field& q, double kappa, int ell, const SeriesOptions& opts) {
    return h_ell_terms(q, kappa, ell, opts).back();
}

GreenReport green_diagonal_series(const Field& q, double kappa, int lmax, const GreenOptions& opts) {
    require_kappa(kappa, "green_diagonal_series");
    if (lmax < 1) throw ValidationError("green_diagonal_series: l_max must be >= 1");
    const double r = neumann_ratio(q, kappa);
    if (r >= opts.hs_guard) {
        std::ostringstream msg;
        msg << "green_diagonal_series: Neumann series not contractive, kappa^{-1/2}||q||_{H^-1_kappa} = "
            << r << " >= " << opts.hs_guard;
        throw DivergenceError(msg.str());
    }
    const Grid& grid = q.grid();
    GreenReport rep(grid);
    rep.route = GreenRoute::Series;
    rep.h1 = h1(q, kappa);
    Field rem(grid);
    if (lmax >= 2) rem += h2(q, kappa);
    if (lmax >= 3) {
        SeriesOptions so;
        so.oversample = opts.oversample;
        so.dense_limit = opts.dense_limit;
        const auto terms = h_ell_terms(q, kappa, lmax, so);
        for (int ell = 3; ell <= lmax; ++ell) rem += terms[ell - 1];
    }
    rep.remainder = rem;
    rep.series_terms_used = lmax;
    rep.tail_estimate = std::pow(r, lmax + 1) / ((1.0 - r) * kappa);
    finish_report(rep, q, kappa);
    return rep;
}

GreenReport green_diagonal_direct(const Field& q, double kappa, const GreenOptions& opts) {
    require_kappa(kappa, "green_diagonal_direct");
    const Grid& grid = q.grid();
    const int n = grid.size();
    if (n > opts.dense_limit) {
        throw ResourceLimitError("green_diagonal_direct: N=" + std::to_string(n) +
                                 " exceeds dense limit " + std::to_string(opts.dense_limit));
    }
    const double k2 = kappa * kappa;
    const Eigen::MatrixXd free_inv = circulant(grid, Symbol::resolvent(kappa));
    const Eigen::MatrixXd free_op = circulant(grid, Symbol([k2](double xi) { return Complex(xi * xi + k2); }));
    Eigen::Map<const Eigen::VectorXd> qv(q.values().data(), n);

    Eigen::MatrixXd op = free_op;
    op.diagonal() += qv;
    Eigen::LLT<Eigen::MatrixXd> llt(op);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("green_diagonal_direct: -d^2 + q + kappa^2 is not positive definite");
    }
    const double rcond = llt.rcond();
    if (!(rcond > 1e-13)) {
        std::ostringstream msg;
        msg << "green_diagonal_direct: near-singular system, reciprocal condition " << rcond;
        throw NumericalError(msg.str());
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    // Orders l >= 2 of the resolvent: (R0 q)^2 R, read on the diagonal.
    const Eigen::MatrixXd r0q = free_inv * qv.asDiagonal();
    const Eigen::MatrixXd second = r0q * r0q;
    const Eigen::VectorXd diag = second.cwiseProduct(inv.transpose()).rowwise().sum() / grid.dx();

    GreenReport rep(grid);
    rep.route = GreenRoute::Direct;
    rep.h1 = h1(q, kappa);
    rep.remainder = Field(grid, std::vector<double>(diag.data(), diag.data() + n));
    rep.rcond = rcond;
    finish_report(rep, q, kappa);
    return rep;
}

GreenReport green_diagonal_spectral(const Field& q, double kappa, const GreenOptions& opts) {
    require_kappa(kappa, "green_diagonal_spectral");
    const Grid& grid = q.grid();
    const int n = grid.size();
    const double k2 = kappa * kappa;
    const Field first = h1(q, kappa);

    // With v = h1 + r the identity becomes
    //   (-d^2 + 4k^2) r = -4 q v - k [ -2 v v'' + (v')^2 + 4 q v^2 + 4 k^2 v^2 ].
    Field rem(grid);
    double prev_update = INFINITY;
    int it = 0;
    for (;; ++it) {
        if (it >= opts.spectral_max_iter) {
            throw NumericalError("green_diagonal_spectral: fixed point did not converge in " +
                                 std::to_string(opts.spectral_max_iter) + " iterations");
        }
        const Field v = first + rem;
        const Field v1 = derivative(v, 1);
        const Field v2 = derivative(v, 2);
        std::vector<double> rhs(n);
        for (int j = 0; j < n; ++j) {
            const double vj = v[j];
            rhs[j] = -4.0 * q[j] * vj -
                     kappa * (-2.0 * vj * v2[j] + v1[j] * v1[j] + 4.0 * q[j] * vj * vj + 4.0 * k2 * vj * vj);
        }
        const Field next = resolvent(Field(grid, std::move(rhs)), 2.0 * kappa);
        const double update = (next - rem).max_abs();
        const double scale = next.max_abs();
        rem = next;
        if (!std::isfinite(update)) throw NumericalError("green_diagonal_spectral: iteration diverged");
        if (update <= opts.spectral_tol * scale || scale == 0.0) {
            prev_update = update;
            break;
        }
        // Rounding floor: no further contraction below 1e-12 relative.
        if (update <= 1e-12 * scale && update >= prev_update) {
            prev_update = update;
            break;
        }
        if (it > 8 && update > 1e3 * (scale + 1e-300)) {
            throw NumericalError("green_diagonal_spectral: fixed point diverges; q too large for kappa");
        }
        prev_update = update;
    }
    GreenReport rep(grid);
    rep.route = GreenRoute::Spectral;
    rep.h1 = first;
    rep.remainder = rem;
    rep.tail_estimate = prev_update;
    rep.iterations = it + 1;
    finish_report(rep, q, kappa);
    return rep;
}

GreenReport green_diagonal(const Field& q, double kappa, const GreenOptions& opts) {
    switch (opts.route) {
        case GreenRoute::Direct: return green_diagonal_direct(q, kappa, opts);
        case GreenRoute::Series: return green_diagonal_series(q, kappa, opts.series_terms, opts);
        case GreenRoute::Spectral: return green_diagonal_spectral(q, kappa, opts);
    }
    throw ValidationError("green_diagonal: unknown route");
}

double alpha_of(const Field& q, double kappa, const GreenOptions& opts) {
    return green_diagonal(q, kappa, opts).alpha;
}

Field diffeo_forward(const Field& q, double kappa, const GreenOptions& opts) {
    const GreenReport rep = green_diagonal(q, kappa, opts);
    std::vector<double> out(q.size());
    for (int j = 0; j < q.size(); ++j) out[j] = 2.0 * kappa * rep.deviation[j] / rep.g[j];
    return Field(q.grid(), std::move(out));
}

DiffeoResult diffeo_inverse(const Field& w, double kappa, const DiffeoOptions& opts) {
    require_kappa(kappa, "diffeo_inverse");
    const Grid& grid = w.grid();
    const double k4 = 4.0 * kappa * kappa;
    // Approximate inverse Jacobian: q = -(1/(4 kappa)) (-d^2 + 4 kappa^2) w.
    const Symbol precond([kappa, k4](double xi) { return Complex(-(xi * xi + k4) / (4.0 * kappa)); });

    DiffeoResult res{Field(grid), 0, 0.0};
    Field q = apply_multiplier(precond, w);
    Field resid = diffeo_forward(q, kappa, opts.green) - w;
    double norm = sobolev_norm(resid, 1.0, kappa);
    int it = 0;
    while (norm > opts.tol) {
        if (++it > opts.max_iterations) {
            std::ostringstream msg;
            msg << "diffeo_inverse: no convergence after " << opts.max_iterations
                << " iterations, residual " << norm;
            throw NumericalError(msg.str());
        }
        const Field step = apply_multiplier(precond, resid);
        double damping = 1.0;
        for (;;) {
            Field trial = q - damping * step;
            Field trial_resid = diffeo_forward(trial, kappa, opts.green) - w;
            const double trial_norm = sobolev_norm(trial_resid, 1.0, kappa);
            if (trial_norm < norm || damping < 1.0 / 1024.0) {
                q = std::move(trial);
                resid = std::move(trial_resid);
                norm = trial_norm;
                break;
            }
            damping *= 0.5;
        }
    }
    res.q = q;
    res.iterations = it;
    res.residual = norm;
    return res;
}

}  // namespace kdv5
