#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "kdv5/flows.hpp"
#include "kdv5/grid.hpp"
#include "kdv5/schrodinger.hpp"

namespace kdv5 {

/// psi_z(x) = sech(d(x, z) / scale), d the distance on the periodic grid.
struct WeightFamily {
    double center = 0.0;
    double scale = 99.0;

    /// psi_z^power sampled on the grid, power in [1, 12].
    Field power(const Grid& grid, int power = 1) const;
};

/// j_5th(varkappa), the density current of rho under the fifth-order flow.
Field current_j5th(const Field& q, double varkappa, const GreenOptions& green = {});

/// j_kappa(varkappa), the density current of rho under the H_kappa flow.
/// Refuses |kappa^2 - varkappa^2| < gap.
Field current_jkappa(const Field& q, double varkappa, double kappa, const GreenOptions& green = {},
                     double gap = 1.0);

/// Current matching the trajectory's flow; KdV and Translation are refused.
Field current_for_flow(const Field& q, double varkappa, const FlowSpec& flow, double gap = 1.0);

struct TimeWindow {
    double t0 = 0.0;
    double t1 = 0.0;
};

/// max over interior snapshots in the window of
/// || (rho(t+) - rho(t-)) / (t+ - t-) + d/dx j(t) ||_{H^{-2}}.
double microscopic_residual(const TrajectoryRecord& traj, double varkappa, const TimeWindow& window,
                            double gap = 1.0);

struct LSReport {
    double kappa = 1.0;
    std::vector<double> centers;
    /// || (psi_z^6 q)'' ||_{L^2_t H^{-1}_varkappa} per center.
    std::vector<double> values;
    double supremum = 0.0;
    TimeWindow window;
};

/// Trapezoid rule in t over the snapshots inside the window (times may be
/// stored in either order). Throws ValidationError if the window is not covered.
LSReport ls_norm(const TrajectoryRecord& traj, double varkappa, const std::vector<double>& centers,
                 const TimeWindow& window);

/// Evenly spaced centers covering [-L/2, L/2).
std::vector<double> center_grid(const Grid& grid, double spacing);

/// Joins a backward run and a forward run from the same initial data into one
/// record with increasing times.
TrajectoryRecord join_trajectories(const TrajectoryRecord& backward, const TrajectoryRecord& forward);

struct IdentityResiduals {
    /// Relative residuals: max-norm of LHS - RHS over the largest term.
    double residual1 = 0.0;
    double residual2 = 0.0;
};

/// Exact Fourier-side identities linking h1, h2 and q at energy varkappa.
IdentityResiduals green_identity_residuals(const Field& q, double varkappa);

struct KappaConvergenceRow {
    double kappa = 0.0;
    /// sup_t || q_kappa(t) - q_5th(t) ||_{H^{-1}}.
    double distance = 0.0;
    /// sup_t | <phi, 1/g(t) - 1/g_kappa(t)> | at energy varkappa.
    double green_proxy = 0.0;
};

struct KappaConvergenceOptions {
    double varkappa = 2.0;
    std::function<double(double)> phi = [](double x) { return std::exp(-x * x); };
};

std::vector<KappaConvergenceRow> kappa_convergence_study(const Field& q0, const std::vector<double>& kappas,
                                                         double T, const IntegratorConfig& cfg,
                                                         const GreenOptions& green = {},
                                                         const KappaConvergenceOptions& opts = {});

/// |alpha - P/(4 kappa^3) + H_KdV/(16 kappa^5) - H_5th/(64 kappa^7)|, the error of
/// the three-term large-kappa expansion of alpha.
double alpha_expansion_remainder(const Field& q, double kappa, const GreenOptions& green = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kdv5
