#pragma once

#include <utility>
#include <vector>

#include "kdv5/grid.hpp"
#include "kdv5/schrodinger.hpp"

namespace kdv5 {

struct ConservedReport {
    double t = 0.0;
    /// Mass: integral q.
    double M = 0.0;
    /// Momentum: integral q^2 / 2.
    double P = 0.0;
    /// integral (q')^2 / 2 + q^3.
    double H_KdV = 0.0;
    /// integral (q'')^2 / 2 + 5 q (q')^2 + (5/2) q^4.
    double H_5th = 0.0;
    /// (varkappa, alpha) pairs, varkappa strictly increasing.
    std::vector<std::pair<double, double>> alpha_samples;
};

double mass(const Field& q);
double momentum(const Field& q);
double hamiltonian_kdv(const Field& q);
double hamiltonian_fifth(const Field& q);

/// Evaluates all functionals; alpha through the Green's function for every
/// kappa in kappa_list (sorted ascending, each >= 1).
ConservedReport conserved_report(const Field& q, const std::vector<double>& kappa_list,
                                 const GreenOptions& green = {}, double t = 0.0);

/// H_kappa = 64 kappa^7 alpha(kappa) - 16 kappa^4 P + 4 kappa^2 H_KdV.
double h_kappa_value(const Field& q, double kappa, const GreenOptions& green = {});

Field grad_P(const Field& q);
/// -q'' + 3 q^2.
Field grad_HKdV(const Field& q);
/// q'''' - 10 q q'' - 5 (q')^2 + 10 q^3.
Field grad_H5th(const Field& q);

}  // namespace kdv5
