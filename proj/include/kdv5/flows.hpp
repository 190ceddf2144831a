#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdv5/grid.hpp"
#include "kdv5/hamiltonians.hpp"
#include "kdv5/schrodinger.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {

enum class FlowKind { Fifth, KdV, Translation, HKappa, Difference };

const char* to_string(FlowKind kind);
FlowKind flow_kind_from_string(const std::string& name);

struct FlowSpec {
    FlowKind kind = FlowKind::Fifth;
    /// Regularization parameter for HKappa and Difference.
    double kappa = 0.0;
    GreenOptions green;

    static FlowSpec fifth() { return {FlowKind::Fifth, 0.0, {}}; }
    static FlowSpec kdv() { return {FlowKind::KdV, 0.0, {}}; }
    static FlowSpec translation() { return {FlowKind::Translation, 0.0, {}}; }
    static FlowSpec hkappa(double kappa, GreenOptions green = {}) { return {FlowKind::HKappa, kappa, green}; }
    static FlowSpec difference(double kappa, GreenOptions green = {}) {
        return {FlowKind::Difference, kappa, green};
    }
};

/// Throws ValidationError when kappa is missing or below 1 for HKappa/Difference.
void validate(const FlowSpec& flow);

/// q^(5) - 20 q' q'' - 10 q q''' + 30 q^2 q', products dealiased.
Field rhs_fifth(const Field& q);
/// Same flow in divergence form d/dx [q'''' - 10 q q'' - 5 (q')^2 + 10 q^3].
Field rhs_fifth_expanded(const Field& q);
/// -q''' + 6 q q'.
Field rhs_kdv(const Field& q);
/// q'.
Field rhs_translation(const Field& q);
/// d/dx { -64 kappa^7 (g - 1/(2 kappa)) - 16 kappa^4 q + 4 kappa^2 (-q'' + 3 q^2) }.
Field rhs_hkappa(const Field& q, double kappa, const GreenOptions& green = {});
Field rhs_difference(const Field& q, double kappa, const GreenOptions& green = {});
Field rhs(const Field& q, const FlowSpec& flow);

/// Stiff linear part L of the flow, removed exactly by the integrating factor.
Symbol linear_symbol(const FlowSpec& flow);
/// rhs(q) - L q, evaluated directly rather than by subtraction.
Field nonlinear_part(const Field& q, const FlowSpec& flow);

struct IntegratorConfig {
    double dt = 1e-5;
    double t_start = 0.0;
    /// May be below t_start for backward integration.
    double t_end = 0.1;
    /// Keep every k-th step as a snapshot (first and last always kept).
    int snapshot_stride = 1;
    /// Conserved report every k-th step; 0 samples only the endpoints.
    int conserved_sample_stride = 0;
    std::vector<double> alpha_kappas = {2.0, 4.0, 8.0};
    /// Upper bound for |dt| times the Lipschitz scale of the nonlinear part at t_start.
    double stability_guard = 2.0;
    bool check_stability = true;
    /// Replaces linear_symbol(flow). Its nonlinear part becomes rhs - override.
    std::optional<Symbol> linear_symbol_override;
};

void validate(const IntegratorConfig& cfg);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<ConservedReport> conserved;
    FlowSpec flow;
    IntegratorConfig integrator;
    /// Set when a non-finite state stopped the run; the record holds what came before.
    bool aborted = false;
    std::string message;
};

/// Power-iteration estimate of the L^2 Lipschitz scale of the nonlinear part at q.
double nonlinear_lipschitz(const Field& q, const FlowSpec& flow,
                           const std::optional<Symbol>& linear_override = std::nullopt,
                           int iterations = 12);

/// Integrating-factor RK4 (Lawson). Throws ValidationError if the stability guard
/// is violated before the first step.
TrajectoryRecord integrate(const Field& q0, const FlowSpec& flow, const IntegratorConfig& cfg);

}  // namespace kdv5
