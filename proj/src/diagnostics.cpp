#include "kdv5/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "kdv5/error.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {
namespace {

// 16 k^5 (g - 1/(2k)) + 4 k^2 q + q'' - 3 q^2, with the linear part folded into
// the exact multiplier -xi^4 / (xi^2 + 4 k^2) so that nothing large cancels.
Field fifth_bracket(const Field& q, const GreenReport& rep) {
    const double k = rep.kappa;
    const double k2 = 4.0 * k * k;
    const Symbol lin([k2](double xi) {
        const double x2 = xi * xi;
        return Complex(-x2 * x2 / (x2 + k2));
    });
    const double k5 = k * k * k * k * k;
    Field out = apply_multiplier(lin, q);
    out += 16.0 * k5 * rep.remainder;
    out -= 3.0 * dealiased_product(q, q);
    return out;
}

double max_abs_of(std::initializer_list<const Field*> fields) {
    double m = 0.0;
    for (const Field* f : fields) m = std::max(m, f->max_abs());
    return m;
}

}  // namespace

Field WeightFamily::power(const Grid& grid, int p) const {
    if (p < 1 || p > 12) throw ValidationError("weight: power must be in [1, 12]");
    if (!(scale > 0.0)) throw ValidationError("weight: scale must be positive");
    const double L = grid.length();
    const double z = center;
    const double s = scale;
    return Field::from_function(grid, [=](double x) {
        double d = std::remainder(x - z, L);
        return std::pow(1.0 / std::cosh(d / s), p);
    });
}

Field current_j5th(const Field& q, double varkappa, const GreenOptions& green) {
    const GreenReport rep = green_diagonal(q, varkappa, green);
    const Field bracket = fifth_bracket(q, rep);
    std::vector<double> first(q.size());
    for (int j = 0; j < q.size(); ++j) first[j] = -2.0 * varkappa / rep.g[j] * bracket[j];

    const Field q1 = derivative(q, 1);
    const Field qq = dealiased_product(q, q);
    Field source = derivative(q, 4);
    source -= 5.0 * derivative(qq, 2);
    source += 5.0 * dealiased_product(q1, q1);
    source += 10.0 * dealiased_product(qq, q);
    return Field(q.grid(), std::move(first)) - 4.0 * varkappa * varkappa * resolvent(source, 2.0 * varkappa);
}

Field current_jkappa(const Field& q, double varkappa, double kappa, const GreenOptions& green, double gap) {
    const double k2 = kappa * kappa;
    const double v2 = varkappa * varkappa;
    if (!(kappa >= 1.0)) throw ValidationError("current_jkappa: kappa must be >= 1");
    if (!(std::abs(k2 - v2) >= gap)) {
        std::ostringstream msg;
        msg << "current_jkappa: |kappa^2 - varkappa^2| = " << std::abs(k2 - v2) << " is below the pole gap " << gap;
        throw ValidationError(msg.str());
    }
    const GreenReport at_energy = green_diagonal(q, varkappa, green);
    const GreenReport at_flow = green_diagonal(q, kappa, green);
    const double a = 32.0 * k2 * k2 * k2 * kappa * varkappa / (k2 - v2);
    const int n = q.size();

    // F = 2 varkappa - 1/g(varkappa), V = g(kappa) - 1/(2 kappa); the constant
    // terms of the current cancel exactly in this arrangement.
    std::vector<double> local(n);
    for (int j = 0; j < n; ++j) {
        const double f = 2.0 * varkappa * at_energy.deviation[j] / at_energy.g[j];
        const double v = at_flow.deviation[j];
        local[j] = a * (-f / (2.0 * kappa) + 2.0 * varkappa * v - v * f) +
                   16.0 * k2 * varkappa * (k2 + v2) * f + 8.0 * k2 * varkappa * q[j] * (2.0 * varkappa - f);
    }
    // -16 kappa^5 V - 4 kappa^2 q - q'' + 3 q^2 is minus the fifth-order bracket at kappa.
    const Field bracket = fifth_bracket(q, at_flow);
    return Field(q.grid(), std::move(local)) + 16.0 * k2 * v2 * resolvent(bracket, 2.0 * varkappa);
}

Field current_for_flow(const Field& q, double varkappa, const FlowSpec& flow, double gap) {
    switch (flow.kind) {
        case FlowKind::Fifth: return current_j5th(q, varkappa, flow.green);
        case FlowKind::HKappa: return current_jkappa(q, varkappa, flow.kappa, flow.green, gap);
        case FlowKind::Difference:
            return current_j5th(q, varkappa, flow.green) - current_jkappa(q, varkappa, flow.kappa, flow.green, gap);
        case FlowKind::KdV:
        case FlowKind::Translation: break;
    }
    throw ValidationError(std::string("microscopic current not available for flow ") + to_string(flow.kind));
}

double microscopic_residual(const TrajectoryRecord& traj, double varkappa, const TimeWindow& window, double gap) {
    const FlowSpec& flow = traj.flow;
    if (flow.kind == FlowKind::KdV || flow.kind == FlowKind::Translation) {
        throw ValidationError(std::string("microscopic_residual: no current for flow ") + to_string(flow.kind));
    }
    const auto& t = traj.times;
    const std::size_t n = t.size();
    if (n < 3) throw ValidationError("microscopic_residual: need at least three snapshots");
    const double lo = std::min(window.t0, window.t1);
    const double hi = std::max(window.t0, window.t1);

    std::vector<std::optional<Field>> rho(n);
    const auto rho_at = [&](std::size_t i) -> const Field& {
        if (!rho[i]) rho[i] = green_diagonal(traj.snapshots[i], varkappa, flow.green).rho;
        return *rho[i];
    };
    double worst = 0.0;
    bool any = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (t[i] < lo - 1e-12 || t[i] > hi + 1e-12) continue;
        any = true;
        Field res = (rho_at(i + 1) - rho_at(i - 1)) * (1.0 / (t[i + 1] - t[i - 1]));
        res += derivative(current_for_flow(traj.snapshots[i], varkappa, flow, gap), 1);
        worst = std::max(worst, sobolev_norm(res, -2.0, 1.0));
        rho[i - 1].reset();
    }
    if (!any) throw ValidationError("microscopic_residual: no interior snapshot inside the window");
    return worst;
}

std::vector<double> center_grid(const Grid& grid, double spacing) {
    if (!(spacing > 0.0)) throw ValidationError("center spacing must be positive");
    const int count = std::max(1, static_cast<int>(std::floor(grid.length() / spacing + 1e-9)));
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = -0.5 * grid.length() + spacing * i;
    return out;
}

LSReport ls_norm(const TrajectoryRecord& traj, double varkappa, const std::vector<double>& centers,
                 const TimeWindow& window) {
    if (!(varkappa >= 1.0)) throw ValidationError("ls_norm: varkappa must be >= 1");
    if (centers.empty()) throw ValidationError("ls_norm: empty center grid");
    if (traj.times.empty()) throw ValidationError("ls_norm: empty trajectory");
    const double lo = std::min(window.t0, window.t1);
    const double hi = std::max(window.t0, window.t1);
    const auto [tmin, tmax] = std::minmax_element(traj.times.begin(), traj.times.end());
    const double tol = 1e-9 * std::max(1.0, hi - lo);
    if (*tmin > lo + tol || *tmax < hi - tol) {
        std::ostringstream msg;
        msg << "ls_norm: trajectory covers [" << *tmin << ", " << *tmax << "], window is [" << lo << ", " << hi << "]";
        throw ValidationError(msg.str());
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] >= lo - tol && traj.times[i] <= hi + tol) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return traj.times[a] < traj.times[b]; });

    LSReport rep;
    rep.kappa = varkappa;
    rep.centers = centers;
    rep.window = {lo, hi};
    const Grid& grid = traj.snapshots.front().grid();
    for (double z : centers) {
        const Field w = WeightFamily{z}.power(grid, 6);
        std::vector<double> sq(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            const double v = sobolev_norm(derivative(product(w, traj.snapshots[order[k]]), 2), -1.0, varkappa);
            sq[k] = v * v;
        }
        double acc = 0.0;
        for (std::size_t k = 1; k < order.size(); ++k) {
            acc += 0.5 * (sq[k] + sq[k - 1]) * (traj.times[order[k]] - traj.times[order[k - 1]]);
        }
        rep.values.push_back(std::sqrt(acc));
    }
    rep.supremum = *std::max_element(rep.values.begin(), rep.values.end());
    return rep;
}

TrajectoryRecord join_trajectories(const TrajectoryRecord& backward, const TrajectoryRecord& forward) {
    TrajectoryRecord out;
    out.flow = forward.flow;
    out.integrator = forward.integrator;
    out.aborted = backward.aborted || forward.aborted;
    out.message = backward.message.empty() ? forward.message : backward.message;
    for (std::size_t i = backward.times.size(); i-- > 0;) {
        if (!out.times.empty() && backward.times[i] <= out.times.back()) continue;
        out.times.push_back(backward.times[i]);
        out.snapshots.push_back(backward.snapshots[i]);
    }
    for (std::size_t i = 0; i < forward.times.size(); ++i) {
        if (!out.times.empty() && forward.times[i] <= out.times.back()) continue;
        out.times.push_back(forward.times[i]);
        out.snapshots.push_back(forward.snapshots[i]);
    }
    out.conserved = backward.conserved;
    out.conserved.insert(out.conserved.end(), forward.conserved.begin(), forward.conserved.end());
    std::sort(out.conserved.begin(), out.conserved.end(),
              [](const ConservedReport& a, const ConservedReport& b) { return a.t < b.t; });
    return out;
}

IdentityResiduals green_identity_residuals(const Field& q, double varkappa) {
    if (!(varkappa >= 1.0)) throw ValidationError("identity check: varkappa must be >= 1");
    const double k = varkappa;
    const double k2 = k * k, k3 = k2 * k, k4 = k2 * k2, k5 = k4 * k;
    const Field a = h1(q, k);
    const Field a1 = derivative(a, 1);
    const Field a2 = derivative(a, 2);
    const Field a4 = derivative(a, 4);
    const Field a6 = derivative(a, 6);

    IdentityResiduals out;
    {
        const Field left = 4.0 * k2 * (16.0 * k5 * a + 4.0 * k2 * q + derivative(q, 2));
        const Field mid = 4.0 * k3 * a4;
        const Field right = -derivative(q, 4) + k * a6;
        const double scale = max_abs_of({&left, &mid, &right});
        if (scale > 0.0) out.residual1 = std::max((left - mid).max_abs(), (mid - right).max_abs()) / scale;
    }
    {
        const Field b = h2(q, k);
        const Field aa = product(a, a);
        const Field a1a1 = product(a1, a1);
        const Field t1 = 16.0 * k5 * b;
        const Field t2 = 3.0 * k2 * product(a2, a2);
        const Field t3 = -3.0 * product(q, q);
        const Field t4 = -4.0 * k4 * (5.0 * a1a1 - 5.0 * derivative(aa, 2));
        const Field t5 = 4.0 * k4 * derivative(resolvent(a1a1 + 2.0 * derivative(aa, 2), 2.0 * k), 2);
        const double scale = max_abs_of({&t1, &t2, &t3, &t4, &t5});
        if (scale > 0.0) out.residual2 = ((t1 + t2 + t3) - (t4 + t5)).max_abs() / scale;
    }
    return out;
}

std::vector<KappaConvergenceRow> kappa_convergence_study(const Field& q0, const std::vector<double>& kappas, double T,
                                                         const IntegratorConfig& cfg, const GreenOptions& green,
                                                         const KappaConvergenceOptions& opts) {
    if (!(T > 0.0)) throw ValidationError("kappa_convergence_study: T must be positive");
    IntegratorConfig run = cfg;
    run.t_start = 0.0;
    run.t_end = T;
    run.alpha_kappas.clear();

    const auto check = [](const TrajectoryRecord& r) {
        if (r.aborted) throw NumericalError(r.message);
    };
    FlowSpec fifth = FlowSpec::fifth();
    fifth.green = green;
    const TrajectoryRecord ref = integrate(q0, fifth, run);
    check(ref);
    const Field phi = Field::from_function(q0.grid(), opts.phi);
    std::vector<Field> ref_map;
    for (const Field& q : ref.snapshots) ref_map.push_back(diffeo_forward(q, opts.varkappa, green));

    std::vector<KappaConvergenceRow> rows;
    for (double kappa : kappas) {
        const TrajectoryRecord traj = integrate(q0, FlowSpec::hkappa(kappa, green), run);
        check(traj);
        if (traj.times.size() != ref.times.size()) {
            throw NumericalError("kappa_convergence_study: snapshot times differ between runs");
        }
        KappaConvergenceRow row;
        row.kappa = kappa;
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            row.distance = std::max(row.distance, sobolev_norm(traj.snapshots[i] - ref.snapshots[i], -1.0, 1.0));
            // 1/g - 1/g_kappa = F(q_kappa) - F(q) with F = 2 varkappa - 1/g.
            const Field diff = diffeo_forward(traj.snapshots[i], opts.varkappa, green) - ref_map[i];
            row.green_proxy = std::max(row.green_proxy, std::abs(inner(phi, diff)));
        }
        rows.push_back(row);
    }
    return rows;
}

double alpha_expansion_remainder(const Field& q, double kappa, const GreenOptions& green) {
    const double k2 = kappa * kappa;
    const double k3 = k2 * kappa, k5 = k3 * k2, k7 = k5 * k2;
    const double alpha = alpha_of(q, kappa, green);
    return std::abs(alpha - momentum(q) / (4.0 * k3) + hamiltonian_kdv(q) / (16.0 * k5) -
                    hamiltonian_fifth(q) / (64.0 * k7));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need two or more points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace kdv5
