#include "kdv5/flows.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "kdv5/error.hpp"

namespace kdv5 {
namespace {

bool needs_kappa(FlowKind kind) { return kind == FlowKind::HKappa || kind == FlowKind::Difference; }

// d/dx [-10 q q'' - 5 (q')^2 + 10 q^3]
Field nonlinear_fifth(const Field& q) {
    const Field q1 = derivative(q, 1);
    const Field q2 = derivative(q, 2);
    const Field qq = dealiased_product(q, q);
    Field bracket = -10.0 * dealiased_product(q, q2);
    bracket -= 5.0 * dealiased_product(q1, q1);
    bracket += 10.0 * dealiased_product(qq, q);
    return derivative(bracket, 1);
}

// d/dx [-64 kappa^7 r + 12 kappa^2 q^2], r = g - 1/(2 kappa) - h1.
Field nonlinear_hkappa(const Field& q, double kappa, const GreenOptions& green) {
    const GreenReport rep = green_diagonal(q, kappa, green);
    const double k2 = kappa * kappa;
    const double k7 = k2 * k2 * k2 * kappa;
    Field bracket = -64.0 * k7 * rep.remainder;
    bracket += 12.0 * k2 * dealiased_product(q, q);
    return derivative(bracket, 1);
}

Symbol hkappa_symbol(double kappa) {
    const double k2 = 4.0 * kappa * kappa;
    return Symbol([k2](double xi) {
        const double x2 = xi * xi;
        return Complex(0.0, xi * k2 * x2 * x2 / (x2 + k2));
    });
}

Symbol difference_symbol(double kappa) {
    const double k2 = 4.0 * kappa * kappa;
    return Symbol([k2](double xi) {
        const double x2 = xi * xi;
        return Complex(0.0, xi * x2 * x2 * x2 / (x2 + k2));
    });
}

Field nonlinear_eval(const Field& q, const FlowSpec& flow, const std::optional<Symbol>& override_symbol) {
    if (override_symbol) return rhs(q, flow) - apply_multiplier(*override_symbol, q);
    return nonlinear_part(q, flow);
}

bool all_finite(const Spectrum& u) {
    for (const Complex& c : u) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

}  // namespace

const char* to_string(FlowKind kind) {
    switch (kind) {
        case FlowKind::Fifth: return "fifth";
        case FlowKind::KdV: return "kdv";
        case FlowKind::Translation: return "translation";
        case FlowKind::HKappa: return "hkappa";
        case FlowKind::Difference: return "difference";
    }
    return "?";
}

FlowKind flow_kind_from_string(const std::string& name) {
    if (name == "fifth") return FlowKind::Fifth;
    if (name == "kdv") return FlowKind::KdV;
    if (name == "translation") return FlowKind::Translation;
    if (name == "hkappa") return FlowKind::HKappa;
    if (name == "difference") return FlowKind::Difference;
    throw ValidationError("unknown flow '" + name + "' (fifth|kdv|translation|hkappa|difference)");
}

void validate(const FlowSpec& flow) {
    if (needs_kappa(flow.kind) && !(flow.kappa >= 1.0 && std::isfinite(flow.kappa))) {
        throw ValidationError(std::string("flow ") + to_string(flow.kind) + ": kappa must be finite and >= 1");
    }
}

Field rhs_fifth(const Field& q) {
    const Field q1 = derivative(q, 1);
    const Field q2 = derivative(q, 2);
    const Field q3 = derivative(q, 3);
    Field out = derivative(q, 5);
    out -= 20.0 * dealiased_product(q1, q2);
    out -= 10.0 * dealiased_product(q, q3);
    out += 30.0 * dealiased_product(dealiased_product(q, q), q1);
    return out;
}

Field rhs_fifth_expanded(const Field& q) { return derivative(q, 5) + nonlinear_fifth(q); }

Field rhs_kdv(const Field& q) { return -derivative(q, 3) + 3.0 * derivative(dealiased_product(q, q), 1); }

Field rhs_translation(const Field& q) { return derivative(q, 1); }

Field rhs_hkappa(const Field& q, double kappa, const GreenOptions& green) {
    validate(FlowSpec::hkappa(kappa));
    return apply_multiplier(hkappa_symbol(kappa), q) + nonlinear_hkappa(q, kappa, green);
}

Field rhs_difference(const Field& q, double kappa, const GreenOptions& green) {
    validate(FlowSpec::difference(kappa));
    return apply_multiplier(difference_symbol(kappa), q) + nonlinear_fifth(q) -
           nonlinear_hkappa(q, kappa, green);
}

Field rhs(const Field& q, const FlowSpec& flow) {
    switch (flow.kind) {
        case FlowKind::Fifth: return rhs_fifth(q);
        case FlowKind::KdV: return rhs_kdv(q);
        case FlowKind::Translation: return rhs_translation(q);
        case FlowKind::HKappa: return rhs_hkappa(q, flow.kappa, flow.green);
        case FlowKind::Difference: return rhs_difference(q, flow.kappa, flow.green);
    }
    throw ValidationError("rhs: unknown flow");
}

Symbol linear_symbol(const FlowSpec& flow) {
    validate(flow);
    switch (flow.kind) {
        case FlowKind::Fifth: return Symbol::derivative(5);
        // -d^3 has symbol -(i xi)^3 = i xi^3.
        case FlowKind::KdV: return Symbol([](double xi) { return Complex(0.0, xi * xi * xi); });
        case FlowKind::Translation: return Symbol::derivative(1);
        case FlowKind::HKappa: return hkappa_symbol(flow.kappa);
        case FlowKind::Difference: return difference_symbol(flow.kappa);
    }
    throw ValidationError("linear_symbol: unknown flow");
}

Field nonlinear_part(const Field& q, const FlowSpec& flow) {
    validate(flow);
    switch (flow.kind) {
        case FlowKind::Fifth: return nonlinear_fifth(q);
        case FlowKind::KdV: return 3.0 * derivative(dealiased_product(q, q), 1);
        case FlowKind::Translation: return Field(q.grid());
        case FlowKind::HKappa: return nonlinear_hkappa(q, flow.kappa, flow.green);
        case FlowKind::Difference:
            return nonlinear_fifth(q) - nonlinear_hkappa(q, flow.kappa, flow.green);
    }
    throw ValidationError("nonlinear_part: unknown flow");
}

void validate(const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("integrator: dt must be positive");
    if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end)) {
        throw ValidationError("integrator: t_start and t_end must be finite");
    }
    if (cfg.snapshot_stride < 1) throw ValidationError("integrator: snapshot_stride must be >= 1");
    if (cfg.conserved_sample_stride < 0) throw ValidationError("integrator: conserved_sample_stride must be >= 0");
    if (!(cfg.stability_guard > 0.0)) throw ValidationError("integrator: stability_guard must be positive");
    for (std::size_t i = 0; i < cfg.alpha_kappas.size(); ++i) {
        if (!(cfg.alpha_kappas[i] >= 1.0)) throw ValidationError("integrator: alpha kappas must be >= 1");
        if (i > 0 && !(cfg.alpha_kappas[i] > cfg.alpha_kappas[i - 1])) {
            throw ValidationError("integrator: alpha kappas must be strictly increasing");
        }
    }
}

double nonlinear_lipschitz(const Field& q, const FlowSpec& flow, const std::optional<Symbol>& linear_override,
                           int iterations) {
    const Grid& grid = q.grid();
    std::mt19937_64 rng(20240517);
    std::normal_distribution<double> normal;
    std::vector<double> seed(grid.size());
    for (double& s : seed) s = normal(rng);
    Field v = dealias(Field(grid, std::move(seed)));
    const double scale = std::max(q.max_abs(), 1e-3);
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double norm = l2_norm(v);
        if (norm == 0.0) return 0.0;
        v *= 1.0 / norm;
        const double eps = 1e-5 * scale / std::max(v.max_abs(), 1e-300);
        const Field plus = nonlinear_eval(q + eps * v, flow, linear_override);
        const Field minus = nonlinear_eval(q - eps * v, flow, linear_override);
        Field jv = (plus - minus) * (0.5 / eps);
        estimate = l2_norm(jv);
        v = std::move(jv);
    }
    return estimate;
}

TrajectoryRecord integrate(const Field& q0, const FlowSpec& flow, const IntegratorConfig& cfg) {
    validate(flow);
    validate(cfg);
    const Grid& grid = q0.grid();
    const double span = cfg.t_end - cfg.t_start;
    const long steps = span == 0.0 ? 0 : static_cast<long>(std::ceil(std::abs(span) / cfg.dt - 1e-9));
    const double h = steps == 0 ? 0.0 : span / static_cast<double>(steps);

    if (cfg.check_stability && steps > 0) {
        const double lip = nonlinear_lipschitz(q0, flow, cfg.linear_symbol_override);
        if (std::abs(h) * lip > cfg.stability_guard) {
            std::ostringstream msg;
            msg << "integrate: dt*Lipschitz = " << std::abs(h) * lip << " exceeds stability guard "
                << cfg.stability_guard << " (Lipschitz estimate " << lip << "); reduce dt";
            throw ValidationError(msg.str());
        }
    }

    const Symbol lin = cfg.linear_symbol_override ? *cfg.linear_symbol_override : linear_symbol(flow);
    const int n = grid.size();
    std::vector<Complex> e_full(n), e_half(n);
    for (int k = 0; k < n; ++k) {
        const Complex m = lin(grid.xi(k));
        e_full[k] = std::exp(h * m);
        e_half[k] = std::exp(0.5 * h * m);
        if (k == grid.nyquist_index()) {
            e_full[k] = e_full[k].real();
            e_half[k] = e_half[k].real();
        }
    }
    const auto nl = [&](const Spectrum& u) {
        return nonlinear_eval(Field::from_spectrum(grid, u), flow, cfg.linear_symbol_override).spectrum();
    };

    TrajectoryRecord rec;
    rec.flow = flow;
    rec.integrator = cfg;
    const auto sample_conserved = [&](const Field& q, double t) {
        rec.conserved.push_back(conserved_report(q, cfg.alpha_kappas, flow.green, t));
    };
    rec.times.push_back(cfg.t_start);
    rec.snapshots.push_back(q0);
    sample_conserved(q0, cfg.t_start);

    Field q = q0;
    Spectrum a(n), b(n), c(n), next(n);
    for (long s = 1; s <= steps; ++s) {
        const double t = cfg.t_start + h * static_cast<double>(s);
        try {
            const Spectrum& u = q.spectrum();
            const Spectrum k1 = nl(u);
            for (int k = 0; k < n; ++k) a[k] = e_half[k] * (u[k] + 0.5 * h * k1[k]);
            const Spectrum k2 = nl(a);
            for (int k = 0; k < n; ++k) b[k] = e_half[k] * u[k] + 0.5 * h * k2[k];
            const Spectrum k3 = nl(b);
            for (int k = 0; k < n; ++k) c[k] = e_full[k] * u[k] + h * e_half[k] * k3[k];
            const Spectrum k4 = nl(c);
            for (int k = 0; k < n; ++k) {
                next[k] = e_full[k] * u[k] +
                          (h / 6.0) * (e_full[k] * k1[k] + 2.0 * e_half[k] * (k2[k] + k3[k]) + k4[k]);
            }
            if (!all_finite(next)) throw NumericalError("non-finite state");
            q = Field::from_spectrum(grid, next);
        } catch (const Error& err) {
            rec.aborted = true;
            std::ostringstream msg;
            msg << "integrate: aborted at step " << s << " (t=" << t << "): " << err.what();
            rec.message = msg.str();
            return rec;
        }
        const bool last = s == steps;
        if (last || s % cfg.snapshot_stride == 0) {
            rec.times.push_back(t);
            rec.snapshots.push_back(q);
        }
        if (last || (cfg.conserved_sample_stride > 0 && s % cfg.conserved_sample_stride == 0)) {
            sample_conserved(q, t);
        }
    }
    return rec;
}

}  // namespace kdv5
