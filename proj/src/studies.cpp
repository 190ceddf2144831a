#include "kdv5/studies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "kdv5/config.hpp"
#include "kdv5/diagnostics.hpp"
#include "kdv5/output.hpp"
#include "kdv5/random_fields.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {
namespace {

using Runner = std::function<void(const ExperimentConfig&, const std::filesystem::path&, StudyResult&)>;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

void add(StudyResult& res, std::string name, bool ok, std::string detail) {
    res.invariants.push_back({std::move(name), ok, std::move(detail)});
}

TrajectoryRecord checked_run(const Field& q0, const FlowSpec& flow, const IntegratorConfig& cfg,
                             const std::filesystem::path& partial_path, StudyResult& res) {
    TrajectoryRecord traj = integrate(q0, flow, cfg);
    if (traj.aborted) {
        write_snapshots_jsonl(partial_path, traj);
        res.files.push_back(partial_path);
        throw NumericalError(traj.message);
    }
    return traj;
}

double relative_change(double now, double start) {
    const double d = std::abs(now - start);
    return start != 0.0 ? d / std::abs(start) : d;
}

std::vector<Field> random_fields(const ExperimentConfig& cfg) {
    RandomFieldOptions opts;
    opts.h_minus1_norm = cfg.initial_data.h_minus1_norm;
    std::vector<Field> out;
    for (int i = 0; i < cfg.diagnostics.samples; ++i) out.push_back(random_band_limited(cfg.grid(), cfg.seed + i, opts));
    return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

void run_evolve(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const TrajectoryRecord traj = checked_run(make_initial_data(cfg), cfg.flow, cfg.integrator, dir / "snapshots.jsonl", res);
    if (cfg.output.wants("jsonl")) {
        write_snapshots_jsonl(dir / "snapshots.jsonl", traj);
        res.files.push_back(dir / "snapshots.jsonl");
    }
    if (cfg.output.wants("csv")) {
        write_conserved_csv(dir / "conserved.csv", traj.conserved);
        res.files.push_back(dir / "conserved.csv");
    }
    add(res, "run completed", true, std::to_string(traj.times.size()) + " snapshots");
}

void run_conserve(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const TrajectoryRecord traj = checked_run(make_initial_data(cfg), cfg.flow, cfg.integrator, dir / "snapshots.jsonl", res);
    if (cfg.output.wants("csv")) {
        write_conserved_csv(dir / "conserved.csv", traj.conserved);
        res.files.push_back(dir / "conserved.csv");
    }
    if (cfg.output.wants("jsonl")) {
        write_snapshots_jsonl(dir / "snapshots.jsonl", traj);
        res.files.push_back(dir / "snapshots.jsonl");
    }
    const ConservedReport& first = traj.conserved.front();
    std::map<std::string, double> drift;
    for (const ConservedReport& r : traj.conserved) {
        drift["M"] = std::max(drift["M"], relative_change(r.M, first.M));
        drift["P"] = std::max(drift["P"], relative_change(r.P, first.P));
        drift["H_KdV"] = std::max(drift["H_KdV"], relative_change(r.H_KdV, first.H_KdV));
        drift["H_5th"] = std::max(drift["H_5th"], relative_change(r.H_5th, first.H_5th));
        for (std::size_t i = 0; i < r.alpha_samples.size(); ++i) {
            std::ostringstream key;
            key << "alpha(" << r.alpha_samples[i].first << ")";
            drift[key.str()] = std::max(drift[key.str()],
                                        relative_change(r.alpha_samples[i].second, first.alpha_samples[i].second));
        }
    }
    const double tol = cfg.diagnostics.drift_tolerance;
    for (const auto& [name, d] : drift) {
        add(res, name + " drift", d < tol, "relative drift " + fmt(d) + " (tolerance " + fmt(tol) + ")");
    }
}

void run_microscopic(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const Field q0 = make_initial_data(cfg);
    const double varkappa = cfg.diagnostics.kappa_list.front();
    const TimeWindow window{cfg.diagnostics.window_t0, cfg.diagnostics.window_t1};
    std::vector<double> dts, residuals;
    for (int h = 0; h <= cfg.diagnostics.halvings; ++h) {
        IntegratorConfig run = cfg.integrator;
        run.dt = cfg.integrator.dt / std::pow(2.0, h);
        run.t_end = std::max(window.t0, window.t1);
        run.snapshot_stride = 1;
        run.alpha_kappas.clear();
        const TrajectoryRecord traj = checked_run(q0, cfg.flow, run, dir / "snapshots.jsonl", res);
        dts.push_back(run.dt);
        residuals.push_back(microscopic_residual(traj, varkappa, window));
    }
    if (cfg.output.wants("csv")) {
        CsvWriter csv(dir / "microscopic.csv", {"dt", "kappa", "residual"});
        for (std::size_t i = 0; i < dts.size(); ++i) {
            csv.row({format_number(dts[i]), format_number(varkappa), format_number(residuals[i])});
        }
        res.files.push_back(dir / "microscopic.csv");
    }
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        const double ratio = residuals[i - 1] / residuals[i];
        const bool ok = residuals[i - 1] == 0.0 || ratio >= 3.5;
        add(res, "residual reduction at dt=" + fmt(dts[i]), ok, "ratio " + fmt(ratio) + " (required >= 3.5)");
    }
}

void run_ls(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const Field q0 = make_initial_data(cfg);
    const double t0 = std::min(cfg.diagnostics.window_t0, cfg.diagnostics.window_t1);
    const double t1 = std::max(cfg.diagnostics.window_t0, cfg.diagnostics.window_t1);
    const double start = cfg.integrator.t_start;
    if (t0 > start || t1 < start) {
        throw ConfigError("diagnostics.window", "the ls study needs a window containing integrator.t_start");
    }
    IntegratorConfig fwd = cfg.integrator;
    fwd.t_end = t1;
    IntegratorConfig bwd = cfg.integrator;
    bwd.t_end = t0;
    const TrajectoryRecord forward = checked_run(q0, cfg.flow, fwd, dir / "snapshots.jsonl", res);
    const TrajectoryRecord backward = checked_run(q0, cfg.flow, bwd, dir / "snapshots_backward.jsonl", res);
    const TrajectoryRecord traj = join_trajectories(backward, forward);

    const auto centers = center_grid(q0.grid(), cfg.diagnostics.center_spacing);
    const double delta = cfg.diagnostics.ls_delta;
    std::vector<LSReport> reports;
    std::vector<double> ratios;
    for (double varkappa : cfg.diagnostics.kappa_list) {
        reports.push_back(ls_norm(traj, varkappa, centers, {t0, t1}));
        const double n0 = sobolev_norm(q0, -1.0, varkappa);
        const double bound = n0 * n0 + std::pow(varkappa, -1.0 / 6.0) * delta * delta;
        ratios.push_back(reports.back().supremum * reports.back().supremum / bound);
    }
    if (cfg.output.wants("csv")) {
        write_ls_csv(dir / "ls.csv", reports);
        CsvWriter csv(dir / "ls_summary.csv", {"kappa", "ls_sup", "ratio"});
        for (std::size_t i = 0; i < reports.size(); ++i) {
            csv.row({format_number(reports[i].kappa), format_number(reports[i].supremum), format_number(ratios[i])});
        }
        res.files.push_back(dir / "ls.csv");
        res.files.push_back(dir / "ls_summary.csv");
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::ostringstream name;
        name << "LS supremum finite at kappa=" << reports[i].kappa;
        add(res, name.str(), std::isfinite(reports[i].supremum),
            "sup " + fmt(reports[i].supremum) + ", ratio to bound " + fmt(ratios[i]));
    }
}

void run_kappa_convergence(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const Field q0 = make_initial_data(cfg);
    const double T = cfg.integrator.t_end - cfg.integrator.t_start;
    const auto rows = kappa_convergence_study(q0, cfg.diagnostics.flow_kappas, T, cfg.integrator, cfg.flow.green);
    std::vector<double> dist, proxy;
    for (const auto& r : rows) {
        dist.push_back(r.distance);
        proxy.push_back(r.green_proxy);
    }
    if (cfg.output.wants("csv")) {
        CsvWriter csv(dir / "kappa_convergence.csv", {"kappa", "distance", "green_proxy"});
        for (const auto& r : rows) csv.row({format_number(r.kappa), format_number(r.distance), format_number(r.green_proxy)});
        res.files.push_back(dir / "kappa_convergence.csv");
    }
    const bool zero = std::all_of(dist.begin(), dist.end(), [](double d) { return d == 0.0; });
    add(res, "distance decreasing in kappa", zero || strictly_decreasing(dist),
        dist.empty() ? "no kappas" : "last " + fmt(dist.back()));
    add(res, "green proxy decreasing in kappa", zero || strictly_decreasing(proxy),
        proxy.empty() ? "no kappas" : "last " + fmt(proxy.back()));
}

void run_identities(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const auto fields = random_fields(cfg);
    double worst1 = 0.0, worst2 = 0.0;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (double varkappa : cfg.diagnostics.kappa_list) {
            const auto r = green_identity_residuals(fields[i], varkappa);
            worst1 = std::max(worst1, r.residual1);
            worst2 = std::max(worst2, r.residual2);
            rows.push_back({std::to_string(i), format_number(varkappa), format_number(r.residual1),
                            format_number(r.residual2)});
        }
    }
    if (cfg.output.wants("csv")) {
        CsvWriter csv(dir / "identities.csv", {"sample", "kappa", "residual1", "residual2"});
        for (const auto& row : rows) csv.row(row);
        res.files.push_back(dir / "identities.csv");
    }
    add(res, "first-order identity", worst1 < 1e-10, "max relative residual " + fmt(worst1) + " (< 1e-10)");
    add(res, "second-order identity", worst2 < 1e-8, "max relative residual " + fmt(worst2) + " (< 1e-8)");
}

void run_diffeo_roundtrip(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const auto fields = random_fields(cfg);
    DiffeoOptions opts;
    opts.green = cfg.flow.green;
    double worst = 0.0;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (double varkappa : cfg.diagnostics.kappa_list) {
            const auto inv = diffeo_inverse(diffeo_forward(fields[i], varkappa, opts.green), varkappa, opts);
            const double err = sobolev_norm(inv.q - fields[i], -1.0, 1.0);
            worst = std::max(worst, err);
            rows.push_back({std::to_string(i), format_number(varkappa), format_number(err),
                            std::to_string(inv.iterations)});
        }
    }
    if (cfg.output.wants("csv")) {
        CsvWriter csv(dir / "diffeo.csv", {"sample", "kappa", "error", "iterations"});
        for (const auto& row : rows) csv.row(row);
        res.files.push_back(dir / "diffeo.csv");
    }
    add(res, "round trip recovers q", worst < 1e-8, "max H^-1 error " + fmt(worst) + " (< 1e-8)");
}

void run_alpha_expansion(const ExperimentConfig& cfg, const std::filesystem::path& dir, StudyResult& res) {
    const Field q0 = make_initial_data(cfg);
    std::vector<double> kappas = cfg.diagnostics.flow_kappas, rem;
    for (double k : kappas) rem.push_back(alpha_expansion_remainder(q0, k, cfg.flow.green));
    if (cfg.output.wants("csv")) {
        CsvWriter csv(dir / "alpha_expansion.csv", {"kappa", "alpha", "remainder"});
        for (std::size_t i = 0; i < kappas.size(); ++i) {
            csv.row({format_number(kappas[i]), format_number(alpha_of(q0, kappas[i], cfg.flow.green)),
                     format_number(rem[i])});
        }
        res.files.push_back(dir / "alpha_expansion.csv");
    }
    const bool usable = kappas.size() >= 2 && std::all_of(rem.begin(), rem.end(), [](double r) { return r > 0.0; });
    const double slope = usable ? loglog_slope(kappas, rem) : NAN;
    add(res, "remainder slope", usable && std::abs(slope + 9.0) <= 0.5, "log-log slope " + fmt(slope) + " (-9 +- 0.5)");
}

struct StudyEntry {
    const char* name;
    const char* description;
    Runner run;
};

const std::vector<StudyEntry>& registry() {
    static const std::vector<StudyEntry> entries = {
        {"evolve", "integrate the configured flow; snapshots (JSON lines) and conserved quantities (CSV)", run_evolve},
        {"conserve", "integrate and check the drift of M, P, H_KdV, H_5th and alpha", run_conserve},
        {"microscopic", "local conservation residual of rho under dt halving", run_microscopic},
        {"ls", "local smoothing norm over a time window, forward and backward in time", run_ls},
        {"kappa-convergence", "distance between the H_kappa and fifth-order flows as kappa grows", run_kappa_convergence},
        {"identities", "exact h1/h2 identities on seeded random fields", run_identities},
        {"diffeo-roundtrip", "inverse of q -> 2 kappa - 1/g on seeded random fields", run_diffeo_roundtrip},
        {"alpha-expansion", "large-kappa expansion error of alpha and its log-log slope", run_alpha_expansion},
    };
    return entries;
}

}  // namespace

bool StudyResult::all_passed() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const InvariantResult& r) { return r.passed; });
}

const std::vector<std::string>& study_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) out.emplace_back(e.name);
        return out;
    }();
    return names;
}

std::string study_description(const std::string& name) {
    for (const auto& e : registry()) {
        if (name == e.name) return e.description;
    }
    throw ValidationError("unknown study '" + name + "'");
}

StudyResult run_study(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    validate(cfg);
    std::filesystem::create_directories(out_dir);
    StudyResult res;
    res.study = cfg.study;
    for (const auto& e : registry()) {
        if (cfg.study == e.name) {
            e.run(cfg, out_dir, res);
            return res;
        }
    }
    throw ValidationError("unknown study '" + cfg.study + "'");
}

}  // namespace kdv5
