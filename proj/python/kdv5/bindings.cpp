// Python bindings. Fields cross the boundary as 1-D float64 arrays of samples
// on the grid x_j = -L/2 + j L / N, with the period L passed alongside.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "kdv5/config.hpp"
#include "kdv5/diagnostics.hpp"
#include "kdv5/error.hpp"
#include "kdv5/flows.hpp"
#include "kdv5/hamiltonians.hpp"
#include "kdv5/random_fields.hpp"
#include "kdv5/schrodinger.hpp"
#include "kdv5/spectral.hpp"
#include "kdv5/studies.hpp"

namespace py = pybind11;
using namespace kdv5;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Array& samples, double L) {
    if (samples.ndim() != 1) throw ValidationError("samples must be a 1-D array");
    const auto n = static_cast<int>(samples.shape(0));
    const double* p = samples.data();
    return Field(Grid(L, n), std::vector<double>(p, p + n));
}

Array to_array(const Field& f) {
    Array out(f.size());
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

GreenOptions green_options(const std::string& route) {
    GreenOptions opts;
    opts.route = green_route_from_string(route);
    return opts;
}

py::dict green_dict(const GreenReport& r) {
    py::dict d;
    d["kappa"] = r.kappa;
    d["route"] = to_string(r.route);
    d["g"] = to_array(r.g);
    d["deviation"] = to_array(r.deviation);
    d["h1"] = to_array(r.h1);
    d["remainder"] = to_array(r.remainder);
    d["rho"] = to_array(r.rho);
    d["alpha"] = r.alpha;
    d["tail_estimate"] = r.tail_estimate;
    d["iterations"] = r.iterations;
    return d;
}

py::dict conserved_dict(const ConservedReport& r) {
    py::dict d;
    d["t"] = r.t;
    d["M"] = r.M;
    d["P"] = r.P;
    d["H_KdV"] = r.H_KdV;
    d["H_5th"] = r.H_5th;
    py::dict alpha;
    for (const auto& [k, a] : r.alpha_samples) alpha[py::float_(k)] = a;
    d["alpha"] = alpha;
    return d;
}

FlowSpec flow_spec(const std::string& kind, double kappa, const std::string& route) {
    FlowSpec spec{flow_kind_from_string(kind), kappa, green_options(route)};
    validate(spec);
    return spec;
}

py::dict integrate_py(const Array& q0, double L, const std::string& flow, double kappa, double dt, double t_end,
                      double t_start, int snapshot_stride, std::vector<double> alpha_kappas,
                      const std::string& route) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_start = t_start;
    cfg.t_end = t_end;
    cfg.snapshot_stride = snapshot_stride;
    cfg.alpha_kappas = std::move(alpha_kappas);
    TrajectoryRecord rec;
    {
        py::gil_scoped_release release;
        rec = integrate(to_field(q0, L), flow_spec(flow, kappa, route), cfg);
    }
    const auto n = static_cast<py::ssize_t>(q0.shape(0));
    py::array_t<double> snaps({static_cast<py::ssize_t>(rec.snapshots.size()), n});
    auto view = snaps.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < view.shape(0); ++i) {
        for (py::ssize_t j = 0; j < n; ++j) view(i, j) = rec.snapshots[i][j];
    }
    py::list conserved;
    for (const auto& c : rec.conserved) conserved.append(conserved_dict(c));
    py::dict d;
    d["times"] = py::array_t<double>(rec.times.size(), rec.times.data());
    d["snapshots"] = snaps;
    d["conserved"] = conserved;
    d["aborted"] = rec.aborted;
    d["message"] = rec.message;
    return d;
}

py::dict run_config(const std::filesystem::path& path, std::optional<std::filesystem::path> out_dir) {
    const ExperimentConfig cfg = load_config(path);
    StudyResult res;
    {
        py::gil_scoped_release release;
        res = run_study(cfg, out_dir ? *out_dir : resolve_output_dir(cfg));
    }
    py::list invariants;
    for (const auto& inv : res.invariants) {
        py::dict d;
        d["name"] = inv.name;
        d["passed"] = inv.passed;
        d["detail"] = inv.detail;
        invariants.append(d);
    }
    py::dict d;
    d["study"] = res.study;
    d["passed"] = res.all_passed();
    d["invariants"] = invariants;
    d["files"] = res.files;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fifth-order KdV hierarchy simulator and diagnostics";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", numerical.ptr());
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base.ptr());

    m.def("grid_nodes", [](double L, int n) { return Grid(L, n).nodes(); }, py::arg("L"), py::arg("n"));

    m.def(
        "random_field",
        [](double L, int n, std::uint64_t seed, double h_minus1_norm) {
            RandomFieldOptions opts;
            opts.h_minus1_norm = h_minus1_norm;
            return to_array(random_band_limited(Grid(L, n), seed, opts));
        },
        py::arg("L"), py::arg("n"), py::arg("seed"), py::arg("h_minus1_norm") = 0.05);

    m.def(
        "sobolev_norm", [](const Array& q, double L, double s, double kappa) {
            return sobolev_norm(to_field(q, L), s, kappa);
        },
        py::arg("q"), py::arg("L"), py::arg("s"), py::arg("kappa") = 1.0);

    m.def(
        "green_diagonal",
        [](const Array& q, double L, double kappa, const std::string& route) {
            return green_dict(green_diagonal(to_field(q, L), kappa, green_options(route)));
        },
        py::arg("q"), py::arg("L"), py::arg("kappa"), py::arg("route") = "spectral");

    m.def(
        "alpha", [](const Array& q, double L, double kappa) { return alpha_of(to_field(q, L), kappa); },
        py::arg("q"), py::arg("L"), py::arg("kappa"));

    m.def(
        "conserved",
        [](const Array& q, double L, const std::vector<double>& kappas) {
            return conserved_dict(conserved_report(to_field(q, L), kappas));
        },
        py::arg("q"), py::arg("L"), py::arg("kappas") = std::vector<double>{2.0, 4.0, 8.0});

    m.def(
        "diffeo_forward",
        [](const Array& q, double L, double kappa) { return to_array(diffeo_forward(to_field(q, L), kappa)); },
        py::arg("q"), py::arg("L"), py::arg("kappa"));

    m.def(
        "diffeo_inverse",
        [](const Array& w, double L, double kappa) { return to_array(diffeo_inverse(to_field(w, L), kappa).q); },
        py::arg("w"), py::arg("L"), py::arg("kappa"));

    m.def(
        "rhs",
        [](const Array& q, double L, const std::string& flow, double kappa) {
            return to_array(rhs(to_field(q, L), flow_spec(flow, kappa, "spectral")));
        },
        py::arg("q"), py::arg("L"), py::arg("flow") = "fifth", py::arg("kappa") = 0.0);

    m.def("integrate", &integrate_py, py::arg("q0"), py::arg("L"), py::arg("flow") = "fifth",
          py::arg("kappa") = 0.0, py::arg("dt") = 1e-5, py::arg("t_end") = 0.1, py::arg("t_start") = 0.0,
          py::arg("snapshot_stride") = 1, py::arg("alpha_kappas") = std::vector<double>{2.0, 4.0, 8.0},
          py::arg("route") = "spectral");

    m.def(
        "identity_residuals",
        [](const Array& q, double L, double varkappa) {
            const auto r = green_identity_residuals(to_field(q, L), varkappa);
            return py::make_tuple(r.residual1, r.residual2);
        },
        py::arg("q"), py::arg("L"), py::arg("varkappa"));

    m.def("study_names", &study_names);
    m.def("study_description", &study_description, py::arg("name"));
    m.def(
        "validate_config", [](const std::filesystem::path& path) { validate(load_config(path)); }, py::arg("path"));
    m.def("run_config", &run_config, py::arg("path"), py::arg("out_dir") = py::none());
}
