#include "kdv5/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kdv5/random_fields.hpp"
#include "kdv5/studies.hpp"

namespace kdv5 {
namespace {

using json = nlohmann::json;

// Reads keys of one JSON object and remembers which were consumed.
class Section {
public:
    Section(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }

    std::string key(const std::string& name) const { return prefix_.empty() ? name : prefix_ + "." + name; }

    bool has(const std::string& name) const { return obj_.contains(name); }

    template <class T>
    void read(const std::string& name, T& out) {
        seen_.insert(name);
        auto it = obj_.find(name);
        if (it == obj_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(key(name), "wrong type");
        }
    }

    Section sub(const std::string& name) {
        seen_.insert(name);
        static const json empty = json::object();
        auto it = obj_.find(name);
        return Section(it == obj_.end() ? empty : *it, key(name));
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
        }
    }

private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

bool increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

}  // namespace

bool OutputConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + err.what());
    }
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    Section root(doc, "");
    require(root.has("schema_version"), "schema_version", "missing");
    root.read("schema_version", cfg.schema_version);
    require(cfg.schema_version == kConfigSchemaVersion, "schema_version",
            "unsupported version " + std::to_string(cfg.schema_version));
    root.read("study", cfg.study);
    root.read("seed", cfg.seed);

    Section grid = root.sub("grid");
    grid.read("L", cfg.L);
    grid.read("N", cfg.N);
    grid.finish();

    Section init = root.sub("initial_data");
    init.read("kind", cfg.initial_data.kind);
    init.read("amplitude", cfg.initial_data.amplitude);
    init.read("width", cfg.initial_data.width);
    init.read("center", cfg.initial_data.center);
    init.read("mode", cfg.initial_data.mode);
    init.read("kappa0", cfg.initial_data.kappa0);
    init.read("h_minus1_norm", cfg.initial_data.h_minus1_norm);
    init.read("path", cfg.initial_data.path);
    init.finish();

    Section flow = root.sub("flow");
    std::string kind = to_string(cfg.flow.kind);
    flow.read("kind", kind);
    try {
        cfg.flow.kind = flow_kind_from_string(kind);
    } catch (const ValidationError& err) {
        throw ConfigError("flow.kind", err.what());
    }
    flow.read("kappa", cfg.flow.kappa);
    std::string route = to_string(cfg.flow.green.route);
    flow.read("green_route", route);
    try {
        cfg.flow.green.route = green_route_from_string(route);
    } catch (const ValidationError& err) {
        throw ConfigError("flow.green_route", err.what());
    }
    flow.read("series_terms", cfg.flow.green.series_terms);
    flow.read("dense_limit", cfg.flow.green.dense_limit);
    flow.finish();

    Section integ = root.sub("integrator");
    std::string scheme = "IFRK4";
    integ.read("scheme", scheme);
    require(scheme == "IFRK4", "integrator.scheme", "only IFRK4 is available");
    integ.read("dt", cfg.integrator.dt);
    integ.read("t_start", cfg.integrator.t_start);
    integ.read("t_end", cfg.integrator.t_end);
    integ.read("snapshot_stride", cfg.integrator.snapshot_stride);
    integ.read("conserved_sample_stride", cfg.integrator.conserved_sample_stride);
    integ.read("alpha_kappas", cfg.integrator.alpha_kappas);
    integ.read("stability_guard", cfg.integrator.stability_guard);
    integ.finish();

    Section diag = root.sub("diagnostics");
    diag.read("kappa_list", cfg.diagnostics.kappa_list);
    diag.read("center_spacing", cfg.diagnostics.center_spacing);
    std::vector<double> window = {cfg.integrator.t_start, cfg.integrator.t_end};
    diag.read("window", window);
    require(window.size() == 2, "diagnostics.window", "expected [t0, t1]");
    cfg.diagnostics.window_t0 = window[0];
    cfg.diagnostics.window_t1 = window[1];
    diag.read("flow_kappas", cfg.diagnostics.flow_kappas);
    diag.read("samples", cfg.diagnostics.samples);
    diag.read("halvings", cfg.diagnostics.halvings);
    diag.read("drift_tolerance", cfg.diagnostics.drift_tolerance);
    diag.read("ls_delta", cfg.diagnostics.ls_delta);
    diag.finish();

    Section out = root.sub("output");
    out.read("directory", cfg.output.directory);
    out.read("formats", cfg.output.formats);
    out.finish();

    root.finish();
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

void validate(const ExperimentConfig& cfg) {
    const auto& names = study_names();
    require(std::find(names.begin(), names.end(), cfg.study) != names.end(), "study",
            "unknown study '" + cfg.study + "'");
    require(std::isfinite(cfg.L) && cfg.L > 0.0, "grid.L", "must be positive and finite");
    require(cfg.N >= 8 && cfg.N % 2 == 0, "grid.N", "must be even and >= 8, got " + std::to_string(cfg.N));

    const auto& init = cfg.initial_data;
    static const std::vector<std::string> kinds = {"zero", "gaussian", "cosine", "soliton", "random", "file"};
    require(std::find(kinds.begin(), kinds.end(), init.kind) != kinds.end(), "initial_data.kind",
            "unknown kind '" + init.kind + "'");
    require(std::isfinite(init.amplitude), "initial_data.amplitude", "must be finite");
    require(init.width > 0.0, "initial_data.width", "must be positive");
    require(std::isfinite(init.center), "initial_data.center", "must be finite");
    require(init.kappa0 > 0.0, "initial_data.kappa0", "must be positive");
    require(init.h_minus1_norm >= 0.0, "initial_data.h_minus1_norm", "must be >= 0");
    require(init.kind != "file" || !init.path.empty(), "initial_data.path", "required for kind 'file'");
    require(init.kind != "cosine" || (init.mode >= 0 && 2 * init.mode < cfg.N), "initial_data.mode",
            "must lie in [0, N/2)");

    try {
        kdv5::validate(cfg.flow);
    } catch (const ValidationError& err) {
        throw ConfigError("flow.kappa", err.what());
    }
    require(cfg.flow.green.series_terms >= 1, "flow.series_terms", "must be >= 1");
    require(cfg.flow.green.dense_limit >= 8, "flow.dense_limit", "must be >= 8");
    try {
        kdv5::validate(cfg.integrator);
    } catch (const ValidationError& err) {
        throw ConfigError("integrator", err.what());
    }

    const auto& d = cfg.diagnostics;
    require(!d.kappa_list.empty() && d.kappa_list.front() >= 1.0 && increasing(d.kappa_list),
            "diagnostics.kappa_list", "must be non-empty, >= 1 and strictly increasing");
    require(d.flow_kappas.empty() || (d.flow_kappas.front() >= 1.0 && increasing(d.flow_kappas)),
            "diagnostics.flow_kappas", "must be >= 1 and strictly increasing");
    require(d.center_spacing > 0.0, "diagnostics.center_spacing", "must be positive");
    require(std::isfinite(d.window_t0) && std::isfinite(d.window_t1), "diagnostics.window", "must be finite");
    require(d.samples >= 1, "diagnostics.samples", "must be >= 1");
    require(d.halvings >= 1, "diagnostics.halvings", "must be >= 1");
    require(d.drift_tolerance > 0.0, "diagnostics.drift_tolerance", "must be positive");
    require(d.ls_delta > 0.0, "diagnostics.ls_delta", "must be positive");

    for (const auto& f : cfg.output.formats) {
        require(f == "csv" || f == "jsonl", "output.formats", "unknown format '" + f + "' (csv|jsonl)");
    }
    require(!cfg.output.directory.empty(), "output.directory", "must not be empty");
}

Field make_initial_data(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    const auto& init = cfg.initial_data;
    const double a = init.amplitude, w = init.width, c = init.center;
    if (init.kind == "zero") return Field(grid);
    if (init.kind == "gaussian") {
        return Field::from_function(grid, [=](double x) {
            const double s = (x - c) / w;
            return a * std::exp(-s * s);
        });
    }
    if (init.kind == "cosine") {
        const double k = 2.0 * std::numbers::pi * init.mode / grid.length();
        return Field::from_function(grid, [=](double x) { return a * std::cos(k * (x - c)); });
    }
    if (init.kind == "soliton") {
        const double k0 = init.kappa0;
        return Field::from_function(grid, [=](double x) {
            const double s = 1.0 / std::cosh(k0 * (x - c));
            return -2.0 * k0 * k0 * s * s;
        });
    }
    if (init.kind == "random") {
        RandomFieldOptions opts;
        opts.h_minus1_norm = init.h_minus1_norm;
        return random_band_limited(grid, cfg.seed, opts);
    }
    std::filesystem::path path = init.path;
    if (path.is_relative()) path = cfg.base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("initial_data.path", "cannot read " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& err) {
        throw ConfigError("initial_data.path", std::string("invalid JSON: ") + err.what());
    }
    if (!doc.is_array()) throw ConfigError("initial_data.path", "expected a JSON array of samples");
    std::vector<double> samples;
    try {
        samples = doc.get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ConfigError("initial_data.path", "samples must be numbers");
    }
    if (static_cast<int>(samples.size()) != grid.size()) {
        throw ConfigError("initial_data.path", "expected " + std::to_string(grid.size()) + " samples, got " +
                                                   std::to_string(samples.size()));
    }
    return Field(grid, std::move(samples));
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return cfg.output.directory;
}

}  // namespace kdv5
