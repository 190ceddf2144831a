#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kdv5/error.hpp"
#include "kdv5/flows.hpp"
#include "kdv5/grid.hpp"

namespace kdv5 {

/// Validation failure tied to a config key such as "grid.N".
class ConfigError : public ValidationError {
public:
    ConfigError(std::string key, const std::string& message)
        : ValidationError(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

inline constexpr int kConfigSchemaVersion = 1;

struct InitialDataConfig {
    /// zero | gaussian | cosine | soliton | random | file
    std::string kind = "gaussian";
    double amplitude = 0.1;
    double width = 2.0;
    double center = 0.0;
    /// cosine: wavenumber in units of 2 pi / L.
    int mode = 1;
    /// soliton: q = -2 kappa0^2 sech^2(kappa0 (x - center)).
    double kappa0 = 0.5;
    /// random: target H^{-1} norm.
    double h_minus1_norm = 0.05;
    /// file: JSON array of N samples, relative to the config file.
    std::string path;
};

struct DiagnosticsConfig {
    std::vector<double> kappa_list = {2.0, 4.0, 8.0};
    double center_spacing = 1.0;
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    /// Flow parameters swept by kappa-convergence and alpha-expansion.
    std::vector<double> flow_kappas = {4.0, 8.0, 16.0, 32.0};
    /// Random fields drawn by identities and diffeo-roundtrip.
    int samples = 10;
    int halvings = 3;
    double drift_tolerance = 1e-6;
    double ls_delta = 0.1;
};

struct OutputConfig {
    std::string directory = "kdv5_output";
    std::vector<std::string> formats = {"csv", "jsonl"};

    bool wants(const std::string& format) const;
};

struct ExperimentConfig {
    int schema_version = kConfigSchemaVersion;
    std::string study = "evolve";
    std::uint64_t seed = 1;
    double L = 50.0;
    int N = 512;
    InitialDataConfig initial_data;
    FlowSpec flow;
    IntegratorConfig integrator;
    DiagnosticsConfig diagnostics;
    OutputConfig output;
    /// Directory of the config file; relative paths resolve against it.
    std::filesystem::path base_dir;

    Grid grid() const { return Grid(L, N); }
};

/// Parses JSON text. Unknown keys and out-of-range values raise ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-runs every guard (also called by parse_config).
void validate(const ExperimentConfig& cfg);

Field make_initial_data(const ExperimentConfig& cfg);

/// Output directory: KDV5_OUTPUT_DIR when set, else the configured one.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

inline constexpr const char* kOutputDirEnv = "KDV5_OUTPUT_DIR";

}  // namespace kdv5
