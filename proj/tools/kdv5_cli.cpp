// kdv5: run, validate and list experiment studies.
//
// Exit codes: 0 success, 1 invalid config, 2 numerical failure, 3 a study
// invariant failed. Errors are also written to stderr as one JSON object.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kdv5/config.hpp"
#include "kdv5/studies.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kNumerical = 2, kInvariantFailed = 3 };

int report_error(const char* kind, const std::string& message, const std::string& key = {}) {
    nlohmann::json rec = {{"status", "error"}, {"kind", kind}, {"message", message}};
    if (!key.empty()) rec["key"] = key;
    std::cerr << rec.dump() << '\n';
    return std::string(kind) == "numerical" ? kNumerical : kInvalid;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const kdv5::ConfigError& err) {
        return report_error("validation", err.what(), err.key());
    } catch (const kdv5::ValidationError& err) {
        return report_error("validation", err.what());
    } catch (const kdv5::NumericalError& err) {
        return report_error("numerical", err.what());
    } catch (const kdv5::ResourceLimitError& err) {
        return report_error("numerical", err.what());
    } catch (const std::exception& err) {
        return report_error("numerical", err.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fifth-order KdV hierarchy simulator and diagnostics"};
    app.require_subcommand(1);

    std::string run_path;
    auto* run = app.add_subcommand("run", "Run the study named in a config file");
    run->add_option("config", run_path, "Path to a JSON config")->required();

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "Check a config file without running it");
    val->add_option("config", validate_path, "Path to a JSON config")->required();

    auto* list = app.add_subcommand("list-studies", "Print the available studies");

    CLI11_PARSE(app, argc, argv);

    if (*list) {
        for (const auto& name : kdv5::study_names()) {
            std::cout << name << '\t' << kdv5::study_description(name) << '\n';
        }
        return kOk;
    }
    if (*val) {
        return guarded([&] {
            const auto cfg = kdv5::load_config(validate_path);
            std::cout << "OK " << cfg.study << " (N=" << cfg.N << ", L=" << cfg.L << ")\n";
            return kOk;
        });
    }
    return guarded([&] {
        const auto cfg = kdv5::load_config(run_path);
        const auto dir = kdv5::resolve_output_dir(cfg);
        const auto result = kdv5::run_study(cfg, dir);
        for (const auto& inv : result.invariants) {
            std::cout << (inv.passed ? "PASS " : "FAIL ") << result.study << ": " << inv.name << " (" << inv.detail
                      << ")\n";
        }
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
        return result.all_passed() ? kOk : kInvariantFailed;
    });
}
