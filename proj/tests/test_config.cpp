#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "kdv5/config.hpp"
#include "kdv5/output.hpp"
#include "kdv5/studies.hpp"

using namespace kdv5;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kdv5_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string key_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& err) {
        return err.key();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    const auto cfg = parse_config(R"({"schema_version": 1})");
    CHECK(cfg.study == "evolve");
    CHECK(cfg.L == 50.0);
    CHECK(cfg.N == 512);
    CHECK(cfg.flow.kind == FlowKind::Fifth);
    CHECK(cfg.flow.green.route == GreenRoute::Spectral);
}

TEST_CASE("field-level validation messages") {
    CHECK(key_of(R"({"schema_version": 1, "grid": {"N": 255}})") == "grid.N");
    CHECK(key_of(R"({"schema_version": 1, "grid": {"L": -1}})") == "grid.L");
    CHECK(key_of(R"({"schema_version": 1, "grid": {"M": 3}})") == "grid.M");
    CHECK(key_of(R"({"schema_version": 1, "colour": "red"})") == "colour");
    CHECK(key_of(R"({"grid": {"N": 64}})") == "schema_version");
    CHECK(key_of(R"({"schema_version": 2})") == "schema_version");
    CHECK(key_of(R"({"schema_version": 1, "study": "nope"})") == "study");
    CHECK(key_of(R"({"schema_version": 1, "flow": {"kind": "hkappa"}})") == "flow.kappa");
    CHECK(key_of(R"({"schema_version": 1, "flow": {"kind": "hkappa", "kappa": 4, "green_route": "x"}})") ==
          "flow.green_route");
    CHECK(key_of(R"({"schema_version": 1, "integrator": {"dt": 0}})") == "integrator");
    CHECK(key_of(R"({"schema_version": 1, "diagnostics": {"kappa_list": [4, 2]}})") == "diagnostics.kappa_list");
    CHECK(key_of(R"({"schema_version": 1, "output": {"formats": ["xml"]}})") == "output.formats");
    CHECK(key_of(R"({"schema_version": 1, "grid": {"N": "many"}})") == "grid.N");
    CHECK(key_of("{not json") == "<root>");
}

TEST_CASE("initial data kinds") {
    auto cfg = parse_config(R"({"schema_version": 1, "grid": {"L": 20, "N": 64},
                                "initial_data": {"kind": "soliton", "kappa0": 0.5}})");
    CHECK(make_initial_data(cfg)[32] == doctest::Approx(-0.5));
    cfg.initial_data.kind = "cosine";
    cfg.initial_data.amplitude = 2.0;
    cfg.initial_data.mode = 2;
    CHECK(make_initial_data(cfg)[32] == doctest::Approx(2.0));
    cfg.initial_data.kind = "zero";
    CHECK(make_initial_data(cfg).max_abs() == 0.0);
}

TEST_CASE("initial data from a file") {
    const auto cfg = parse_config(R"({"schema_version": 1, "grid": {"L": 20, "N": 16},
                                      "initial_data": {"kind": "file", "path": "gaussian_samples_n16.json"}})",
                                  KDV5_TEST_DATA);
    CHECK(make_initial_data(cfg)[8] == doctest::Approx(0.1));
    auto wrong = cfg;
    wrong.N = 32;
    CHECK_THROWS_AS(make_initial_data(wrong), ConfigError);
}

TEST_CASE("environment variable overrides the output directory") {
    const auto cfg = parse_config(R"({"schema_version": 1, "output": {"directory": "from_config"}})");
    ::unsetenv(kOutputDirEnv);
    CHECK(resolve_output_dir(cfg) == fs::path("from_config"));
    ::setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
    CHECK(resolve_output_dir(cfg) == fs::path("/tmp/elsewhere"));
    ::unsetenv(kOutputDirEnv);
}

TEST_CASE("conserve study on the vacuum passes and writes the conserved table") {
    const auto cfg = load_config(fs::path(KDV5_TEST_DATA) / "zero_conserve.json");
    const fs::path dir = scratch_dir("zero");
    const StudyResult res = run_study(cfg, dir);
    CHECK(res.all_passed());
    CHECK_FALSE(res.invariants.empty());
    const std::string csv = slurp(dir / "conserved.csv");
    CHECK(csv.rfind("t,quantity,kappa,value\n", 0) == 0);
    CHECK(csv.find("0,alpha,2,0\n") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical tables") {
    const char* text = R"({"schema_version": 1, "study": "conserve", "grid": {"L": 40, "N": 64},
                           "initial_data": {"kind": "gaussian", "amplitude": 0.1},
                           "integrator": {"dt": 1e-3, "t_end": 0.01, "snapshot_stride": 5,
                                          "conserved_sample_stride": 5},
                           "output": {"formats": ["csv", "jsonl"]}})";
    const auto cfg = parse_config(text);
    const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
    run_study(cfg, a);
    run_study(cfg, b);
    CHECK(slurp(a / "conserved.csv") == slurp(b / "conserved.csv"));
    CHECK(slurp(a / "snapshots.jsonl") == slurp(b / "snapshots.jsonl"));
    const std::string first_line = slurp(a / "snapshots.jsonl").substr(0, 18);
    CHECK(first_line == "{\"t\":0,\"samples\":[");
}

TEST_CASE("every registered study has a description") {
    for (const auto& name : study_names()) CHECK_FALSE(study_description(name).empty());
    CHECK_THROWS_AS(study_description("bogus"), ValidationError);
}

TEST_CASE("numbers print with round-trip precision") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
