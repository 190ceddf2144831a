#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kdv5 {

struct ExperimentConfig;

struct InvariantResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct StudyResult {
    std::string study;
    std::vector<InvariantResult> invariants;
    std::vector<std::filesystem::path> files;

    bool all_passed() const;
};

/// Names accepted in the "study" field of a config.
const std::vector<std::string>& study_names();
/// One-line description for list-studies.
std::string study_description(const std::string& name);

/// Runs cfg.study and writes its tables into out_dir. Throws ValidationError on
/// bad input and NumericalError when a run aborts (partial outputs are kept).
StudyResult run_study(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace kdv5
