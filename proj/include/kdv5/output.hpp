#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kdv5/diagnostics.hpp"
#include "kdv5/flows.hpp"
#include "kdv5/hamiltonians.hpp"

namespace kdv5 {

/// Shortest round-trip text for a double ("%.17g"); identical input gives identical bytes.
std::string format_number(double v);

/// Comma-separated table with a header row. Cells are written as given.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
    std::filesystem::path path_;
};

/// Columns t, quantity, kappa, value. The kappa cell is empty except for alpha.
void write_conserved_csv(const std::filesystem::path& path, const std::vector<ConservedReport>& reports);

/// Columns z, kappa, ls_value.
void write_ls_csv(const std::filesystem::path& path, const std::vector<LSReport>& reports);

/// One JSON object per line: {"t": ..., "samples": [...]}.
void write_snapshots_jsonl(const std::filesystem::path& path, const TrajectoryRecord& traj);

}  // namespace kdv5
