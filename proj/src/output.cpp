#include "kdv5/output.hpp"

#include <cstdio>

#include "kdv5/error.hpp"

namespace kdv5 {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(open_for_write(path)), columns_(header.size()), path_(path) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("csv " + path_.string() + ": row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error("csv " + path_.string() + ": write failed");
}

void write_conserved_csv(const std::filesystem::path& path, const std::vector<ConservedReport>& reports) {
    CsvWriter csv(path, {"t", "quantity", "kappa", "value"});
    for (const auto& r : reports) {
        const std::string t = format_number(r.t);
        csv.row({t, "M", "", format_number(r.M)});
        csv.row({t, "P", "", format_number(r.P)});
        csv.row({t, "H_KdV", "", format_number(r.H_KdV)});
        csv.row({t, "H_5th", "", format_number(r.H_5th)});
        for (const auto& [kappa, alpha] : r.alpha_samples) {
            csv.row({t, "alpha", format_number(kappa), format_number(alpha)});
        }
    }
}

void write_ls_csv(const std::filesystem::path& path, const std::vector<LSReport>& reports) {
    CsvWriter csv(path, {"z", "kappa", "ls_value"});
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.centers.size(); ++i) {
            csv.row({format_number(r.centers[i]), format_number(r.kappa), format_number(r.values[i])});
        }
    }
}

void write_snapshots_jsonl(const std::filesystem::path& path, const TrajectoryRecord& traj) {
    std::ofstream out = open_for_write(path);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << "{\"t\":" << format_number(traj.times[i]) << ",\"samples\":[";
        const auto samples = traj.snapshots[i].samples();
        for (std::size_t j = 0; j < samples.size(); ++j) {
            if (j) out << ',';
            out << format_number(samples[j]);
        }
        out << "]}\n";
    }
    if (!out) throw Error("cannot write " + path.string());
}

}  // namespace kdv5
