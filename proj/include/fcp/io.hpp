#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcp/detector.hpp"
#include "fcp/simulation.hpp"

namespace fcp::io {

using Json = nlohmann::ordered_json;

/**
 * One CSV curve file: a row per curve, a column per grid point.
 *
 * An optional first line "t=<value>,t=<value>,..." carries the grid; without
 * it the uniform grid on [0,1] is implied.
 */
struct CurveTable {
    Matrix values;
    std::optional<std::vector<double>> grid_points;
};

/// Parse errors name the source and the 1-based line number.
CurveTable parse_curve_csv(std::istream& in, const std::string& source);
CurveTable read_curve_csv(const std::filesystem::path& path);

void write_curve_csv(std::ostream& out, const Matrix& values, const SampleGrid* header);
void write_curve_csv(const std::filesystem::path& path, const Matrix& values, const SampleGrid* header);

/// Reads the regressor and response files and checks that shapes and grids agree.
PairedFunctionalSample load_paired_sample(const std::filesystem::path& x_path, const std::filesystem::path& y_path);

/// (n+1) x T values of the CUSUM field, with a grid header.
void write_cusum_csv(const std::filesystem::path& path, const CusumField& field);

Json to_json(const TestResult& result);
Json to_json(const TestConfig& config);
Json to_json(const DgpConfig& config);
Json to_json(const StudyCell& cell);

Json eigensystem_to_json(const EigenSystem& eigs);
/// Restores grid, eigenpairs, trace and truncation fields written by eigensystem_to_json.
EigenSystem eigensystem_from_json(const Json& doc);

/// Long table: one row per (cell, norm) with columns n, setting, design, norm, rate.
void write_study_csv(std::ostream& out, const std::vector<StudyCell>& cells);
Json study_to_json(const std::vector<StudyCell>& cells);

/// Shortest decimal that round-trips the double.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
Json read_json_file(const std::filesystem::path& path);

}  // namespace fcp::io
