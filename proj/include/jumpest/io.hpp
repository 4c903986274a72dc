#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "jumpest/estimator.hpp"
#include "jumpest/harness.hpp"
#include "jumpest/simulate.hpp"

namespace jumpest {

// 17 significant digits, '.' decimal separator; NaN is written as an empty field.
std::string format_real(double v);

nlohmann::json summary_to_json(const ExperimentSummary& summary);

// Writes <out_dir>/replicates.csv and <out_dir>/summary.json. Output bytes
// depend only on the summary. Throws std::runtime_error naming the path on
// I/O failure.
void emit(const ExperimentSummary& summary, const std::filesystem::path& out_dir);

// Reads a replicates.csv back; empty fields become NaN.
ResultTable read_replicates_csv(const std::filesystem::path& path);

// Path dump: CSV with header "i,t,X" plus a JSON side-car holding the jump
// metadata (written next to the CSV with extension .json).
void write_path(const PathRecord& path, const ModelSpec& model, const std::filesystem::path& csv_path);
nlohmann::json path_metadata_json(const PathRecord& path, const ModelSpec& model);

// Reads observations from a CSV: the "X" column when the header names one,
// otherwise the last column. A header row is optional.
std::vector<double> read_observations_csv(const std::filesystem::path& path);

nlohmann::json detection_to_json(const DetectionResult& det);

}  // namespace jumpest
