#pragma once

#include "ucaprio/ingestion.hpp"
#include "ucaprio/pipeline.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ucaprio::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kIoOrFormatFailure = 2,
    kInternalError = 3,
};

// Everything needed to reproduce a compute run with the same tool version.
struct RunManifest {
    std::string tool_version;
    std::uint64_t seed = 0;
    int num_simulations = 0;
    double variation_range = 0.0;
    std::map<std::string, std::string> input_digests;  // path -> sha256 hex
    std::string timestamp;                             // UTC, ISO 8601

    std::string ej_source = "mcs";
    std::optional<int> fixed_max_sif;
    std::optional<double> fixed_max_ej;
    double stable_mean_shift = 1.0;
    double stable_max_std = 0.5;

    nlohmann::json to_json(bool with_timestamp = true) const;
    static RunManifest from_json(const nlohmann::json& j);
    // First 12 hex digits of the sha256 of the manifest without its timestamp.
    std::string run_id() const;
};

std::string tool_version();
std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);  // throws FileError
std::string utc_timestamp();

// Prints every violation. Returns kOk, kValidationFailure or
// kIoOrFormatFailure.
int cmd_validate(const DatasetManifest& manifest, std::ostream& out, std::ostream& err);

struct ComputeOptions {
    PipelineOptions pipeline;
    std::filesystem::path out_root = "out";
    RenderFormat format = RenderFormat::Text;
    std::optional<std::string> timestamp;  // defaults to the current UTC time
};

struct ComputeOutcome {
    std::filesystem::path run_dir;
    RunManifest manifest;
    PipelineResult result;
};

// Runs the pipeline and writes matrix.csv, matrix.json, matrix.svg,
// stats.json and run-manifest.json under <out_root>/<run-id>/. Prints the
// matrix in `options.format` to `out`. Engine errors propagate.
ComputeOutcome cmd_compute(const DatasetManifest& manifest, const ComputeOptions& options, std::ostream& out,
                           std::ostream& err);

// stats.json body (without any timestamp).
nlohmann::json stats_document(const PipelineResult& result, const SimulationConfig& config);

// Summary of a results directory: priority counts, top-k UCAs, sensitive
// UCAs and the per-expert initial-rank comparison. Throws MissingResults.
void cmd_report(const std::filesystem::path& results, int top, std::ostream& out);

// Full command line: parses argv, dispatches, maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ucaprio::cli
