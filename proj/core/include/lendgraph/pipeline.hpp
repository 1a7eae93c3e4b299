#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lendgraph/ols.hpp"
#include "lendgraph/synthgen.hpp"

namespace lendgraph::pipeline {

struct PipelineConfig {
    // Either a directory holding comms.csv/loans.csv/pings.csv/pois.csv, or
    // empty to generate inputs from gen_config first.
    std::string input_dir;
    std::optional<synthgen::GenConfig> gen_config;

    std::string out_dir;
    std::string rules_path;  // empty -> built-in defaults
    std::string vocab_path;
    double radius_m = 50.0;
    bool weighted_eigen = true;
    bool per_borrower = false;
    int scalefree_perturb_trials = 0;
    double scalefree_perturb_fraction = 0.1;
    std::uint64_t seed = 1;
};

// FNV-1a 64 over file bytes, hex-encoded; used for manifest content hashes.
std::string file_hash(const std::string& path);

// Coefficient table (estimate/se/t/p/significance, NA for dropped columns)
// plus fit summary, rendered as JSON text.
std::string fit_json_text(const stats::OlsFit& fit);

// Runs ingest -> graph -> scalefree -> geo -> join -> fits/select/cv/
// influence, writing every intermediate artifact plus manifest.json into
// out_dir. Returns the manifest JSON text. Throws on stage failure after
// recording the failing stage in the manifest.
std::string run_pipeline(const PipelineConfig& config);

// Renders the nested-model ladder, CV summary and influence table from a
// completed run directory. json_out toggles JSON vs text rendering.
std::string report_ladder(const std::string& run_dir, bool json_out);

}  // namespace lendgraph::pipeline
