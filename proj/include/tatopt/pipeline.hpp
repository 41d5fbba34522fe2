#pragma once

#include <string>
#include <vector>

#include "tatopt/config.hpp"
#include "tatopt/imaging.hpp"
#include "tatopt/tv.hpp"

namespace tatopt {

/// Key numbers of a pipeline run; the full record is written to
/// out_dir/report.json along with all field/CSV artifacts.
struct PipelineReport {
    double tr_baseline_error = -1.0;
    double stage1_error = -1.0;  ///< -1 in oracle-psi mode
    std::vector<double> round_errors;
    std::vector<double> a2_initial;
    std::vector<double> a2_optimized;
    std::vector<double> lambdas;  ///< NaN entries in GA mode
    std::string report_path;
};

/// Two-step strategy: reconstruct on the initial sensors, re-place sensors
/// from the reconstruction's boundary energy, measure again and reconstruct
/// again; `alternate` controls how many placement rounds run.
PipelineReport run_pipeline(const PipelineConfig& cfg);

// shared helpers for the CLI subcommands
SensorMask initial_sensor_mask(const PipelineConfig& cfg, const BoundaryGeometry& geom, const Grid2D& grid);
std::vector<int> ring_band_cells(const Grid2D& grid, double R, double eps);
void add_noise(Recording& rec, double level, std::uint64_t seed);

}  // namespace tatopt
