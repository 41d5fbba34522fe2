#pragma once

#include <string>
#include <vector>

#include "tatopt/boundary.hpp"
#include "tatopt/grid.hpp"
#include "tatopt/wave.hpp"

namespace tatopt {

/// Thickened sensor set on the grid: cells lying within [0, eps] of the
/// boundary along the outward normal, with angular trace in Gamma.
struct SensorMask {
    Grid2D grid;
    double eps = 0.0;
    std::vector<std::uint8_t> indicator;  ///< M*M values in {0,1}
    std::vector<int> cells;               ///< flat indices of active cells

    int active_count() const { return static_cast<int>(cells.size()); }
};

SensorMask build_sensor_mask(const BoundaryGeometry& geom, const SensorArcs& gamma, double eps, const Grid2D& grid);
SensorMask build_sensor_mask(const BoundaryGeometry& geom, const SensorIndicator& gamma, double eps, const Grid2D& grid);
SensorMask full_boundary_mask(const BoundaryGeometry& geom, double eps, const Grid2D& grid);

/// Time series of pressure samples at the mask-active cells.
struct Recording {
    Grid2D grid;
    std::vector<double> times;
    std::vector<int> cells;
    std::vector<std::vector<double>> samples;  ///< [time][cell]

    int steps() const { return static_cast<int>(times.size()) - 1; }
};

Recording record(const Trajectory& traj, const SensorMask& mask);

/// (1/2) sum_k w_k dt sum_cells (p_[p0](t_k,x) - p_obs(t_k,x))^2 h^2 with
/// trapezoidal weights w_k.
double discrepancy_A1(const SensorMask& mask, const RealField& p0, const Recording& rec, double T, double dt);

/// Superposition of pressure jumps p_obs(T - tau_k)*mask marched to internal
/// time T; the exact adjoint of record(solve_forward(.)) under the
/// quadrature inner products.
RealField time_reversal(const Recording& rec, const SensorMask& mask, double T, double dt);

/// time_reversal rescaled by the discrete surface-measure factor, so the
/// output approximates the source itself (the imaging operator I[g]).
RealField time_reversal_image(const Recording& rec, const SensorMask& mask, const BoundaryGeometry& geom,
                              double T, double dt);

/// Gradient of A1 with respect to p0: the residual recording back-propagated
/// by time_reversal.
RealField grad_A1(const SensorMask& mask, const RealField& p0, const Recording& rec, double T, double dt);

namespace io {
void save_mask(const std::string& path, const SensorMask& mask);
/// snapshots rec_#####.tatf (masked values, zero elsewhere), rec_index.jsonl
/// of {k, t, file} lines, mask.tatf and meta.json
void save_recording(const std::string& dir, const Recording& rec, const SensorMask& mask);
Recording load_recording(const std::string& dir, SensorMask* mask_out = nullptr);
}  // namespace io

}  // namespace tatopt
