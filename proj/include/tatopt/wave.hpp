#pragma once

#include <string>
#include <vector>

#include "tatopt/grid.hpp"

namespace tatopt {

/// Spectral state of the periodic-box wave equation: pressure modes c and
/// velocity modes cdot at internal time t.  Integration is exact per mode.
struct SpectralWaveState {
    Grid2D grid;
    std::vector<std::complex<double>> c;
    std::vector<std::complex<double>> cdot;
    double t = 0.0;
};

SpectralWaveState from_initial(const RealField& p0);

/// Per-mode rotation coefficients for one fixed dt, reusable across steps.
class WaveStepper {
public:
    WaveStepper(const Grid2D& g, double dt);
    void apply(std::vector<std::complex<double>>& c, std::vector<std::complex<double>>& cdot) const;

private:
    std::vector<double> cosw_;
    std::vector<double> sinw_over_w_;  // dt at omega = 0
    std::vector<double> w_sinw_;
};

/// Exact per-mode rotation by dt; composition over steps is exact up to
/// rounding.
SpectralWaveState propagate(SpectralWaveState state, double dt);

/// Adds a pressure jump w*g (velocity unchanged), the distributional effect
/// of a d/dt(Dirac) source.
SpectralWaveState inject_pressure_impulse(SpectralWaveState state, const RealField& g, double w);

/// (h^2/2) * sum_n (|cdot_n|^2 + omega_n^2 |c_n|^2) / M^2, the discrete
/// counterpart of (1/2) * integral of ((dp/dt)^2 + |grad p|^2).
double energy(const SpectralWaveState& s);

RealField pressure_field(const SpectralWaveState& s);
RealField velocity_field(const SpectralWaveState& s);

/// What solve_forward keeps per snapshot; an empty cell list means full
/// fields (allowed only for M <= 256 and at most 1024 steps).
struct TrajectorySampling {
    bool pressure = true;
    bool velocity = false;
    std::vector<int> cells;  ///< flat indices i1*M+i2; empty = full grid
};

struct Trajectory {
    Grid2D grid;
    std::vector<double> times;     ///< t_k = k*dt, t_0 = 0, t_K = T
    std::vector<int> cells;        ///< empty = full-grid frames
    std::vector<int> cell_lookup;  ///< size M*M, frame column or -1 (sparse only)
    std::vector<std::vector<double>> pressure;  ///< one frame per time, if sampled
    std::vector<std::vector<double>> velocity;

    bool full() const { return cells.empty(); }
    bool has_pressure() const { return !pressure.empty(); }
    bool has_velocity() const { return !velocity.empty(); }
    int steps() const { return static_cast<int>(times.size()) - 1; }

    double pressure_at(int k, int flat) const;
    double velocity_at(int k, int flat) const;
    RealField pressure_snapshot(int k) const;  ///< full trajectories only
};

Trajectory solve_forward(const RealField& p0, double T, double dt, const TrajectorySampling& sampling = {});

/// steps = T/dt; throws unless dt divides T to 1e-9 relative.
int time_steps(double T, double dt);

namespace io {
/// TATF1 snapshot per step plus a "traj_index.jsonl" of {k, t, file} lines.
void export_trajectory(const std::string& dir, const Trajectory& traj);
}  // namespace io

}  // namespace tatopt
