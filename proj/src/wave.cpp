#include "tatopt/wave.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "tatopt/field_io.hpp"

namespace tatopt {

SpectralWaveState from_initial(const RealField& p0) {
    check_finite(p0, "from_initial");
    SpectralWaveState s;
    s.grid = p0.grid;
    s.c = fft_forward(p0).coeffs;
    s.cdot.assign(s.c.size(), {0.0, 0.0});
    s.t = 0.0;
    return s;
}

WaveStepper::WaveStepper(const Grid2D& g, double dt) {
    const int M = g.M;
    cosw_.resize(static_cast<size_t>(g.size()));
    sinw_over_w_.resize(cosw_.size());
    w_sinw_.resize(cosw_.size());
    for (int i1 = 0; i1 < M; ++i1) {
        for (int i2 = 0; i2 < M; ++i2) {
            const size_t idx = static_cast<size_t>(i1) * M + i2;
            const double w = g.omega(i1, i2);
            if (w > 0.0) {
                const double s = std::sin(w * dt);
                cosw_[idx] = std::cos(w * dt);
                sinw_over_w_[idx] = s / w;
                w_sinw_[idx] = w * s;
            } else {
                cosw_[idx] = 1.0;
                sinw_over_w_[idx] = dt;
                w_sinw_[idx] = 0.0;
            }
        }
    }
}

void WaveStepper::apply(std::vector<std::complex<double>>& c, std::vector<std::complex<double>>& cdot) const {
    for (size_t i = 0; i < c.size(); ++i) {
        const std::complex<double> c0 = c[i];
        const std::complex<double> v0 = cdot[i];
        c[i] = c0 * cosw_[i] + v0 * sinw_over_w_[i];
        cdot[i] = -c0 * w_sinw_[i] + v0 * cosw_[i];
    }
}

SpectralWaveState propagate(SpectralWaveState state, double dt) {
    if (dt < 0.0) throw std::invalid_argument("propagate: dt must be >= 0");
    if (dt == 0.0) return state;
    WaveStepper coeffs(state.grid, dt);
    coeffs.apply(state.c, state.cdot);
    state.t += dt;
    return state;
}

SpectralWaveState inject_pressure_impulse(SpectralWaveState state, const RealField& g, double w) {
    if (!(g.grid == state.grid)) throw std::invalid_argument("inject_pressure_impulse: grid mismatch");
    if (w == 0.0) return state;
    const SpectralField G = fft_forward(g);
    for (size_t i = 0; i < state.c.size(); ++i) state.c[i] += w * G.coeffs[i];
    return state;
}

double energy(const SpectralWaveState& s) {
    const int M = s.grid.M;
    double acc = 0.0;
    for (int i1 = 0; i1 < M; ++i1) {
        for (int i2 = 0; i2 < M; ++i2) {
            const size_t idx = static_cast<size_t>(i1) * M + i2;
            const double w = s.grid.omega(i1, i2);
            acc += std::norm(s.cdot[idx]) + w * w * std::norm(s.c[idx]);
        }
    }
    const double h = s.grid.h;
    return 0.5 * h * h * acc / (static_cast<double>(M) * M);
}

RealField pressure_field(const SpectralWaveState& s) {
    SpectralField F;
    F.grid = s.grid;
    F.coeffs = s.c;
    return fft_inverse(F);
}

RealField velocity_field(const SpectralWaveState& s) {
    SpectralField F;
    F.grid = s.grid;
    F.coeffs = s.cdot;
    return fft_inverse(F);
}

int time_steps(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("time grid: T and dt must be positive");
    const long long k = std::llround(T / dt);
    if (k < 1 || std::abs(k * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("time grid: dt must divide T");
    return static_cast<int>(k);
}

double Trajectory::pressure_at(int k, int flat) const {
    if (!has_pressure()) throw std::logic_error("trajectory has no pressure samples");
    if (full()) return pressure[k][flat];
    const int col = cell_lookup[flat];
    if (col < 0) throw std::out_of_range("trajectory: cell not recorded");
    return pressure[k][col];
}

double Trajectory::velocity_at(int k, int flat) const {
    if (!has_velocity()) throw std::logic_error("trajectory has no velocity samples");
    if (full()) return velocity[k][flat];
    const int col = cell_lookup[flat];
    if (col < 0) throw std::out_of_range("trajectory: cell not recorded");
    return velocity[k][col];
}

RealField Trajectory::pressure_snapshot(int k) const {
    if (!full() || !has_pressure()) throw std::logic_error("pressure_snapshot needs a full pressure trajectory");
    RealField f(grid);
    f.values = pressure[k];
    return f;
}

namespace {

std::vector<double> gather(const std::vector<std::complex<double>>& spec, const Grid2D& grid,
                           const std::vector<int>& cells, std::vector<std::complex<double>>& scratch) {
    scratch = spec;
    dft2d(scratch, grid.M, false);
    std::vector<double> frame;
    if (cells.empty()) {
        frame.resize(scratch.size());
        for (size_t i = 0; i < scratch.size(); ++i) frame[i] = scratch[i].real();
    } else {
        frame.resize(cells.size());
        for (size_t i = 0; i < cells.size(); ++i) frame[i] = scratch[static_cast<size_t>(cells[i])].real();
    }
    return frame;
}

}  // namespace

Trajectory solve_forward(const RealField& p0, double T, double dt, const TrajectorySampling& sampling) {
    const int K = time_steps(T, dt);
    const Grid2D& g = p0.grid;
    if (sampling.cells.empty() && (g.M > 256 || K > 1024))
        throw std::runtime_error("solve_forward: full-field snapshots limited to M <= 256 and K <= 1024; "
                                 "pass a sampling cell list");
    for (int c : sampling.cells)
        if (c < 0 || c >= g.size()) throw std::invalid_argument("solve_forward: sampling cell out of range");

    Trajectory traj;
    traj.grid = g;
    traj.cells = sampling.cells;
    if (!traj.cells.empty()) {
        traj.cell_lookup.assign(static_cast<size_t>(g.size()), -1);
        for (size_t i = 0; i < traj.cells.size(); ++i) traj.cell_lookup[static_cast<size_t>(traj.cells[i])] = static_cast<int>(i);
    }
    traj.times.resize(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) traj.times[static_cast<size_t>(k)] = k * dt;

    SpectralWaveState state = from_initial(p0);
    WaveStepper coeffs(g, dt);
    std::vector<std::complex<double>> scratch;
    for (int k = 0; k <= K; ++k) {
        if (sampling.pressure) traj.pressure.push_back(gather(state.c, g, traj.cells, scratch));
        if (sampling.velocity) traj.velocity.push_back(gather(state.cdot, g, traj.cells, scratch));
        if (k < K) {
            coeffs.apply(state.c, state.cdot);
            state.t += dt;
        }
    }
    return traj;
}

namespace io {

void export_trajectory(const std::string& dir, const Trajectory& traj) {
    std::filesystem::create_directories(dir);
    std::string index;
    for (size_t k = 0; k < traj.times.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "p_%05zu.tatf", k);
        RealField f(traj.grid);
        if (traj.has_pressure()) {
            if (traj.full()) {
                f.values = traj.pressure[k];
            } else {
                for (size_t i = 0; i < traj.cells.size(); ++i)
                    f.values[static_cast<size_t>(traj.cells[i])] = traj.pressure[k][i];
            }
        }
        write_tatf1(dir + "/" + name, f);
        nlohmann::ordered_json line;
        line["k"] = k;
        line["t"] = traj.times[k];
        line["file"] = name;
        index += line.dump();
        index += "\n";
    }
    atomic_write(dir + "/traj_index.jsonl", index);
}

}  // namespace io

}  // namespace tatopt
