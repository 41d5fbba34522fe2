#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tatopt/boundary.hpp"
#include "tatopt/grid.hpp"
#include "tatopt/wave.hpp"

namespace tatopt {

/// Boundary samples of the observed kinetic energy density psi, one value
/// per geometry angle sample.
struct BoundaryProfile {
    std::vector<double> value;

    int samples() const { return static_cast<int>(value.size()); }
};

enum class PsiMode { boundary, volumetric };

/// psi(s) = integral over (0,T) of (dp/dt)(t, s)^2, sampled at the boundary
/// points (boundary mode), or additionally integrated over [0, eps] along
/// the outward normal (volumetric mode).  Velocities are read from the
/// trajectory by bilinear interpolation.
BoundaryProfile compute_psi(const Trajectory& traj, const BoundaryGeometry& geom, const Grid2D& grid,
                            PsiMode mode = PsiMode::boundary, double eps = 0.0);

enum class H1Norm { full, seminorm };

/// h^2 sum p0^2 plus the spectral form of ||grad p0||^2 (full), or the
/// gradient seminorm alone.
double h1_norm_sq(const RealField& p0, H1Norm which = H1Norm::full);

double a2_functional(const BoundaryProfile& psi, const SensorArcs& gamma, const BoundaryGeometry& geom,
                     const RealField& p0, H1Norm norm = H1Norm::full);
double a2_functional(const BoundaryProfile& psi, const SensorIndicator& gamma, const BoundaryGeometry& geom,
                     const RealField& p0, H1Norm norm = H1Norm::full);

/// Superlevel-set placement: bisection on lambda until the arc measure of
/// {psi >= lambda} is within one sample of L*perimeter, ties admitted in
/// increasing theta order.  The result satisfies
/// {psi > lambda} within Gamma* within {psi >= lambda} exactly on samples.
std::pair<SensorIndicator, double> place_threshold(const BoundaryProfile& psi, double L,
                                                   const BoundaryGeometry& geom);

struct GAParams {
    int population = 60;
    int generations = 200;
    int tournament = 3;
    double crossover_rate = 0.8;
    double mutation_sigma_frac = 0.02;  ///< of the perimeter, decays per generation
    double mutation_decay = 0.99;
    int elites = 2;
};

struct GAResult {
    SensorArcs arcs;
    double objective = 0.0;
    std::vector<double> best_per_generation;
};

/// Genetic search over N0 arc start angles maximizing the arc quadrature of
/// the profile; deterministic for a fixed (seed, params).
GAResult place_ga(const BoundaryProfile& psi, const BoundaryGeometry& geom, int N0, double ell,
                  const GAParams& params, std::uint64_t seed);

/// sum_n of the integral of psi*speed over (theta_n, theta_hat_n)
double arcs_objective(const BoundaryProfile& psi, const BoundaryGeometry& geom, const SensorArcs& arcs);

struct ArcKktReport {
    int arc = 0;
    double spacing_slack = 0.0;      ///< arc gap to the next start minus ell
    bool constraint_active = false;  ///< slack within tolerance: no stationarity check
    double stationarity_gap = 0.0;   ///< |f(theta_n) - f(theta_hat_n)|
    double second_order = 0.0;       ///< f'(th_hat)/speed(th_hat) - f'(th)/speed(th), <= 0 at optima
};

std::vector<ArcKktReport> kkt_residual(const SensorArcs& arcs, const BoundaryProfile& psi,
                                       const BoundaryGeometry& geom);

namespace io {
/// CSV: theta,psi
void write_profile(const std::string& path, const BoundaryProfile& psi, const BoundaryGeometry& geom);
/// CSV: n,theta_start,theta_end
void write_arcs(const std::string& path, const SensorArcs& arcs);
void write_intervals(const std::string& path, const std::vector<std::array<double, 2>>& intervals);
}  // namespace io

}  // namespace tatopt
