#pragma once

#include <functional>
#include <vector>

#include "tatopt/grid.hpp"
#include "tatopt/imaging.hpp"

namespace tatopt {

/// Isotropic discrete TV with forward differences and periodic wrap, scaled
/// by h so it approximates the integral of |grad u|.
double tv_norm(const RealField& u);

/// Approximate minimizer of (1/2)||u - v||^2 + lambda*TV(v) over the grid
/// (h^2-weighted L2 fidelity), by Chambolle's dual fixed-point iteration.
/// lambda = 0 returns u; constants are exact fixed points.
RealField prox_tv(const RealField& u, double lambda, int iters = 50, double tau = 0.125);

struct ReconParams {
    double gamma = 0.01;  ///< TV weight
    double eta = 0.5;     ///< descent step
    int outer_iters = 30;
    int prox_iters = 50;
    double prox_tau = 0.125;
    RealField K_mask;  ///< 0/1 support constraint; empty = unconstrained support
    bool nonneg = true;
    bool use_fista = true;        ///< false = plain forward-backward
    bool apply_projection = true;  ///< false reproduces the unprojected scheme
};

/// L2 projection onto {u >= 0 (if nonneg), supp(u) within K_mask}.
RealField project_admissible(const RealField& u, const ReconParams& params);

struct ReconLogRow {
    int iter = 0;
    double J0 = 0.0;
    double A1 = 0.0;
    double TV = 0.0;
    double linf_change = 0.0;
};

struct ReconResult {
    RealField p0;
    std::vector<ReconLogRow> log;
};

using IterateCallback = std::function<void(int, const RealField&)>;

/// FISTA-accelerated forward-backward loop for J0 = A1 + gamma*TV starting
/// from zero.  Aborts with a step-size error if J0 exceeds 10x its initial
/// value.
ReconResult reconstruct(const Recording& rec, const SensorMask& mask, const ReconParams& params, double T,
                        double dt, const IterateCallback& on_iterate = {});

namespace io {
/// CSV: iter,J0,A1,TV,linf_change
void write_recon_log(const std::string& path, const std::vector<ReconLogRow>& log);
}  // namespace io

}  // namespace tatopt
