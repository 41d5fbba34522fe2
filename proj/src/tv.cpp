#include "tatopt/tv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tatopt/field_io.hpp"

namespace tatopt {

double tv_norm(const RealField& u) {
    const int M = u.grid.M;
    double acc = 0.0;
    for (int i = 0; i < M; ++i) {
        const int ip = (i + 1) % M;
        for (int j = 0; j < M; ++j) {
            const int jp = (j + 1) % M;
            const double d1 = u.at(ip, j) - u.at(i, j);
            const double d2 = u.at(i, jp) - u.at(i, j);
            acc += std::sqrt(d1 * d1 + d2 * d2);
        }
    }
    return u.grid.h * acc;
}

RealField prox_tv(const RealField& u, double lambda, int iters, double tau) {
    if (lambda < 0.0) throw std::invalid_argument("prox_tv: lambda must be >= 0");
    if (!(tau > 0.0) || tau > 0.25) throw std::invalid_argument("prox_tv: tau must lie in (0, 1/4]");
    if (lambda == 0.0) return u;

    // With the h^2-weighted fidelity and the h-scaled TV the problem reduces
    // to the raw-difference form with weight mu = lambda / h.
    const double mu = lambda / u.grid.h;
    const int M = u.grid.M;
    const size_t n = u.values.size();
    std::vector<double> px(n, 0.0), py(n, 0.0), w(n);

    for (int it = 0; it < iters; ++it) {
        // w = div(phi) - u/mu, with div the negative adjoint of the forward
        // difference gradient (backward differences, periodic)
        for (int i = 0; i < M; ++i) {
            const int im = (i + M - 1) % M;
            for (int j = 0; j < M; ++j) {
                const int jm = (j + M - 1) % M;
                const size_t idx = static_cast<size_t>(i) * M + j;
                const double div = px[idx] - px[static_cast<size_t>(im) * M + j] + py[idx] -
                                   py[static_cast<size_t>(i) * M + jm];
                w[idx] = div - u.values[idx] / mu;
            }
        }
        for (int i = 0; i < M; ++i) {
            const int ip = (i + 1) % M;
            for (int j = 0; j < M; ++j) {
                const int jp = (j + 1) % M;
                const size_t idx = static_cast<size_t>(i) * M + j;
                const double gx = w[static_cast<size_t>(ip) * M + j] - w[idx];
                const double gy = w[static_cast<size_t>(i) * M + jp] - w[idx];
                const double denom = 1.0 + tau * std::sqrt(gx * gx + gy * gy);
                px[idx] = (px[idx] + tau * gx) / denom;
                py[idx] = (py[idx] + tau * gy) / denom;
            }
        }
    }

    RealField v(u.grid);
    for (int i = 0; i < M; ++i) {
        const int im = (i + M - 1) % M;
        for (int j = 0; j < M; ++j) {
            const int jm = (j + M - 1) % M;
            const size_t idx = static_cast<size_t>(i) * M + j;
            const double div =
                px[idx] - px[static_cast<size_t>(im) * M + j] + py[idx] - py[static_cast<size_t>(i) * M + jm];
            v.values[idx] = u.values[idx] - mu * div;
        }
    }
    return v;
}

RealField project_admissible(const RealField& u, const ReconParams& params) {
    RealField v = u;
    if (params.nonneg)
        for (double& x : v.values) x = std::max(x, 0.0);
    if (!params.K_mask.values.empty()) {
        if (!(params.K_mask.grid == u.grid)) throw std::invalid_argument("project_admissible: K_mask grid mismatch");
        for (size_t i = 0; i < v.values.size(); ++i) v.values[i] *= params.K_mask.values[i];
    }
    return v;
}

namespace {

void validate(const ReconParams& p) {
    if (!(p.gamma > 0.0)) throw std::invalid_argument("reconstruct: gamma must be > 0");
    if (!(p.eta > 0.0)) throw std::invalid_argument("reconstruct: eta must be > 0");
    if (p.outer_iters < 1 || p.prox_iters < 1) throw std::invalid_argument("reconstruct: iterations must be >= 1");
    if (!(p.prox_tau > 0.0) || p.prox_tau > 0.25)
        throw std::invalid_argument("reconstruct: prox_tau must lie in (0, 1/4]");
    for (double v : p.K_mask.values)
        if (v != 0.0 && v != 1.0) throw std::invalid_argument("reconstruct: K_mask must be 0/1");
}

}  // namespace

ReconResult reconstruct(const Recording& rec, const SensorMask& mask, const ReconParams& params, double T,
                        double dt, const IterateCallback& on_iterate) {
    validate(params);
    ReconResult out;
    RealField p(mask.grid);  // p^0 = 0
    RealField y = p;         // y^1 = p^0
    double t_fista = 1.0;

    const double a1_init = discrepancy_A1(mask, p, rec, T, dt);
    const double j0_init = a1_init;  // TV(0) = 0
    out.log.push_back({0, j0_init, a1_init, 0.0, 0.0});

    for (int n = 1; n <= params.outer_iters; ++n) {
        const RealField g = grad_A1(mask, y, rec, T, dt);
        RealField u = y;
        for (size_t i = 0; i < u.values.size(); ++i) u.values[i] -= params.eta * g.values[i];
        RealField p_new = prox_tv(u, params.eta * params.gamma, params.prox_iters, params.prox_tau);
        if (params.apply_projection) p_new = project_admissible(p_new, params);

        double linf_change = 0.0;
        for (size_t i = 0; i < p_new.values.size(); ++i)
            linf_change = std::max(linf_change, std::abs(p_new.values[i] - p.values[i]));

        if (params.use_fista) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_fista * t_fista));
            const double beta = (t_fista - 1.0) / t_next;
            y = p_new;
            for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += beta * (p_new.values[i] - p.values[i]);
            t_fista = t_next;
        } else {
            y = p_new;
        }
        p = p_new;

        const double a1 = discrepancy_A1(mask, p, rec, T, dt);
        const double tv = tv_norm(p);
        const double j0 = a1 + params.gamma * tv;
        out.log.push_back({n, j0, a1, tv, linf_change});
        if (on_iterate) on_iterate(n, p);
        if (j0 > 10.0 * j0_init && j0 > 1e-12)
            throw std::runtime_error("reconstruct: J0 exceeded 10x its initial value; reduce the step size eta");
    }
    out.p0 = std::move(p);
    return out;
}

namespace io {

void write_recon_log(const std::string& path, const std::vector<ReconLogRow>& log) {
    std::string csv = "iter,J0,A1,TV,linf_change\n";
    char line[256];
    for (const auto& row : log) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g\n", row.iter, row.J0, row.A1, row.TV,
                      row.linf_change);
        csv += line;
    }
    atomic_write(path, csv);
}

}  // namespace io

}  // namespace tatopt
