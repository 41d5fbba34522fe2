// Independent oracles used by the tests: brute-force transforms, analytic
// wave solutions, and tiny-problem reference solvers.  Nothing here calls
// the implementation paths it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tatopt/grid.hpp"
#include "tatopt/rng.hpp"

namespace oracles {

// O(M^4) direct DFT, forward unnormalized (matches the library convention)
inline std::vector<std::complex<double>> direct_dft(const tatopt::RealField& f) {
    const int M = f.grid.M;
    std::vector<std::complex<double>> out(static_cast<size_t>(M) * M);
    for (int k1 = 0; k1 < M; ++k1)
        for (int k2 = 0; k2 < M; ++k2) {
            std::complex<double> acc{0.0, 0.0};
            for (int j1 = 0; j1 < M; ++j1)
                for (int j2 = 0; j2 < M; ++j2) {
                    const double phase = -2.0 * M_PI * (double(k1) * j1 + double(k2) * j2) / M;
                    acc += f.at(j1, j2) * std::complex<double>(std::cos(phase), std::sin(phase));
                }
            out[static_cast<size_t>(k1) * M + k2] = acc;
        }
    return out;
}

// separated solution of the wave equation for p0 = a*cos(2*pi*xi.x):
// p(t,x) = a*cos(2*pi*|xi|*t)*cos(2*pi*xi.x)
struct PlaneWave {
    tatopt::Grid2D grid;
    int n1 = 1, n2 = 0;
    double amplitude = 1.0;

    double xi1() const { return n1 / grid.D; }
    double xi2() const { return n2 / grid.D; }
    double omega() const { return 2.0 * M_PI * std::hypot(xi1(), xi2()); }

    double pressure(double t, double x, double y) const {
        return amplitude * std::cos(omega() * t) * std::cos(2.0 * M_PI * (xi1() * x + xi2() * y));
    }
    double velocity(double t, double x, double y) const {
        return -amplitude * omega() * std::sin(omega() * t) * std::cos(2.0 * M_PI * (xi1() * x + xi2() * y));
    }

    tatopt::RealField initial() const {
        tatopt::RealField f(grid);
        for (int i = 0; i < grid.M; ++i)
            for (int j = 0; j < grid.M; ++j) f.at(i, j) = pressure(0.0, grid.coord(i), grid.coord(j));
        return f;
    }
    tatopt::RealField pressure_field(double t) const {
        tatopt::RealField f(grid);
        for (int i = 0; i < grid.M; ++i)
            for (int j = 0; j < grid.M; ++j) f.at(i, j) = pressure(t, grid.coord(i), grid.coord(j));
        return f;
    }
};

// band-limited random field: random coefficients on the lowest modes only
inline tatopt::RealField smooth_random_field(const tatopt::Grid2D& grid, std::uint64_t seed, int max_mode = 6,
                                             double amplitude = 1.0) {
    tatopt::Rng rng(seed);
    tatopt::RealField f(grid);
    struct Mode {
        double a, b;
        int n1, n2;
    };
    std::vector<Mode> modes;
    for (int n1 = 0; n1 <= max_mode; ++n1)
        for (int n2 = -max_mode; n2 <= max_mode; ++n2) {
            if (n1 == 0 && n2 < 0) continue;
            modes.push_back({rng.normal(), rng.normal(), n1, n2});
        }
    for (int i = 0; i < grid.M; ++i) {
        const double x = grid.coord(i);
        for (int j = 0; j < grid.M; ++j) {
            const double y = grid.coord(j);
            double v = 0.0;
            for (const auto& m : modes) {
                const double phase = 2.0 * M_PI * (m.n1 * x + m.n2 * y) / grid.D;
                v += m.a * std::cos(phase) + m.b * std::sin(phase);
            }
            f.at(i, j) = amplitude * v / modes.size();
        }
    }
    return f;
}

inline tatopt::RealField gaussian_bump(const tatopt::Grid2D& grid, double cx, double cy, double sigma,
                                       double amplitude = 1.0) {
    tatopt::RealField f(grid);
    for (int i = 0; i < grid.M; ++i) {
        const double x = grid.coord(i);
        for (int j = 0; j < grid.M; ++j) {
            const double y = grid.coord(j);
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            f.at(i, j) = amplitude * std::exp(-0.5 * r2 / (sigma * sigma));
        }
    }
    return f;
}

// objective of the TV prox problem, h^2-weighted fidelity + h-scaled TV
inline double tv_prox_objective(const tatopt::RealField& u, const tatopt::RealField& v, double lambda) {
    const int M = u.grid.M;
    const double h = u.grid.h;
    double fid = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i) {
        const double d = u.values[i] - v.values[i];
        fid += d * d;
    }
    double tv = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const double d1 = v.at((i + 1) % M, j) - v.at(i, j);
            const double d2 = v.at(i, (j + 1) % M) - v.at(i, j);
            tv += std::sqrt(d1 * d1 + d2 * d2);
        }
    return 0.5 * h * h * fid + lambda * h * tv;
}

// subgradient descent with diminishing steps and best-iterate tracking;
// adequate for tiny grids
inline tatopt::RealField subgradient_tv_prox(const tatopt::RealField& u, double lambda, int iters = 2000000) {
    const int M = u.grid.M;
    const double h = u.grid.h;
    tatopt::RealField v = u;
    tatopt::RealField best = v;
    double best_obj = tv_prox_objective(u, v, lambda);
    std::vector<double> g(v.values.size());
    double scale = 0.0;
    for (double x : u.values) scale = std::max(scale, std::abs(x));
    const double step0 = 0.5 * (scale > 0 ? scale : 1.0);

    for (int it = 0; it < iters; ++it) {
        std::fill(g.begin(), g.end(), 0.0);
        for (size_t i = 0; i < g.size(); ++i) g[i] = h * h * (v.values[i] - u.values[i]);
        for (int i = 0; i < M; ++i) {
            const int ip = (i + 1) % M;
            for (int j = 0; j < M; ++j) {
                const int jp = (j + 1) % M;
                const double d1 = v.at(ip, j) - v.at(i, j);
                const double d2 = v.at(i, jp) - v.at(i, j);
                const double nrm = std::sqrt(d1 * d1 + d2 * d2);
                if (nrm > 0.0) {
                    const double w = lambda * h / nrm;
                    g[static_cast<size_t>(ip) * M + j] += w * d1;
                    g[static_cast<size_t>(i) * M + j] -= w * (d1 + d2);
                    g[static_cast<size_t>(i) * M + jp] += w * d2;
                }
            }
        }
        const double step = step0 / std::sqrt(1.0 + it);
        double gnorm = 0.0;
        for (double x : g) gnorm += x * x;
        gnorm = std::sqrt(gnorm);
        if (gnorm == 0.0) break;
        for (size_t i = 0; i < g.size(); ++i) v.values[i] -= step * g[i] / gnorm;
        const double obj = tv_prox_objective(u, v, lambda);
        if (obj < best_obj) {
            best_obj = obj;
            best = v;
        }
    }
    return best;
}

}  // namespace oracles
