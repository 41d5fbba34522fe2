#include "tatopt/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "tatopt/field_io.hpp"
#include "tatopt/rng.hpp"

namespace tatopt {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double bilinear(const Trajectory& traj, int k, double x, double y) {
    const Grid2D& g = traj.grid;
    const double ux = (x + 0.5 * g.D) / g.h;
    const double uy = (y + 0.5 * g.D) / g.h;
    const int i0 = static_cast<int>(std::floor(ux));
    const int j0 = static_cast<int>(std::floor(uy));
    const double fx = ux - i0;
    const double fy = uy - j0;
    const int M = g.M;
    const auto wrap = [M](int i) { return ((i % M) + M) % M; };
    const int i0w = wrap(i0), i1w = wrap(i0 + 1), j0w = wrap(j0), j1w = wrap(j0 + 1);
    const double v00 = traj.velocity_at(k, i0w * M + j0w);
    const double v10 = traj.velocity_at(k, i1w * M + j0w);
    const double v01 = traj.velocity_at(k, i0w * M + j1w);
    const double v11 = traj.velocity_at(k, i1w * M + j1w);
    return (1.0 - fx) * ((1.0 - fy) * v00 + fy * v01) + fx * ((1.0 - fy) * v10 + fy * v11);
}

}  // namespace

BoundaryProfile compute_psi(const Trajectory& traj, const BoundaryGeometry& geom, const Grid2D& grid,
                            PsiMode mode, double eps) {
    if (!(traj.grid == grid)) throw std::invalid_argument("compute_psi: grid mismatch");
    if (!traj.has_velocity()) throw std::invalid_argument("compute_psi: trajectory has no velocity samples");
    if (mode == PsiMode::volumetric && !(eps > 0.0))
        throw std::invalid_argument("compute_psi: volumetric mode needs eps > 0");

    const int B = geom.samples();
    const int K = traj.steps();
    const double dt = traj.times[1] - traj.times[0];

    // sample points: the boundary itself, plus the normal offsets in
    // volumetric mode
    int n_mu = 1;
    double dmu = 0.0;
    if (mode == PsiMode::volumetric) {
        n_mu = std::max(3, static_cast<int>(std::ceil(eps / (0.5 * grid.h))) + 1);
        dmu = eps / (n_mu - 1);
    }
    std::vector<std::array<double, 2>> pts(static_cast<size_t>(B) * n_mu);
    for (int b = 0; b < B; ++b) {
        const double th = geom.theta_at(b);
        const auto s = geom.point(th);
        const auto nrm = geom.outward_normal(th);
        for (int m = 0; m < n_mu; ++m) {
            const double mu = m * dmu;
            pts[static_cast<size_t>(b) * n_mu + m] = {s[0] + mu * nrm[0], s[1] + mu * nrm[1]};
        }
    }
    const double half = 0.5 * grid.D;
    for (const auto& p : pts)
        if (std::abs(p[0]) > half || std::abs(p[1]) > half)
            throw std::invalid_argument("compute_psi: boundary point outside grid");

    BoundaryProfile psi;
    psi.value.assign(static_cast<size_t>(B), 0.0);
    for (int k = 0; k <= K; ++k) {
        const double wt = ((k == 0 || k == K) ? 0.5 : 1.0) * dt;
        for (int b = 0; b < B; ++b) {
            if (mode == PsiMode::boundary) {
                const auto& p = pts[static_cast<size_t>(b) * n_mu];
                const double v = bilinear(traj, k, p[0], p[1]);
                psi.value[static_cast<size_t>(b)] += wt * v * v;
            } else {
                double acc = 0.0;
                for (int m = 0; m < n_mu; ++m) {
                    const double wm = ((m == 0 || m == n_mu - 1) ? 0.5 : 1.0) * dmu;
                    const auto& p = pts[static_cast<size_t>(b) * n_mu + m];
                    const double v = bilinear(traj, k, p[0], p[1]);
                    acc += wm * v * v;
                }
                psi.value[static_cast<size_t>(b)] += wt * acc;
            }
        }
    }
    return psi;
}

double h1_norm_sq(const RealField& p0, H1Norm which) {
    const Grid2D& g = p0.grid;
    double l2 = 0.0;
    for (double v : p0.values) l2 += v * v;
    l2 *= g.h * g.h;

    const SpectralField F = fft_forward(p0);
    double grad = 0.0;
    for (int i1 = 0; i1 < g.M; ++i1)
        for (int i2 = 0; i2 < g.M; ++i2) {
            const double w = g.omega(i1, i2);
            grad += w * w * std::norm(F.coeffs[static_cast<size_t>(i1) * g.M + i2]);
        }
    grad *= g.h * g.h / (static_cast<double>(g.M) * g.M);
    return which == H1Norm::full ? l2 + grad : grad;
}

namespace {

double profile_integral_over(const BoundaryProfile& psi, const BoundaryGeometry& geom,
                             const std::function<bool(int)>& in_gamma) {
    const int B = geom.samples();
    if (psi.samples() != B) throw std::invalid_argument("a2_functional: profile/geometry sample mismatch");
    const double dtheta = kTwoPi / B;
    double acc = 0.0;
    for (int b = 0; b < B; ++b)
        if (in_gamma(b)) acc += psi.value[static_cast<size_t>(b)] * geom.speed_at(b) * dtheta;
    return acc;
}

double a2_impl(const BoundaryProfile& psi, const BoundaryGeometry& geom, const std::function<bool(int)>& in_gamma,
               const RealField& p0, H1Norm norm) {
    const double denom = h1_norm_sq(p0, norm);
    if (!(denom > 0.0)) throw std::invalid_argument("a2_functional: ||p0||_H1 must be positive");
    return profile_integral_over(psi, geom, in_gamma) / denom;
}

}  // namespace

double a2_functional(const BoundaryProfile& psi, const SensorArcs& gamma, const BoundaryGeometry& geom,
                     const RealField& p0, H1Norm norm) {
    return a2_impl(
        psi, geom, [&](int b) { return gamma.contains(geom.theta_at(b)); }, p0, norm);
}

double a2_functional(const BoundaryProfile& psi, const SensorIndicator& gamma, const BoundaryGeometry& geom,
                     const RealField& p0, H1Norm norm) {
    if (gamma.samples() != geom.samples()) throw std::invalid_argument("a2_functional: indicator sample mismatch");
    return a2_impl(
        psi, geom, [&](int b) { return gamma.contains_sample(b); }, p0, norm);
}

std::pair<SensorIndicator, double> place_threshold(const BoundaryProfile& psi, double L,
                                                   const BoundaryGeometry& geom) {
    if (!(L > 0.0 && L < 1.0)) throw std::invalid_argument("place_threshold: L must lie in (0,1)");
    const int B = geom.samples();
    if (psi.samples() != B) throw std::invalid_argument("place_threshold: profile/geometry sample mismatch");

    const double dtheta = kTwoPi / B;
    std::vector<double> m(static_cast<size_t>(B));
    for (int b = 0; b < B; ++b) m[static_cast<size_t>(b)] = geom.speed_at(b) * dtheta;
    const double target = L * geom.perimeter();

    const auto measure_at_or_above = [&](double lambda) {
        double acc = 0.0;
        for (int b = 0; b < B; ++b)
            if (psi.value[static_cast<size_t>(b)] >= lambda) acc += m[static_cast<size_t>(b)];
        return acc;
    };

    double lo = *std::min_element(psi.value.begin(), psi.value.end());
    double hi = *std::max_element(psi.value.begin(), psi.value.end()) + 1.0;
    // dichotomy on the superlevel measure; invariant mu(lo) >= target > mu(hi)
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (measure_at_or_above(mid) >= target)
            lo = mid;
        else
            hi = mid;
    }
    // snap lambda to the critical sample value inside the final bracket
    double lambda = lo;
    {
        double best = lo;
        bool found = false;
        for (double v : psi.value)
            if (v >= lo && v < hi && (!found || v > best)) {
                best = v;
                found = true;
            }
        if (found) lambda = best;
    }

    SensorIndicator ind;
    ind.active.assign(static_cast<size_t>(B), 0);
    double measure = 0.0;
    for (int b = 0; b < B; ++b)
        if (psi.value[static_cast<size_t>(b)] > lambda) {
            ind.active[static_cast<size_t>(b)] = 1;
            measure += m[static_cast<size_t>(b)];
        }
    // admit tied samples in increasing theta order until the target is met
    for (int b = 0; b < B && measure < target; ++b)
        if (psi.value[static_cast<size_t>(b)] == lambda && !ind.active[static_cast<size_t>(b)]) {
            ind.active[static_cast<size_t>(b)] = 1;
            measure += m[static_cast<size_t>(b)];
        }
    return {ind, lambda};
}

namespace {

// GA internals: genes are arc-length positions s in [0, P); constraints and
// mutation act in arc length, evaluation maps back to angles.
struct GAContext {
    const BoundaryGeometry& geom;
    PeriodicCumulative weighted;  // f * speed on the angle grid
    double P;
    int N0;
    double ell;

    GAContext(const BoundaryProfile& psi, const BoundaryGeometry& geom_, int N0_, double ell_)
        : geom(geom_), weighted(make_weighted(psi, geom_)), P(geom_.perimeter()), N0(N0_), ell(ell_) {}

    static PeriodicCumulative make_weighted(const BoundaryProfile& psi, const BoundaryGeometry& g) {
        std::vector<double> w(static_cast<size_t>(g.samples()));
        for (int b = 0; b < g.samples(); ++b) w[static_cast<size_t>(b)] = psi.value[static_cast<size_t>(b)] * g.speed_at(b);
        return PeriodicCumulative(std::move(w));
    }

    double theta_of(double s) const { return wrap_angle(geom.arc_advance(0.0, std::fmod(s, P))); }

    void repair(std::vector<double>& s) const {
        for (double& v : s) {
            v = std::fmod(v, P);
            if (v < 0.0) v += P;
        }
        std::sort(s.begin(), s.end());
        for (int n = 1; n < N0; ++n)
            if (s[static_cast<size_t>(n)] - s[static_cast<size_t>(n - 1)] < ell)
                s[static_cast<size_t>(n)] = s[static_cast<size_t>(n - 1)] + ell;
        // wraparound spacing from the last arc back to the first
        if (N0 > 1 && s[static_cast<size_t>(N0 - 1)] > s[0] + P - ell)
            for (int n = 0; n < N0; ++n) s[static_cast<size_t>(n)] = s[0] + n * ell;
        for (double& v : s) v = std::fmod(v, P);
        std::sort(s.begin(), s.end());
    }

    double fitness(const std::vector<double>& s) const {
        double acc = 0.0;
        for (double v : s) {
            const double theta = theta_of(v);
            const double theta_hat = geom.arc_advance(theta, ell);
            acc += weighted.integral(theta, theta_hat);
        }
        return acc;
    }

    SensorArcs to_arcs(const std::vector<double>& s) const {
        std::vector<double> starts(s.size());
        for (size_t i = 0; i < s.size(); ++i) starts[i] = theta_of(s[i]);
        return make_sensor_arcs(geom, std::move(starts), ell);
    }
};

}  // namespace

double arcs_objective(const BoundaryProfile& psi, const BoundaryGeometry& geom, const SensorArcs& arcs) {
    PeriodicCumulative weighted = GAContext::make_weighted(psi, geom);
    double acc = 0.0;
    for (size_t n = 0; n < arcs.theta.size(); ++n) acc += weighted.integral(arcs.theta[n], arcs.theta_hat[n]);
    return acc;
}

GAResult place_ga(const BoundaryProfile& psi, const BoundaryGeometry& geom, int N0, double ell,
                  const GAParams& params, std::uint64_t seed) {
    if (N0 < 1) throw std::invalid_argument("place_ga: N0 must be >= 1");
    if (!(ell > 0.0) || N0 * ell >= geom.perimeter())
        throw std::invalid_argument("place_ga: infeasible (N0, ell): need N0*ell < perimeter");
    if (params.population < 2 || params.generations < 1 || params.tournament < 1 ||
        params.elites < 0 || params.elites >= params.population)
        throw std::invalid_argument("place_ga: bad GA parameters");

    GAContext ctx(psi, geom, N0, ell);
    Rng rng(Rng::derive(seed, 0xA11C));

    struct Individual {
        std::vector<double> genes;
        double fitness = 0.0;
    };
    std::vector<Individual> pop(static_cast<size_t>(params.population));
    for (auto& ind : pop) {
        ind.genes.resize(static_cast<size_t>(N0));
        for (double& v : ind.genes) v = rng.uniform(0.0, ctx.P);
        ctx.repair(ind.genes);
        ind.fitness = ctx.fitness(ind.genes);
    }

    const auto by_fitness_desc = [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; };
    std::sort(pop.begin(), pop.end(), by_fitness_desc);

    GAResult result;
    result.best_per_generation.reserve(static_cast<size_t>(params.generations));

    const auto tournament = [&](void) -> const Individual& {
        int best = rng.uniform_int(params.population);
        for (int i = 1; i < params.tournament; ++i) {
            const int cand = rng.uniform_int(params.population);
            if (pop[static_cast<size_t>(cand)].fitness > pop[static_cast<size_t>(best)].fitness) best = cand;
        }
        return pop[static_cast<size_t>(best)];
    };

    double sigma = params.mutation_sigma_frac * ctx.P;
    for (int gen = 0; gen < params.generations; ++gen) {
        std::vector<Individual> next;
        next.reserve(pop.size());
        for (int e = 0; e < params.elites; ++e) next.push_back(pop[static_cast<size_t>(e)]);
        while (static_cast<int>(next.size()) < params.population) {
            const Individual& pa = tournament();
            const Individual& pb = tournament();
            Individual child;
            child.genes.resize(static_cast<size_t>(N0));
            if (rng.uniform() < params.crossover_rate) {
                // BLX-0.5 per gene
                for (int n = 0; n < N0; ++n) {
                    const double a = pa.genes[static_cast<size_t>(n)];
                    const double b = pb.genes[static_cast<size_t>(n)];
                    const double lo = std::min(a, b), hi = std::max(a, b);
                    const double d = hi - lo;
                    child.genes[static_cast<size_t>(n)] = rng.uniform(lo - 0.5 * d, hi + 0.5 * d);
                }
            } else {
                child.genes = pa.genes;
            }
            for (double& v : child.genes) v += sigma * rng.normal();
            ctx.repair(child.genes);
            child.fitness = ctx.fitness(child.genes);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        std::sort(pop.begin(), pop.end(), by_fitness_desc);
        result.best_per_generation.push_back(pop[0].fitness);
        sigma *= params.mutation_decay;
    }

    result.arcs = ctx.to_arcs(pop[0].genes);
    result.objective = pop[0].fitness;
    return result;
}

namespace {

double interp_profile(const BoundaryProfile& psi, double theta) {
    const int B = psi.samples();
    const double t = wrap_angle(theta) * B / kTwoPi;
    const int i = std::min(static_cast<int>(t), B - 1);
    const double frac = t - i;
    const double a = psi.value[static_cast<size_t>(i)];
    const double b = psi.value[static_cast<size_t>((i + 1) % B)];
    return a + frac * (b - a);
}

double interp_profile_derivative(const BoundaryProfile& psi, double theta) {
    const int B = psi.samples();
    const double dtheta = kTwoPi / B;
    std::vector<double> d(static_cast<size_t>(B));
    for (int b = 0; b < B; ++b) {
        const double fp = psi.value[static_cast<size_t>((b + 1) % B)];
        const double fm = psi.value[static_cast<size_t>((b + B - 1) % B)];
        d[static_cast<size_t>(b)] = (fp - fm) / (2.0 * dtheta);
    }
    BoundaryProfile dp;
    dp.value = std::move(d);
    return interp_profile(dp, theta);
}

}  // namespace

std::vector<ArcKktReport> kkt_residual(const SensorArcs& arcs, const BoundaryProfile& psi,
                                       const BoundaryGeometry& geom) {
    if (psi.samples() != geom.samples()) throw std::invalid_argument("kkt_residual: sample mismatch");
    const int N0 = arcs.count();
    const double tol = 1e-6 * geom.perimeter();
    std::vector<ArcKktReport> out(static_cast<size_t>(N0));
    for (int n = 0; n < N0; ++n) {
        ArcKktReport& r = out[static_cast<size_t>(n)];
        r.arc = n + 1;
        const double next_start = arcs.theta[static_cast<size_t>((n + 1) % N0)];
        const double gap = N0 > 1 ? geom.arc_length(arcs.theta[static_cast<size_t>(n)], next_start)
                                  : geom.perimeter();
        r.spacing_slack = gap - arcs.ell;
        r.constraint_active = r.spacing_slack <= tol;
        if (!r.constraint_active) {
            const double th = arcs.theta[static_cast<size_t>(n)];
            const double th_hat = arcs.theta_hat[static_cast<size_t>(n)];
            r.stationarity_gap = std::abs(interp_profile(psi, th) - interp_profile(psi, th_hat));
            r.second_order = interp_profile_derivative(psi, th_hat) / geom.speed(th_hat) -
                             interp_profile_derivative(psi, th) / geom.speed(th);
        }
    }
    return out;
}

namespace io {

void write_profile(const std::string& path, const BoundaryProfile& psi, const BoundaryGeometry& geom) {
    std::string csv = "theta,psi\n";
    char line[96];
    for (int b = 0; b < psi.samples(); ++b) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", geom.theta_at(b), psi.value[static_cast<size_t>(b)]);
        csv += line;
    }
    atomic_write(path, csv);
}

void write_arcs(const std::string& path, const SensorArcs& arcs) {
    std::string csv = "n,theta_start,theta_end\n";
    char line[96];
    for (int n = 0; n < arcs.count(); ++n) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g\n", n + 1, arcs.theta[static_cast<size_t>(n)],
                      arcs.theta_hat[static_cast<size_t>(n)]);
        csv += line;
    }
    atomic_write(path, csv);
}

void write_intervals(const std::string& path, const std::vector<std::array<double, 2>>& intervals) {
    std::string csv = "n,theta_start,theta_end\n";
    char line[96];
    for (size_t n = 0; n < intervals.size(); ++n) {
        std::snprintf(line, sizeof(line), "%zu,%.12g,%.12g\n", n + 1, intervals[n][0], intervals[n][1]);
        csv += line;
    }
    atomic_write(path, csv);
}

}  // namespace io

}  // namespace tatopt
