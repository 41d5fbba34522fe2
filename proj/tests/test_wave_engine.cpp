#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tatopt/wave.hpp"

using namespace tatopt;

namespace {

double state_diff(const SpectralWaveState& a, const SpectralWaveState& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.c.size(); ++i) {
        m = std::max(m, std::abs(a.c[i] - b.c[i]));
        m = std::max(m, std::abs(a.cdot[i] - b.cdot[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("from_initial: zero, cosine, round trip") {
    const Grid2D g = make_grid(4.0, 32);

    const SpectralWaveState zero = from_initial(RealField(g));
    for (const auto& c : zero.c) CHECK(std::abs(c) == 0.0);
    for (const auto& c : zero.cdot) CHECK(std::abs(c) == 0.0);

    oracles::PlaneWave wave{g, 2, 1, 1.0};
    const SpectralWaveState s = from_initial(wave.initial());
    int nonzero = 0;
    double scale = 0.0;
    for (const auto& c : s.c) scale = std::max(scale, std::abs(c));
    for (const auto& c : s.c)
        if (std::abs(c) > 1e-9 * scale) ++nonzero;
    CHECK(nonzero == 2);  // the mode and its conjugate

    Rng rng(3);
    RealField p0(g);
    for (double& v : p0.values) v = rng.normal();
    const RealField back = pressure_field(from_initial(p0));
    for (size_t i = 0; i < p0.values.size(); ++i) CHECK(back.values[i] == doctest::Approx(p0.values[i]).epsilon(1e-12));
}

TEST_CASE("propagate: dt=0 identity and zero-mode drift") {
    const Grid2D g = make_grid(4.0, 16);
    Rng rng(5);
    RealField p0(g);
    for (double& v : p0.values) v = rng.normal();
    SpectralWaveState s = from_initial(p0);
    const SpectralWaveState same = propagate(s, 0.0);
    CHECK(state_diff(s, same) == 0.0);

    // state with c=0, cdot=1 on the zero mode drifts linearly
    SpectralWaveState drift;
    drift.grid = g;
    drift.c.assign(static_cast<size_t>(g.size()), {0.0, 0.0});
    drift.cdot.assign(static_cast<size_t>(g.size()), {0.0, 0.0});
    drift.cdot[0] = 1.0;
    const SpectralWaveState after = propagate(drift, 0.25);
    CHECK(after.c[0].real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(after.cdot[0].real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("plane wave matches the analytic solution after 2^10 steps") {
    const Grid2D g = make_grid(4.0, 64);
    oracles::PlaneWave wave{g, 3, -2, 0.8};
    const double T = 2.0;
    const int K = 1 << 10;
    const double dt = T / K;
    SpectralWaveState s = from_initial(wave.initial());
    WaveStepper step(g, dt);
    for (int k = 0; k < K; ++k) step.apply(s.c, s.cdot);
    const RealField got = pressure_field(s);
    const RealField want = wave.pressure_field(T);
    double err = 0.0;
    for (size_t i = 0; i < got.values.size(); ++i) err = std::max(err, std::abs(got.values[i] - want.values[i]));
    CHECK(err <= 1e-10);
}

TEST_CASE("semigroup property and time-reversal symmetry") {
    const Grid2D g = make_grid(4.0, 32);
    const RealField p0 = oracles::smooth_random_field(g, 9);
    const SpectralWaveState s = from_initial(p0);

    const SpectralWaveState oneshot = propagate(s, 0.7);
    const SpectralWaveState composed = propagate(propagate(s, 0.3), 0.4);
    CHECK(state_diff(oneshot, composed) <= 1e-12);

    // negate cdot, march forward, negate again: back to the start
    SpectralWaveState fwd = propagate(s, 0.5);
    for (auto& v : fwd.cdot) v = -v;
    SpectralWaveState back = propagate(fwd, 0.5);
    for (auto& v : back.cdot) v = -v;
    CHECK(state_diff(back, s) <= 1e-12);
}

TEST_CASE("inject_pressure_impulse semantics") {
    const Grid2D g = make_grid(4.0, 16);
    const RealField p0 = oracles::smooth_random_field(g, 13);
    const RealField bump = oracles::gaussian_bump(g, 0.2, -0.4, 0.3);
    SpectralWaveState s = from_initial(p0);

    const SpectralWaveState same = inject_pressure_impulse(s, bump, 0.0);
    CHECK(state_diff(s, same) == 0.0);

    const SpectralWaveState hit = inject_pressure_impulse(s, bump, 0.75);
    const RealField p = pressure_field(hit);
    for (int i = 0; i < g.M; ++i)
        for (int j = 0; j < g.M; ++j)
            CHECK(p.at(i, j) == doctest::Approx(p0.at(i, j) + 0.75 * bump.at(i, j)).epsilon(1e-11));
    for (size_t i = 0; i < s.cdot.size(); ++i) CHECK(std::abs(hit.cdot[i] - s.cdot[i]) == 0.0);

    // two injections equal one with the summed weight
    const SpectralWaveState twice = inject_pressure_impulse(inject_pressure_impulse(s, bump, 0.3), bump, 0.45);
    CHECK(state_diff(twice, hit) <= 1e-12);

    RealField other(make_grid(4.0, 32));
    CHECK_THROWS_AS(inject_pressure_impulse(s, other, 1.0), std::invalid_argument);
}

TEST_CASE("energy: zero state, single mode value, per-step invariance") {
    const Grid2D g = make_grid(4.0, 32);
    CHECK(energy(from_initial(RealField(g))) == 0.0);

    // single cosine mode, amplitude a: energy = (D^2/4) a^2 omega^2,
    // cross-checked against direct spatial quadrature of the analytic fields
    oracles::PlaneWave wave{g, 2, 1, 0.6};
    SpectralWaveState s = from_initial(wave.initial());
    const double expected = 0.25 * g.D * g.D * 0.6 * 0.6 * wave.omega() * wave.omega();
    CHECK(energy(s) == doctest::Approx(expected).epsilon(1e-10));

    const double t_check = 0.37;
    double quad = 0.0;
    const double om = wave.omega();
    const double k2pi = 2.0 * M_PI;
    for (int i = 0; i < g.M; ++i)
        for (int j = 0; j < g.M; ++j) {
            const double x = g.coord(i), y = g.coord(j);
            const double carrier = std::cos(k2pi * (wave.xi1() * x + wave.xi2() * y));
            const double dpdt = -0.6 * om * std::sin(om * t_check) * carrier;
            const double gx = -0.6 * std::cos(om * t_check) * k2pi * wave.xi1() *
                              std::sin(k2pi * (wave.xi1() * x + wave.xi2() * y));
            const double gy = -0.6 * std::cos(om * t_check) * k2pi * wave.xi2() *
                              std::sin(k2pi * (wave.xi1() * x + wave.xi2() * y));
            quad += 0.5 * (dpdt * dpdt + gx * gx + gy * gy) * g.h * g.h;
        }
    const SpectralWaveState st = propagate(s, t_check);
    CHECK(energy(st) == doctest::Approx(quad).epsilon(1e-10));

    SpectralWaveState walk = from_initial(oracles::smooth_random_field(g, 21));
    double e = energy(walk);
    for (int k = 0; k < 32; ++k) {
        walk = propagate(walk, 0.01);
        const double e2 = energy(walk);
        CHECK(std::abs(e2 - e) <= 1e-12 * std::max(1.0, e));
        e = e2;
    }
}

TEST_CASE("solve_forward: zero data, analytic trajectory, velocity snapshots") {
    const Grid2D g = make_grid(4.0, 64);

    const Trajectory silent = solve_forward(RealField(g), 1.0, 0.25);
    for (const auto& frame : silent.pressure)
        for (double v : frame) CHECK(v == 0.0);

    oracles::PlaneWave wave{g, 1, 2, 1.3};
    TrajectorySampling sampling;
    sampling.velocity = true;
    const double T = 1.0, dt = 1.0 / 64;
    const Trajectory traj = solve_forward(wave.initial(), T, dt, sampling);
    REQUIRE(traj.steps() == 64);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(T).epsilon(1e-15));
    for (int k = 0; k <= traj.steps(); k += 8) {
        const double t = traj.times[static_cast<size_t>(k)];
        for (int i = 0; i < g.M; i += 7)
            for (int j = 0; j < g.M; j += 7) {
                CHECK(traj.pressure_at(k, i * g.M + j) ==
                      doctest::Approx(wave.pressure(t, g.coord(i), g.coord(j))).epsilon(1e-10).scale(1.0));
                CHECK(traj.velocity_at(k, i * g.M + j) ==
                      doctest::Approx(wave.velocity(t, g.coord(i), g.coord(j))).epsilon(1e-10).scale(1.0));
            }
    }
}

TEST_CASE("solve_forward is linear in the initial data") {
    const Grid2D g = make_grid(4.0, 32);
    const RealField a = oracles::smooth_random_field(g, 40);
    const RealField b = oracles::smooth_random_field(g, 41);
    RealField combo(g);
    for (size_t i = 0; i < combo.values.size(); ++i) combo.values[i] = 1.5 * a.values[i] - 0.5 * b.values[i];
    const Trajectory ta = solve_forward(a, 0.5, 0.125);
    const Trajectory tb = solve_forward(b, 0.5, 0.125);
    const Trajectory tc = solve_forward(combo, 0.5, 0.125);
    for (size_t k = 0; k < tc.pressure.size(); ++k)
        for (size_t i = 0; i < tc.pressure[k].size(); i += 13)
            CHECK(tc.pressure[k][i] ==
                  doctest::Approx(1.5 * ta.pressure[k][i] - 0.5 * tb.pressure[k][i]).epsilon(1e-11).scale(1.0));
}

TEST_CASE("solve_forward guards: divisibility and storage policy") {
    const Grid2D g = make_grid(4.0, 16);
    const RealField p0 = oracles::smooth_random_field(g, 50);
    CHECK_THROWS_AS(solve_forward(p0, 1.0, 0.3), std::invalid_argument);

    const Grid2D big = make_grid(4.0, 512);
    RealField huge(big);
    CHECK_THROWS_AS(solve_forward(huge, 1.0, 0.5), std::runtime_error);

    // restricted sampling lifts the policy limit
    TrajectorySampling sampling;
    sampling.cells = {0, 1, 2};
    const Trajectory t = solve_forward(huge, 1.0, 0.5, sampling);
    CHECK(t.pressure[0].size() == 3);
    CHECK_THROWS_AS(t.pressure_at(0, 100), std::out_of_range);
}

TEST_CASE("energy drift over many steps stays tiny") {
    const Grid2D g = make_grid(4.0, 64);
    const RealField p0 = oracles::smooth_random_field(g, 60);
    SpectralWaveState s = from_initial(p0);
    const double e0 = energy(s);
    WaveStepper step(g, 2.0 / 1024);
    for (int k = 0; k < 1024; ++k) step.apply(s.c, s.cdot);
    CHECK(std::abs(energy(s) - e0) <= 1e-8 * e0);
}
