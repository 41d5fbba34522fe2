#include "tatopt/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

#include "json.hpp"
#include "tatopt/field_io.hpp"
#include "tatopt/placement.hpp"
#include "tatopt/rng.hpp"

namespace tatopt {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kNoiseStream = 0xA05E;

struct InitialSensors {
    SensorMask mask;
    std::optional<SensorArcs> arcs;  // empty when the full boundary is used
};

InitialSensors make_initial_sensors(const PipelineConfig& cfg, const BoundaryGeometry& geom, const Grid2D& grid) {
    InitialSensors init;
    if (cfg.init == "full") {
        init.mask = full_boundary_mask(geom, cfg.eps, grid);
        return init;
    }
    const double P = geom.perimeter();
    const int count = cfg.init == "arc" ? 1 : cfg.init_count;
    const double ell = cfg.L * P / count;
    std::vector<double> starts = cfg.init_starts;
    if (starts.empty()) {
        starts.resize(static_cast<size_t>(count));
        for (int n = 0; n < count; ++n) starts[static_cast<size_t>(n)] = wrap_angle(n * 2.0 * M_PI / count);
    }
    if (static_cast<int>(starts.size()) != count)
        throw std::invalid_argument("pipeline: init_starts size does not match init_count");
    init.arcs = make_sensor_arcs(geom, starts, ell);
    init.mask = build_sensor_mask(geom, *init.arcs, cfg.eps, grid);
    return init;
}

double a2_of_initial(const InitialSensors& init, const BoundaryProfile& psi, const BoundaryGeometry& geom,
                     const RealField& p0) {
    if (init.arcs) return a2_functional(psi, *init.arcs, geom, p0);
    return a2_functional(psi, full_indicator(geom.samples()), geom, p0);
}

struct RoundArtifacts {
    ordered_json arcs_json = ordered_json::array();
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double a2_before = 0.0;
    double a2_after = 0.0;
    SensorMask mask;
};

// one placement round: psi from the given trajectory, threshold or GA set,
// A2 bookkeeping, artifact CSVs
RoundArtifacts place_round(const PipelineConfig& cfg, const BoundaryGeometry& geom, const Grid2D& grid,
                           const Trajectory& traj, const RealField& reference_p0, const InitialSensors& init,
                           const std::string& out, int round) {
    const PsiMode mode = cfg.psi_mode == "volumetric" ? PsiMode::volumetric : PsiMode::boundary;
    const BoundaryProfile psi = compute_psi(traj, geom, grid, mode, cfg.eps);
    io::write_profile(out + "/psi_round" + std::to_string(round) + ".csv", psi, geom);

    RoundArtifacts art;
    art.a2_before = a2_of_initial(init, psi, geom, reference_p0);
    const std::string sensors_csv = out + "/sensors_round" + std::to_string(round) + ".csv";
    if (cfg.placement_mode == "threshold") {
        auto [ind, lambda] = place_threshold(psi, cfg.L, geom);
        art.lambda = lambda;
        art.mask = build_sensor_mask(geom, ind, cfg.eps, grid);
        art.a2_after = a2_functional(psi, ind, geom, reference_p0);
        const auto intervals = indicator_intervals(ind, geom);
        io::write_intervals(sensors_csv, intervals);
        for (size_t n = 0; n < intervals.size(); ++n) {
            ordered_json a;
            a["n"] = n + 1;
            a["theta_start"] = intervals[n][0];
            a["theta_end"] = intervals[n][1];
            art.arcs_json.push_back(a);
        }
    } else {
        const double ell = cfg.ell > 0.0 ? cfg.ell : cfg.L * geom.perimeter() / cfg.N0;
        const GAResult ga = place_ga(psi, geom, cfg.N0, ell, cfg.ga, Rng::derive(cfg.seed, 0x6A00 + static_cast<std::uint64_t>(round)));
        art.mask = build_sensor_mask(geom, ga.arcs, cfg.eps, grid);
        art.a2_after = a2_functional(psi, ga.arcs, geom, reference_p0);
        io::write_arcs(sensors_csv, ga.arcs);
        for (int n = 0; n < ga.arcs.count(); ++n) {
            ordered_json a;
            a["n"] = n + 1;
            a["theta_start"] = ga.arcs.theta[static_cast<size_t>(n)];
            a["theta_end"] = ga.arcs.theta_hat[static_cast<size_t>(n)];
            art.arcs_json.push_back(a);
        }
    }
    return art;
}

}  // namespace

SensorMask initial_sensor_mask(const PipelineConfig& cfg, const BoundaryGeometry& geom, const Grid2D& grid) {
    return make_initial_sensors(cfg, geom, grid).mask;
}

std::vector<int> ring_band_cells(const Grid2D& grid, double R, double eps) {
    std::vector<int> cells;
    const double lo = R - 2.0 * grid.h;
    const double hi = R + eps + 2.0 * grid.h;
    for (int i1 = 0; i1 < grid.M; ++i1) {
        const double x = grid.coord(i1);
        for (int i2 = 0; i2 < grid.M; ++i2) {
            const double r = std::hypot(x, grid.coord(i2));
            if (r >= lo && r <= hi) cells.push_back(i1 * grid.M + i2);
        }
    }
    return cells;
}

void add_noise(Recording& rec, double level, std::uint64_t seed) {
    if (level <= 0.0) return;
    double peak = 0.0;
    for (const auto& row : rec.samples)
        for (double v : row) peak = std::max(peak, std::abs(v));
    const double std_dev = level * peak;
    Rng rng(seed);
    for (auto& row : rec.samples)
        for (double& v : row) v += std_dev * rng.normal();
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const std::string out = cfg.out_dir;
    std::filesystem::create_directories(out);

    const Grid2D grid = make_grid(cfg.D, cfg.M);
    const BoundaryGeometry geom = BoundaryGeometry::circle(cfg.R, cfg.boundary_samples);
    const RealField truth = make_phantom(cfg.phantom, grid);
    io::write_tatf1(out + "/phantom.tatf", truth);
    io::write_pgm(out + "/phantom.pgm", truth);

    ReconParams recon;
    recon.gamma = cfg.gamma;
    recon.eta = cfg.eta;
    recon.prox_iters = cfg.prox_iters;
    recon.prox_tau = cfg.prox_tau;
    recon.use_fista = cfg.fista;
    recon.apply_projection = cfg.project;
    recon.K_mask = ball_mask(grid, cfg.phantom.K_radius);

    // one truth solve serves every measurement series: the band covers any
    // sensor mask on the ring
    TrajectorySampling truth_sampling;
    truth_sampling.pressure = true;
    truth_sampling.velocity = cfg.oracle_psi;
    truth_sampling.cells = ring_band_cells(grid, cfg.R, cfg.eps);
    const Trajectory truth_traj = solve_forward(truth, cfg.T, cfg.dt, truth_sampling);

    const InitialSensors init = make_initial_sensors(cfg, geom, grid);
    io::save_mask(out + "/mask_initial.tatf", init.mask);
    if (init.arcs) io::write_arcs(out + "/sensors_initial.csv", *init.arcs);

    Recording rec_init = record(truth_traj, init.mask);
    add_noise(rec_init, cfg.noise_level, Rng::derive(cfg.seed, kNoiseStream));

    PipelineReport report;
    const RealField tr_img = time_reversal_image(rec_init, init.mask, geom, cfg.T, cfg.dt);
    io::write_tatf1(out + "/tr_image.tatf", tr_img);
    io::write_pgm(out + "/tr_image.pgm", tr_img);
    report.tr_baseline_error = rel_l2_error(tr_img, truth);

    ordered_json arcs_per_round = ordered_json::array();
    RealField current;  // latest reconstruction
    if (!cfg.oracle_psi) {
        recon.outer_iters = cfg.stage1_iters;
        ReconResult stage1 = reconstruct(rec_init, init.mask, recon, cfg.T, cfg.dt);
        io::write_recon_log(out + "/stage1_log.csv", stage1.log);
        io::write_tatf1(out + "/recon_stage1.tatf", stage1.p0);
        io::write_pgm(out + "/recon_stage1.pgm", stage1.p0);
        report.stage1_error = rel_l2_error(stage1.p0, truth);
        current = std::move(stage1.p0);
    }

    const int rounds = cfg.oracle_psi ? 1 : cfg.alternate;
    for (int r = 1; r <= rounds; ++r) {
        // psi from the truth in oracle mode, else from the latest
        // reconstruction's trajectory
        Trajectory psi_traj;
        const RealField& psi_source = cfg.oracle_psi ? truth : current;
        if (cfg.oracle_psi) {
            psi_traj = truth_traj;  // already carries velocities
        } else {
            TrajectorySampling s;
            s.pressure = false;
            s.velocity = true;
            s.cells = truth_sampling.cells;
            psi_traj = solve_forward(psi_source, cfg.T, cfg.dt, s);
        }
        RoundArtifacts art = place_round(cfg, geom, grid, psi_traj, psi_source, init, out, r);
        arcs_per_round.push_back(art.arcs_json);
        report.lambdas.push_back(art.lambda);
        report.a2_optimized.push_back(art.a2_after);
        report.a2_initial.push_back(art.a2_before);

        Recording rec_new = record(truth_traj, art.mask);
        add_noise(rec_new, cfg.noise_level, Rng::derive(cfg.seed, kNoiseStream + static_cast<std::uint64_t>(r)));
        io::save_mask(out + "/mask_round" + std::to_string(r) + ".tatf", art.mask);

        recon.outer_iters = cfg.oracle_psi ? cfg.stage1_iters : cfg.stage2_iters;
        ReconResult res = reconstruct(rec_new, art.mask, recon, cfg.T, cfg.dt);
        io::write_recon_log(out + "/round" + std::to_string(r) + "_log.csv", res.log);
        io::write_tatf1(out + "/recon_round" + std::to_string(r) + ".tatf", res.p0);
        io::write_pgm(out + "/recon_round" + std::to_string(r) + ".pgm", res.p0);
        report.round_errors.push_back(rel_l2_error(res.p0, truth));
        current = std::move(res.p0);
    }

    ordered_json j;
    j["config"] = {{"D", cfg.D},
                   {"M", cfg.M},
                   {"T", cfg.T},
                   {"dt", cfg.dt},
                   {"R", cfg.R},
                   {"eps", cfg.eps},
                   {"L", cfg.L},
                   {"gamma", cfg.gamma},
                   {"eta", cfg.eta},
                   {"seed", cfg.seed},
                   {"noise", cfg.noise_level},
                   {"placement_mode", cfg.placement_mode},
                   {"oracle_psi", cfg.oracle_psi}};
    ordered_json errors;
    errors["tr_baseline"] = report.tr_baseline_error;
    if (cfg.oracle_psi) {
        errors["oracle"] = report.round_errors.front();
    } else {
        errors["stage1"] = report.stage1_error;
        errors["rounds"] = report.round_errors;
    }
    j["errors"] = errors;
    j["a2"] = {{"initial", report.a2_initial}, {"optimized", report.a2_optimized}};
    ordered_json lambdas = ordered_json::array();
    for (double l : report.lambdas) {
        if (std::isnan(l))
            lambdas.push_back(nullptr);
        else
            lambdas.push_back(l);
    }
    j["lambda"] = lambdas;
    j["arcs"] = arcs_per_round;
    j["iterations"] = {{"stage1", cfg.stage1_iters}, {"stage2", cfg.stage2_iters}, {"rounds", rounds}};

    report.report_path = out + "/report.json";
    io::atomic_write(report.report_path, j.dump(2) + "\n");
    return report;
}

}  // namespace tatopt
