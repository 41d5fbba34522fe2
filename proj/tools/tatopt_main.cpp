// tatopt: acoustic source reconstruction and sensor placement experiments.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tatopt/field_io.hpp"
#include "tatopt/pipeline.hpp"
#include "tatopt/placement.hpp"
#include "tatopt/rng.hpp"

namespace {

using namespace tatopt;

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    std::optional<std::uint64_t> seed_override;
};

PipelineConfig load_config(const CommonOpts& opts) {
    PipelineConfig cfg = PipelineConfig::from_file(opts.config_path);
    if (!opts.out_override.empty()) cfg.out_dir = opts.out_override;
    if (opts.seed_override) cfg.seed = *opts.seed_override;
    return cfg;
}

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "configuration file (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_override, "output directory (overrides [run] out)");
    sub->add_option("--seed", opts.seed_override, "RNG seed (overrides [run] seed)");
}

int cmd_simulate(const CommonOpts& opts) {
    const PipelineConfig cfg = load_config(opts);
    std::filesystem::create_directories(cfg.out_dir);
    const Grid2D grid = make_grid(cfg.D, cfg.M);
    const BoundaryGeometry geom = BoundaryGeometry::circle(cfg.R, cfg.boundary_samples);
    const RealField truth = make_phantom(cfg.phantom, grid);
    io::write_tatf1(cfg.out_dir + "/phantom.tatf", truth);
    io::write_pgm(cfg.out_dir + "/phantom.pgm", truth);

    TrajectorySampling sampling;
    sampling.cells = ring_band_cells(grid, cfg.R, cfg.eps);
    const Trajectory traj = solve_forward(truth, cfg.T, cfg.dt, sampling);
    const SensorMask mask = initial_sensor_mask(cfg, geom, grid);
    Recording rec = record(traj, mask);
    add_noise(rec, cfg.noise_level, Rng::derive(cfg.seed, 0xA05E));
    io::save_recording(cfg.out_dir + "/recording", rec, mask);
    std::cout << "wrote phantom and recording (" << mask.active_count() << " sensor cells, " << rec.steps()
              << " steps) to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_reconstruct(const CommonOpts& opts, const std::string& data_dir) {
    const PipelineConfig cfg = load_config(opts);
    std::filesystem::create_directories(cfg.out_dir);
    const Grid2D grid = make_grid(cfg.D, cfg.M);
    const BoundaryGeometry geom = BoundaryGeometry::circle(cfg.R, cfg.boundary_samples);

    SensorMask mask;
    Recording rec;
    if (!data_dir.empty()) {
        rec = io::load_recording(data_dir, &mask);
        if (mask.eps == 0.0) mask.eps = cfg.eps;
    } else {
        const RealField truth = make_phantom(cfg.phantom, grid);
        TrajectorySampling sampling;
        sampling.cells = ring_band_cells(grid, cfg.R, cfg.eps);
        const Trajectory traj = solve_forward(truth, cfg.T, cfg.dt, sampling);
        mask = initial_sensor_mask(cfg, geom, grid);
        rec = record(traj, mask);
        add_noise(rec, cfg.noise_level, Rng::derive(cfg.seed, 0xA05E));
    }

    ReconParams params;
    params.gamma = cfg.gamma;
    params.eta = cfg.eta;
    params.outer_iters = cfg.stage1_iters;
    params.prox_iters = cfg.prox_iters;
    params.prox_tau = cfg.prox_tau;
    params.use_fista = cfg.fista;
    params.apply_projection = cfg.project;
    params.K_mask = ball_mask(grid, cfg.phantom.K_radius);

    const ReconResult res = reconstruct(rec, mask, params, cfg.T, cfg.dt);
    io::write_tatf1(cfg.out_dir + "/recon.tatf", res.p0);
    io::write_pgm(cfg.out_dir + "/recon.pgm", res.p0);
    io::write_recon_log(cfg.out_dir + "/recon_log.csv", res.log);
    std::cout << "reconstruction finished: J0 " << res.log.front().J0 << " -> " << res.log.back().J0 << "\n";
    return 0;
}

int cmd_place(const CommonOpts& opts, const std::string& field_path) {
    const PipelineConfig cfg = load_config(opts);
    std::filesystem::create_directories(cfg.out_dir);
    const Grid2D grid = make_grid(cfg.D, cfg.M);
    const BoundaryGeometry geom = BoundaryGeometry::circle(cfg.R, cfg.boundary_samples);

    RealField source = field_path.empty() ? make_phantom(cfg.phantom, grid) : io::read_tatf1(field_path);
    if (!(source.grid == grid)) throw std::runtime_error("place: field grid does not match the config grid");

    TrajectorySampling sampling;
    sampling.pressure = false;
    sampling.velocity = true;
    sampling.cells = ring_band_cells(grid, cfg.R, cfg.eps);
    const Trajectory traj = solve_forward(source, cfg.T, cfg.dt, sampling);
    const PsiMode mode = cfg.psi_mode == "volumetric" ? PsiMode::volumetric : PsiMode::boundary;
    const BoundaryProfile psi = compute_psi(traj, geom, grid, mode, cfg.eps);
    io::write_profile(cfg.out_dir + "/psi.csv", psi, geom);

    nlohmann::ordered_json summary;
    if (cfg.placement_mode == "threshold") {
        const auto [ind, lambda] = place_threshold(psi, cfg.L, geom);
        io::write_intervals(cfg.out_dir + "/sensors.csv", indicator_intervals(ind, geom));
        summary["lambda"] = lambda;
        summary["a2"] = a2_functional(psi, ind, geom, source);
        summary["measure"] = indicator_measure(ind, geom);
    } else {
        const double ell = cfg.ell > 0.0 ? cfg.ell : cfg.L * geom.perimeter() / cfg.N0;
        const GAResult ga = place_ga(psi, geom, cfg.N0, ell, cfg.ga, Rng::derive(cfg.seed, 0x6A01));
        io::write_arcs(cfg.out_dir + "/sensors.csv", ga.arcs);
        summary["objective"] = ga.objective;
        summary["a2"] = a2_functional(psi, ga.arcs, geom, source);
        summary["ell"] = ell;
    }
    io::atomic_write(cfg.out_dir + "/place.json", summary.dump(2) + "\n");
    std::cout << "placement written to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_pipeline(const CommonOpts& opts, int alternate) {
    PipelineConfig cfg = load_config(opts);
    if (alternate > 0) cfg.alternate = alternate;
    const PipelineReport report = run_pipeline(cfg);
    std::cout << "pipeline finished\n";
    std::cout << "  time-reversal baseline error: " << report.tr_baseline_error << "\n";
    if (report.stage1_error >= 0.0) std::cout << "  stage-1 error: " << report.stage1_error << "\n";
    for (size_t r = 0; r < report.round_errors.size(); ++r)
        std::cout << "  round " << r + 1 << " error: " << report.round_errors[r] << "\n";
    std::cout << "  report: " << report.report_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acoustic source reconstruction with optimized sensor placement"};
    app.require_subcommand(1);

    CommonOpts sim_opts, rec_opts, place_opts, pipe_opts;
    std::string data_dir, field_path;
    int alternate = 0;

    CLI::App* sim = app.add_subcommand("simulate", "generate a phantom and record sensor data");
    add_common(sim, sim_opts);
    CLI::App* rec = app.add_subcommand("reconstruct", "reconstruct the source from recorded data");
    add_common(rec, rec_opts);
    rec->add_option("--data", data_dir, "recording directory from 'simulate' (defaults to an internal simulation)");
    CLI::App* place = app.add_subcommand("place", "compute psi and an optimized sensor set");
    add_common(place, place_opts);
    place->add_option("--field", field_path, "TATF1 source field (defaults to the config phantom)");
    CLI::App* pipe = app.add_subcommand("pipeline", "run the full two-step strategy");
    add_common(pipe, pipe_opts);
    pipe->add_option("--alternate", alternate, "number of placement/reconstruction rounds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (rec->parsed()) return cmd_reconstruct(rec_opts, data_dir);
        if (place->parsed()) return cmd_place(place_opts, field_path);
        if (pipe->parsed()) return cmd_pipeline(pipe_opts, alternate);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
