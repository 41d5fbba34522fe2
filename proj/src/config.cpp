#include "tatopt/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tatopt {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
    if (pos != v.size()) throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    const int i = static_cast<int>(x);
    if (x != i) throw std::invalid_argument("config: expected integer for " + key);
    return i;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: expected boolean for " + key);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

}  // namespace

PipelineConfig PipelineConfig::from_string(const std::string& text) {
    PipelineConfig cfg;
    bool phantom_given = false;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "time" && section != "geometry" && section != "sensors" &&
                section != "phantom" && section != "recon" && section != "placement" && section != "noise" &&
                section != "run")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value at line " + std::to_string(lineno));

        const std::string qual = section + "." + key;
        if (qual == "grid.D") cfg.D = to_double(qual, value);
        else if (qual == "grid.M") cfg.M = to_int(qual, value);
        else if (qual == "time.T") cfg.T = to_double(qual, value);
        else if (qual == "time.dt") cfg.dt = to_double(qual, value);
        else if (qual == "geometry.R") cfg.R = to_double(qual, value);
        else if (qual == "geometry.eps") cfg.eps = to_double(qual, value);
        else if (qual == "geometry.boundary_samples") cfg.boundary_samples = to_int(qual, value);
        else if (qual == "sensors.L") cfg.L = to_double(qual, value);
        else if (qual == "sensors.init") cfg.init = value;
        else if (qual == "sensors.init_count") cfg.init_count = to_int(qual, value);
        else if (qual == "sensors.init_starts") cfg.init_starts = to_list(qual, value);
        else if (section == "phantom" && key.rfind("shape", 0) == 0) {
            cfg.phantom.primitives.push_back(parse_primitive(value));
            phantom_given = true;
        } else if (qual == "phantom.stock") {
            cfg.phantom = stock_phantom(value);
            phantom_given = true;
        } else if (qual == "phantom.antialias") cfg.phantom.antialias = to_bool(qual, value);
        else if (qual == "phantom.K_radius") cfg.phantom.K_radius = to_double(qual, value);
        else if (qual == "recon.gamma") cfg.gamma = to_double(qual, value);
        else if (qual == "recon.eta") cfg.eta = to_double(qual, value);
        else if (qual == "recon.stage1_iters") cfg.stage1_iters = to_int(qual, value);
        else if (qual == "recon.stage2_iters") cfg.stage2_iters = to_int(qual, value);
        else if (qual == "recon.prox_iters") cfg.prox_iters = to_int(qual, value);
        else if (qual == "recon.prox_tau") cfg.prox_tau = to_double(qual, value);
        else if (qual == "recon.fista") cfg.fista = to_bool(qual, value);
        else if (qual == "recon.project") cfg.project = to_bool(qual, value);
        else if (qual == "placement.mode") cfg.placement_mode = value;
        else if (qual == "placement.N0") cfg.N0 = to_int(qual, value);
        else if (qual == "placement.ell") cfg.ell = to_double(qual, value);
        else if (qual == "placement.population") cfg.ga.population = to_int(qual, value);
        else if (qual == "placement.generations") cfg.ga.generations = to_int(qual, value);
        else if (qual == "placement.tournament") cfg.ga.tournament = to_int(qual, value);
        else if (qual == "placement.crossover_rate") cfg.ga.crossover_rate = to_double(qual, value);
        else if (qual == "placement.mutation_sigma_frac") cfg.ga.mutation_sigma_frac = to_double(qual, value);
        else if (qual == "placement.mutation_decay") cfg.ga.mutation_decay = to_double(qual, value);
        else if (qual == "placement.elitism") cfg.ga.elites = to_int(qual, value);
        else if (qual == "placement.psi_mode") cfg.psi_mode = value;
        else if (qual == "placement.oracle_psi") cfg.oracle_psi = to_bool(qual, value);
        else if (qual == "noise.level") cfg.noise_level = to_double(qual, value);
        else if (qual == "run.seed") cfg.seed = static_cast<std::uint64_t>(to_double(qual, value));
        else if (qual == "run.out") cfg.out_dir = value;
        else if (qual == "run.alternate") cfg.alternate = to_int(qual, value);
        else throw std::invalid_argument("config: unknown key '" + key + "' in section [" + section + "]");
    }
    if (!phantom_given) cfg.phantom = stock_phantom("offset-disk");
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

void PipelineConfig::validate() const {
    if (!(D > 0.0) || M < 2 || M % 2 != 0) throw std::invalid_argument("config: bad grid (D > 0, M even >= 2)");
    time_steps(T, dt);
    if (!(R > 0.0) || !(eps > 0.0)) throw std::invalid_argument("config: bad geometry (R, eps > 0)");
    if (R + eps >= 0.5 * D) throw std::invalid_argument("config: sensor ring does not fit inside the box");
    if (!(L > 0.0 && L < 1.0)) throw std::invalid_argument("config: L must lie in (0,1)");
    if (init != "arc" && init != "arcs" && init != "full") throw std::invalid_argument("config: sensors.init must be arc|arcs|full");
    if (init_count < 1) throw std::invalid_argument("config: init_count must be >= 1");
    if (!(gamma > 0.0) || !(eta > 0.0)) throw std::invalid_argument("config: gamma and eta must be positive");
    if (stage1_iters < 1 || stage2_iters < 1) throw std::invalid_argument("config: stage iterations must be >= 1");
    if (placement_mode != "threshold" && placement_mode != "ga")
        throw std::invalid_argument("config: placement.mode must be threshold|ga");
    if (psi_mode != "boundary" && psi_mode != "volumetric")
        throw std::invalid_argument("config: placement.psi_mode must be boundary|volumetric");
    if (N0 < 1) throw std::invalid_argument("config: placement.N0 must be >= 1");
    if (noise_level < 0.0) throw std::invalid_argument("config: noise level must be >= 0");
    if (alternate < 1) throw std::invalid_argument("config: alternate must be >= 1");
    if (phantom.K_radius >= R) throw std::invalid_argument("config: K must stay inside the body (K_radius < R)");
}

}  // namespace tatopt
