#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tatopt/phantom.hpp"
#include "tatopt/placement.hpp"

namespace tatopt {

/// Full experiment configuration.  Parsed from INI-style text: [section]
/// headers, key = value pairs, '#' comments; unknown sections or keys are
/// errors.  Defaults follow the reference experiments.
struct PipelineConfig {
    // [grid]
    double D = 4.0;
    int M = 512;
    // [time]
    double T = 2.0;
    double dt = 2.0 / 1024.0;
    // [geometry]
    double R = 1.0;
    double eps = 0.03;
    int boundary_samples = 1024;
    // [sensors]
    double L = 0.3;
    std::string init = "arc";          ///< "arc" (contiguous, measure L), "arcs", "full"
    int init_count = 1;                ///< arc count for init = arcs
    std::vector<double> init_starts;   ///< optional explicit start angles
    // [phantom]
    PhantomSpec phantom;
    // [recon]
    double gamma = 0.01;
    double eta = 0.5;
    int stage1_iters = 30;
    int stage2_iters = 20;
    int prox_iters = 50;
    double prox_tau = 0.125;
    bool fista = true;
    bool project = true;
    // [placement]
    std::string placement_mode = "threshold";  ///< "threshold" | "ga"
    int N0 = 38;
    double ell = 0.0;  ///< 0 = derive L*perimeter/N0
    GAParams ga;
    std::string psi_mode = "boundary";  ///< "boundary" | "volumetric"
    bool oracle_psi = false;            ///< compute psi from the true phantom
    // [noise]
    double noise_level = 0.0;
    // [run]
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int alternate = 1;  ///< placement/reconstruction rounds

    static PipelineConfig from_string(const std::string& text);
    static PipelineConfig from_file(const std::string& path);
    void validate() const;
};

}  // namespace tatopt
