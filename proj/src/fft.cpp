#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

#include "tatopt/grid.hpp"

namespace tatopt {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// Plan creation is not thread safe in FFTW; executing a cached plan on a new
// array is.  Plans are created with FFTW_UNALIGNED so any buffer qualifies,
// and FFTW_ESTIMATE keeps planning deterministic across runs.
PlanPair plans_for(int M) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> tmp(static_cast<size_t>(M) * M);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    PlanPair pp;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pp.fwd = fftw_plan_dft_2d(M, M, p, p, FFTW_FORWARD, flags);
    pp.bwd = fftw_plan_dft_2d(M, M, p, p, FFTW_BACKWARD, flags);
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(M, pp);
    return pp;
}

}  // namespace

void dft2d(std::vector<std::complex<double>>& data, int M, bool forward) {
    if (static_cast<int>(data.size()) != M * M) throw std::invalid_argument("dft2d: buffer size mismatch");
    PlanPair pp = plans_for(M);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward ? pp.fwd : pp.bwd, p, p);
    if (!forward) {
        const double s = 1.0 / (static_cast<double>(M) * M);
        for (auto& z : data) z *= s;
    }
}

SpectralField fft_forward(const RealField& f) {
    SpectralField F(f.grid);
    for (size_t i = 0; i < f.values.size(); ++i) F.coeffs[i] = f.values[i];
    dft2d(F.coeffs, f.grid.M, true);
    return F;
}

RealField fft_inverse(const SpectralField& F) {
    std::vector<std::complex<double>> buf = F.coeffs;
    dft2d(buf, F.grid.M, false);
    RealField f(F.grid);
    for (size_t i = 0; i < buf.size(); ++i) f.values[i] = buf[i].real();
    return f;
}

}  // namespace tatopt
