#pragma once

#include <complex>
#include <vector>

namespace tatopt {

/** Uniform periodic grid on the square box [-D/2, D/2)^2.
 *
 * Nodes sit at x_n = (n1*h - D/2, n2*h - D/2) for n1, n2 in {0,...,M-1},
 * so node (M/2, M/2) is the origin.  Fourier bin i carries the signed mode
 * index n = i for i < M/2 and n = i - M otherwise, with frequency xi = n/D.
 */
struct Grid2D {
    double D = 0.0;  ///< box side length
    int M = 0;       ///< samples per axis (even, >= 2)
    double h = 0.0;  ///< grid spacing D/M

    int size() const { return M * M; }
    double coord(int i) const { return i * h - 0.5 * D; }
    int mode(int i) const { return i < M / 2 ? i : i - M; }
    double freq(int i) const { return mode(i) / D; }
    /// omega_n = 2*pi*|xi_n| for the bin pair (i1, i2)
    double omega(int i1, int i2) const;

    bool operator==(const Grid2D&) const = default;
};

/// Validates D > 0 and M even >= 2.
Grid2D make_grid(double D, int M);

/// Scalar field sampled on the grid, row-major: values[i1*M + i2].
struct RealField {
    Grid2D grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const Grid2D& g) : grid(g), values(static_cast<size_t>(g.size()), 0.0) {}
    double& at(int i1, int i2) { return values[static_cast<size_t>(i1) * grid.M + i2]; }
    double at(int i1, int i2) const { return values[static_cast<size_t>(i1) * grid.M + i2]; }
};

struct SpectralField {
    Grid2D grid;
    std::vector<std::complex<double>> coeffs;  // same layout as RealField

    SpectralField() = default;
    explicit SpectralField(const Grid2D& g) : grid(g), coeffs(static_cast<size_t>(g.size())) {}
};

// Unnormalized forward DFT; the inverse carries the 1/M^2 factor, so
// fft_inverse(fft_forward(f)) == f and a constant field kappa transforms to
// c_(0,0) = kappa * M^2.
SpectralField fft_forward(const RealField& f);
RealField fft_inverse(const SpectralField& F);

/// In-place 2D complex DFT on an M*M row-major buffer.  The backward
/// direction includes the 1/M^2 normalization.
void dft2d(std::vector<std::complex<double>>& data, int M, bool forward);

double linf_norm(const RealField& a);
double l2_norm(const RealField& a);  ///< sqrt(h^2 * sum a^2)
double rel_l2_error(const RealField& a, const RealField& ref);
void check_finite(const RealField& f, const char* what);

}  // namespace tatopt
