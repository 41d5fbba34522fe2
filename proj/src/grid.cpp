#include "tatopt/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tatopt {

double Grid2D::omega(int i1, int i2) const {
    const double n1 = mode(i1);
    const double n2 = mode(i2);
    return 2.0 * M_PI * std::sqrt(n1 * n1 + n2 * n2) / D;
}

Grid2D make_grid(double D, int M) {
    if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("make_grid: D must be positive");
    if (M < 2 || M % 2 != 0) throw std::invalid_argument("make_grid: M must be even and >= 2");
    Grid2D g;
    g.D = D;
    g.M = M;
    g.h = D / M;
    return g;
}

double linf_norm(const RealField& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const RealField& a) {
    double s = 0.0;
    for (double v : a.values) s += v * v;
    return std::sqrt(a.grid.h * a.grid.h * s);
}

double rel_l2_error(const RealField& a, const RealField& ref) {
    if (!(a.grid == ref.grid)) throw std::invalid_argument("rel_l2_error: grid mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - ref.values[i];
        num += d * d;
        den += ref.values[i] * ref.values[i];
    }
    if (den == 0.0) throw std::invalid_argument("rel_l2_error: zero reference field");
    return std::sqrt(num / den);
}

void check_finite(const RealField& f, const char* what) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace tatopt
