#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace tatopt {

double wrap_angle(double theta);  ///< into [0, 2*pi)

/// Integral table for a periodic function sampled on a uniform angle grid;
/// integrals are exact for the piecewise-linear interpolant.
class PeriodicCumulative {
public:
    explicit PeriodicCumulative(std::vector<double> samples);

    double total() const { return cum_.back(); }
    double value(double theta) const;  ///< linear interpolation
    /// integral from a to b, b >= a (may span several turns)
    double integral(double a, double b) const;
    /// integral going counterclockwise from a to b (wraps)
    double integral_ccw(double a, double b) const;
    /// smallest d >= 0 with integral(a, a+d) == target, by bisection;
    /// requires a nonnegative integrand and target < total
    double advance(double a, double target) const;

private:
    double antiderivative(double theta) const;  // on [0, 2*pi)
    int B_ = 0;
    double dtheta_ = 0.0;
    std::vector<double> g_;
    std::vector<double> cum_;
};

/** Star-shaped boundary in polar form r = rho(theta), sampled on a uniform
 *  B-point angle grid.  Defaults model the unit circle. */
class BoundaryGeometry {
public:
    static BoundaryGeometry circle(double R = 1.0, int B = 1024);
    static BoundaryGeometry from_polar(const std::function<double(double)>& rho,
                                       const std::function<double(double)>& rho_prime, int B = 1024);

    int samples() const { return B_; }
    double theta_at(int b) const;
    double rho(double theta) const;
    double rho_prime(double theta) const;
    /// sqrt(rho^2 + rho'^2)
    double speed(double theta) const;
    double speed_at(int b) const;
    double perimeter() const { return speed_cum_.total(); }
    bool constant_speed() const { return constant_speed_; }
    const PeriodicCumulative& speed_table() const { return speed_cum_; }

    std::array<double, 2> point(double theta) const;
    std::array<double, 2> outward_normal(double theta) const;

    /// arc length going counterclockwise from angle a to angle b
    double arc_length(double a, double b) const;
    /// angle reached from a after arc length ell (returned unwrapped in
    /// [a, a + 2*pi)); requires 0 <= ell < perimeter
    double arc_advance(double a, double ell) const;

private:
    BoundaryGeometry(std::vector<double> rho, std::vector<double> rho_prime);
    int B_;
    double dtheta_;
    std::vector<double> rho_, rho_prime_, speed_;
    PeriodicCumulative speed_cum_;
    bool constant_speed_ = false;
};

/// Gamma as N0 arcs of common arc length ell; theta_hat = end angles,
/// unwrapped relative to the matching start.
struct SensorArcs {
    double ell = 0.0;
    std::vector<double> theta;
    std::vector<double> theta_hat;

    int count() const { return static_cast<int>(theta.size()); }
    bool contains(double angle) const;
};

/// Gamma as one flag per boundary sample.
struct SensorIndicator {
    std::vector<std::uint8_t> active;

    int samples() const { return static_cast<int>(active.size()); }
    bool contains_sample(int b) const { return active[static_cast<size_t>(b)] != 0; }
};

SensorIndicator full_indicator(int B);
double indicator_measure(const SensorIndicator& ind, const BoundaryGeometry& geom);
/// maximal runs of consecutive active samples, as (theta_start, theta_end)
std::vector<std::array<double, 2>> indicator_intervals(const SensorIndicator& ind, const BoundaryGeometry& geom);

/// Builds arcs from start angles, validating the >= ell spacing (wraparound
/// included) and N0*ell < perimeter.
SensorArcs make_sensor_arcs(const BoundaryGeometry& geom, std::vector<double> starts, double ell);

}  // namespace tatopt
