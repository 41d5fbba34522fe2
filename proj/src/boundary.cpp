#include "tatopt/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tatopt {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t == kTwoPi ? 0.0 : t;
}

PeriodicCumulative::PeriodicCumulative(std::vector<double> samples) : g_(std::move(samples)) {
    B_ = static_cast<int>(g_.size());
    if (B_ < 4) throw std::invalid_argument("PeriodicCumulative: need at least 4 samples");
    dtheta_ = kTwoPi / B_;
    cum_.resize(static_cast<size_t>(B_) + 1);
    cum_[0] = 0.0;
    for (int i = 0; i < B_; ++i) {
        const double gr = g_[static_cast<size_t>((i + 1) % B_)];
        cum_[static_cast<size_t>(i) + 1] = cum_[static_cast<size_t>(i)] + 0.5 * dtheta_ * (g_[static_cast<size_t>(i)] + gr);
    }
}

double PeriodicCumulative::value(double theta) const {
    const double t = wrap_angle(theta) / dtheta_;
    const int i = std::min(static_cast<int>(t), B_ - 1);
    const double frac = t - i;
    const double gl = g_[static_cast<size_t>(i)];
    const double gr = g_[static_cast<size_t>((i + 1) % B_)];
    return gl + frac * (gr - gl);
}

double PeriodicCumulative::antiderivative(double theta) const {
    const double t = theta / dtheta_;
    const int i = std::min(static_cast<int>(t), B_ - 1);
    const double frac = t - i;
    const double gl = g_[static_cast<size_t>(i)];
    const double gr = g_[static_cast<size_t>((i + 1) % B_)];
    const double gmid = gl + frac * (gr - gl);
    return cum_[static_cast<size_t>(i)] + 0.5 * frac * dtheta_ * (gl + gmid);
}

double PeriodicCumulative::integral(double a, double b) const {
    if (b < a) throw std::invalid_argument("PeriodicCumulative::integral: b < a");
    const double turns_a = std::floor(a / kTwoPi);
    const double turns_b = std::floor(b / kTwoPi);
    const double Ga = turns_a * total() + antiderivative(a - turns_a * kTwoPi);
    const double Gb = turns_b * total() + antiderivative(b - turns_b * kTwoPi);
    return Gb - Ga;
}

double PeriodicCumulative::integral_ccw(double a, double b) const {
    const double aw = wrap_angle(a);
    double bw = wrap_angle(b);
    if (bw < aw) bw += kTwoPi;
    return integral(aw, bw);
}

double PeriodicCumulative::advance(double a, double target) const {
    if (target < 0.0 || target >= total()) throw std::invalid_argument("PeriodicCumulative::advance: target out of range");
    if (target == 0.0) return 0.0;
    double lo = 0.0, hi = kTwoPi;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integral(a, a + mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

BoundaryGeometry::BoundaryGeometry(std::vector<double> rho, std::vector<double> rho_prime)
    : B_(static_cast<int>(rho.size())),
      dtheta_(kTwoPi / static_cast<double>(rho.size())),
      rho_(std::move(rho)),
      rho_prime_(std::move(rho_prime)),
      speed_(),
      speed_cum_({0, 0, 0, 0}) {
    if (B_ < 8) throw std::invalid_argument("BoundaryGeometry: need at least 8 samples");
    speed_.resize(static_cast<size_t>(B_));
    double rho_min = rho_[0];
    for (int b = 0; b < B_; ++b) {
        rho_min = std::min(rho_min, rho_[static_cast<size_t>(b)]);
        speed_[static_cast<size_t>(b)] =
            std::hypot(rho_[static_cast<size_t>(b)], rho_prime_[static_cast<size_t>(b)]);
    }
    if (!(rho_min > 0.0)) throw std::invalid_argument("BoundaryGeometry: rho must be positive");
    speed_cum_ = PeriodicCumulative(speed_);
    constant_speed_ = true;
    for (double s : speed_)
        if (s != speed_[0]) {
            constant_speed_ = false;
            break;
        }
}

BoundaryGeometry BoundaryGeometry::circle(double R, int B) {
    if (!(R > 0.0)) throw std::invalid_argument("BoundaryGeometry::circle: R must be positive");
    return BoundaryGeometry(std::vector<double>(static_cast<size_t>(B), R),
                            std::vector<double>(static_cast<size_t>(B), 0.0));
}

BoundaryGeometry BoundaryGeometry::from_polar(const std::function<double(double)>& rho,
                                              const std::function<double(double)>& rho_prime, int B) {
    std::vector<double> r(static_cast<size_t>(B)), rp(static_cast<size_t>(B));
    for (int b = 0; b < B; ++b) {
        const double th = kTwoPi * b / B;
        r[static_cast<size_t>(b)] = rho(th);
        rp[static_cast<size_t>(b)] = rho_prime(th);
    }
    return BoundaryGeometry(std::move(r), std::move(rp));
}

double BoundaryGeometry::theta_at(int b) const { return dtheta_ * b; }

namespace {
double interp_periodic(const std::vector<double>& v, double theta) {
    const int B = static_cast<int>(v.size());
    const double t = wrap_angle(theta) * B / kTwoPi;
    const int i = std::min(static_cast<int>(t), B - 1);
    const double frac = t - i;
    return v[static_cast<size_t>(i)] + frac * (v[static_cast<size_t>((i + 1) % B)] - v[static_cast<size_t>(i)]);
}
}  // namespace

double BoundaryGeometry::rho(double theta) const { return interp_periodic(rho_, theta); }
double BoundaryGeometry::rho_prime(double theta) const { return interp_periodic(rho_prime_, theta); }
double BoundaryGeometry::speed(double theta) const { return interp_periodic(speed_, theta); }
double BoundaryGeometry::speed_at(int b) const { return speed_[static_cast<size_t>(b)]; }

std::array<double, 2> BoundaryGeometry::point(double theta) const {
    const double r = rho(theta);
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::array<double, 2> BoundaryGeometry::outward_normal(double theta) const {
    // tangent of theta -> rho(theta)(cos, sin), rotated clockwise
    const double r = rho(theta);
    const double rp = rho_prime(theta);
    const double tx = rp * std::cos(theta) - r * std::sin(theta);
    const double ty = rp * std::sin(theta) + r * std::cos(theta);
    const double n = std::hypot(tx, ty);
    return {ty / n, -tx / n};
}

double BoundaryGeometry::arc_length(double a, double b) const {
    if (constant_speed_) return wrap_angle(b - a) * speed_[0];
    return speed_cum_.integral_ccw(a, b);
}

double BoundaryGeometry::arc_advance(double a, double ell) const {
    if (ell < 0.0 || ell >= perimeter()) throw std::invalid_argument("arc_advance: need 0 <= ell < perimeter");
    if (constant_speed_) return a + ell / speed_[0];
    return a + speed_cum_.advance(wrap_angle(a), ell);
}

bool SensorArcs::contains(double angle) const {
    for (size_t n = 0; n < theta.size(); ++n) {
        const double width = theta_hat[n] - theta[n];
        if (wrap_angle(angle - theta[n]) <= width) return true;
    }
    return false;
}

SensorIndicator full_indicator(int B) {
    SensorIndicator ind;
    ind.active.assign(static_cast<size_t>(B), 1);
    return ind;
}

double indicator_measure(const SensorIndicator& ind, const BoundaryGeometry& geom) {
    if (ind.samples() != geom.samples()) throw std::invalid_argument("indicator_measure: sample count mismatch");
    const double dtheta = kTwoPi / geom.samples();
    double m = 0.0;
    for (int b = 0; b < ind.samples(); ++b)
        if (ind.contains_sample(b)) m += geom.speed_at(b) * dtheta;
    return m;
}

std::vector<std::array<double, 2>> indicator_intervals(const SensorIndicator& ind, const BoundaryGeometry& geom) {
    const int B = ind.samples();
    std::vector<std::array<double, 2>> runs;
    int b = 0;
    // start scanning at an inactive sample so runs never split across 0
    int start_scan = 0;
    while (start_scan < B && ind.contains_sample(start_scan)) ++start_scan;
    if (start_scan == B) return {{0.0, kTwoPi}};
    for (int off = 0; off < B; ++off) {
        b = (start_scan + off) % B;
        if (!ind.contains_sample(b)) continue;
        // extend the run
        int len = 1;
        while (len < B && ind.contains_sample((b + len) % B)) ++len;
        runs.push_back({geom.theta_at(b), geom.theta_at(b) + len * (kTwoPi / B)});
        off += len - 1;
    }
    return runs;
}

SensorArcs make_sensor_arcs(const BoundaryGeometry& geom, std::vector<double> starts, double ell) {
    const int N0 = static_cast<int>(starts.size());
    if (N0 < 1) throw std::invalid_argument("make_sensor_arcs: need at least one arc");
    if (!(ell >= 0.0) || N0 * ell >= geom.perimeter())
        throw std::invalid_argument("make_sensor_arcs: need N0*ell < perimeter");
    for (double& s : starts) s = wrap_angle(s);
    std::sort(starts.begin(), starts.end());
    SensorArcs arcs;
    arcs.ell = ell;
    arcs.theta = starts;
    arcs.theta_hat.resize(starts.size());
    for (int n = 0; n < N0; ++n) arcs.theta_hat[static_cast<size_t>(n)] = geom.arc_advance(starts[static_cast<size_t>(n)], ell);
    for (int n = 0; n < N0 && N0 > 1; ++n) {
        const double next = starts[static_cast<size_t>((n + 1) % N0)];
        const double gap = geom.arc_length(starts[static_cast<size_t>(n)], next);
        if (gap < ell - 1e-9 * geom.perimeter())
            throw std::invalid_argument("make_sensor_arcs: arcs overlap (spacing < ell)");
    }
    return arcs;
}

}  // namespace tatopt
