#include "tatopt/phantom.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tatopt {

namespace {

double outer_extent(const PhantomPrimitive& p) {
    switch (p.kind) {
        case PhantomPrimitive::Kind::disk: return p.r1;
        case PhantomPrimitive::Kind::ellipse: return std::max(p.r1, p.r2);
        case PhantomPrimitive::Kind::annulus: return p.r2;
    }
    return 0.0;
}

// signed inside-distance (>= 0 inside), approximate for ellipses
double inside_distance(const PhantomPrimitive& p, double x, double y) {
    const double dx = x - p.cx, dy = y - p.cy;
    switch (p.kind) {
        case PhantomPrimitive::Kind::disk: return p.r1 - std::hypot(dx, dy);
        case PhantomPrimitive::Kind::ellipse: {
            const double cs = std::cos(p.rotation), sn = std::sin(p.rotation);
            const double ex = cs * dx + sn * dy;
            const double ey = -sn * dx + cs * dy;
            const double f = std::sqrt((ex / p.r1) * (ex / p.r1) + (ey / p.r2) * (ey / p.r2));
            return (1.0 - f) * std::min(p.r1, p.r2);
        }
        case PhantomPrimitive::Kind::annulus: {
            const double r = std::hypot(dx, dy);
            return std::min(p.r2 - r, r - p.r1);
        }
    }
    return -1.0;
}

}  // namespace

RealField make_phantom(const PhantomSpec& spec, const Grid2D& grid) {
    const double margin = spec.antialias ? 0.5 * grid.h : 0.0;
    for (const auto& p : spec.primitives) {
        if (!(p.intensity >= 0.0)) throw std::invalid_argument("make_phantom: intensity must be >= 0");
        if (p.kind == PhantomPrimitive::Kind::annulus && !(p.r1 < p.r2))
            throw std::invalid_argument("make_phantom: annulus needs r_in < r_out");
        const double reach = std::hypot(p.cx, p.cy) + outer_extent(p) + margin;
        if (reach > spec.K_radius + 1e-12)
            throw std::invalid_argument("make_phantom: primitive escapes the support ball K");
    }

    RealField f(grid);
    for (int i1 = 0; i1 < grid.M; ++i1) {
        const double x = grid.coord(i1);
        for (int i2 = 0; i2 < grid.M; ++i2) {
            const double y = grid.coord(i2);
            double v = 0.0;
            for (const auto& p : spec.primitives) {
                const double d = inside_distance(p, x, y);
                if (spec.antialias) {
                    const double t = std::clamp(0.5 + d / grid.h, 0.0, 1.0);
                    v += p.intensity * t;
                } else if (d >= 0.0) {
                    v += p.intensity;
                }
            }
            f.at(i1, i2) = v;
        }
    }
    return f;
}

RealField ball_mask(const Grid2D& grid, double radius) {
    RealField f(grid);
    for (int i1 = 0; i1 < grid.M; ++i1)
        for (int i2 = 0; i2 < grid.M; ++i2)
            f.at(i1, i2) = std::hypot(grid.coord(i1), grid.coord(i2)) <= radius ? 1.0 : 0.0;
    return f;
}

PhantomSpec stock_phantom(const std::string& name) {
    PhantomSpec spec;
    using K = PhantomPrimitive::Kind;
    if (name == "offset-disk") {
        spec.primitives = {{K::disk, -0.35, 0.10, 0.30, 0.0, 0.0, 2.0}};
    } else if (name == "two-disks") {
        spec.primitives = {{K::disk, -0.30, -0.25, 0.22, 0.0, 0.0, 2.0},
                           {K::disk, 0.30, 0.30, 0.15, 0.0, 0.0, 1.5}};
    } else if (name == "annulus") {
        spec.primitives = {{K::annulus, 0.10, -0.10, 0.25, 0.40, 0.0, 1.5},
                           {K::disk, 0.10, -0.10, 0.10, 0.0, 0.0, 2.0}};
    } else {
        throw std::invalid_argument("unknown stock phantom: " + name);
    }
    return spec;
}

PhantomPrimitive parse_primitive(const std::string& line) {
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    PhantomPrimitive p;
    if (kind == "disk") {
        p.kind = PhantomPrimitive::Kind::disk;
        in >> p.cx >> p.cy >> p.r1 >> p.intensity;
    } else if (kind == "ellipse") {
        p.kind = PhantomPrimitive::Kind::ellipse;
        in >> p.cx >> p.cy >> p.r1 >> p.r2 >> p.rotation >> p.intensity;
    } else if (kind == "annulus") {
        p.kind = PhantomPrimitive::Kind::annulus;
        in >> p.cx >> p.cy >> p.r1 >> p.r2 >> p.intensity;
    } else {
        throw std::invalid_argument("unknown phantom primitive: " + kind);
    }
    if (in.fail()) throw std::invalid_argument("malformed phantom primitive: " + line);
    return p;
}

}  // namespace tatopt
