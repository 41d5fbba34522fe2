#pragma once

#include <string>
#include <vector>

#include "tatopt/grid.hpp"

namespace tatopt {

struct PhantomPrimitive {
    enum class Kind { disk, ellipse, annulus } kind = Kind::disk;
    double cx = 0.0, cy = 0.0;
    double r1 = 0.0, r2 = 0.0;  ///< disk: r1; ellipse: rx, ry; annulus: r_in, r_out
    double rotation = 0.0;      ///< ellipse only
    double intensity = 1.0;
};

struct PhantomSpec {
    std::vector<PhantomPrimitive> primitives;
    bool antialias = true;      ///< one-cell linear edge ramp
    double K_radius = 0.85;     ///< all primitives must stay inside this ball
};

/// Sum of primitive indicator fields; rejects primitives escaping K.
RealField make_phantom(const PhantomSpec& spec, const Grid2D& grid);

/// 0/1 field marking |x| <= radius
RealField ball_mask(const Grid2D& grid, double radius);

/// Named phantoms used by the experiments: "offset-disk", "two-disks",
/// "annulus".
PhantomSpec stock_phantom(const std::string& name);

/// "disk cx cy r i" | "ellipse cx cy rx ry rot i" | "annulus cx cy rin rout i"
PhantomPrimitive parse_primitive(const std::string& line);

}  // namespace tatopt
