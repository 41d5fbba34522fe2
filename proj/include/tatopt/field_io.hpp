#pragma once

#include <string>

#include "tatopt/grid.hpp"

namespace tatopt::io {

// TATF1 field file: ASCII header "TATF1 <M> <M> <D>\n" followed by M*M
// binary64 little-endian values, row-major.
void write_tatf1(const std::string& path, const RealField& f);
RealField read_tatf1(const std::string& path);

/// 8-bit binary PGM, min-max scaled.
void write_pgm(const std::string& path, const RealField& f);

// All writers go through a temp file and rename, so partial files never
// appear under the final name.
void atomic_write(const std::string& path, const std::string& bytes);

}  // namespace tatopt::io
