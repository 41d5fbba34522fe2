#include "tatopt/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little, "TATF1 I/O assumes a little-endian host");

namespace tatopt::io {

void atomic_write(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void write_tatf1(const std::string& path, const RealField& f) {
    char header[96];
    const int n = std::snprintf(header, sizeof(header), "TATF1 %d %d %.17g\n", f.grid.M, f.grid.M, f.grid.D);
    std::string bytes(header, static_cast<size_t>(n));
    bytes.append(reinterpret_cast<const char*>(f.values.data()), f.values.size() * sizeof(double));
    atomic_write(path, bytes);
}

RealField read_tatf1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("truncated TATF1 header: " + path);

    char magic[16];
    int m1 = 0, m2 = 0;
    double D = 0.0;
    if (std::sscanf(header.c_str(), "%15s %d %d %lf", magic, &m1, &m2, &D) != 4 || std::strcmp(magic, "TATF1") != 0)
        throw std::runtime_error("bad TATF1 header: " + path);
    if (m1 != m2) throw std::runtime_error("TATF1 grid must be square: " + path);

    RealField f(make_grid(D, m1));
    in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != f.values.size() * sizeof(double))
        throw std::runtime_error("truncated TATF1 payload: " + path);
    check_finite(f, "read_tatf1");
    return f;
}

void write_pgm(const std::string& path, const RealField& f) {
    double lo = f.values.empty() ? 0.0 : f.values[0];
    double hi = lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;

    char header[64];
    const int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", f.grid.M, f.grid.M);
    std::string bytes(header, static_cast<size_t>(n));
    bytes.reserve(bytes.size() + f.values.size());
    for (double v : f.values) {
        const double t = span > 0.0 ? (v - lo) / span : 0.0;
        bytes.push_back(static_cast<char>(static_cast<std::uint8_t>(t * 255.0 + 0.5)));
    }
    atomic_write(path, bytes);
}

}  // namespace tatopt::io
