#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mhdlab/field.hpp"

namespace mhdlab {

// ---------------------------------------------------------------------------
// Field snapshot container. Native-endian binary:
//   magic "MHDS", u32 version, u32 d, u32 n, f64 L, u32 ncomp, u32 real_flag,
//   then ncomp * n^d coefficients as (re, im) f64 pairs in row-major lattice
//   order (axis 0 slowest). Round-trips are bit-exact.
// ---------------------------------------------------------------------------
namespace detail {

template <class T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("snapshot: truncated stream");
    return v;
}

}  // namespace detail

inline void write_snapshot(std::ostream& os, const std::vector<SpectralField>& comps,
                           bool real_data) {
    if (comps.empty()) throw std::invalid_argument("write_snapshot: no components");
    const Grid& g = comps.front().grid;
    os.write("MHDS", 4);
    detail::write_pod<std::uint32_t>(os, 1);
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(g.d));
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(g.n));
    detail::write_pod<double>(os, g.L);
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(comps.size()));
    detail::write_pod<std::uint32_t>(os, real_data ? 1u : 0u);
    for (const auto& f : comps) {
        comps.front().check_grid(f);
        for (const auto& c : f.coeffs) {
            detail::write_pod<double>(os, c.real());
            detail::write_pod<double>(os, c.imag());
        }
    }
}

struct Snapshot {
    std::vector<SpectralField> comps;
    bool real_data = false;
};

inline Snapshot read_snapshot(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "MHDS") throw std::runtime_error("snapshot: bad magic");
    auto version = detail::read_pod<std::uint32_t>(is);
    if (version != 1) throw std::runtime_error("snapshot: unsupported version");
    int d = static_cast<int>(detail::read_pod<std::uint32_t>(is));
    int n = static_cast<int>(detail::read_pod<std::uint32_t>(is));
    double L = detail::read_pod<double>(is);
    auto ncomp = detail::read_pod<std::uint32_t>(is);
    auto real_flag = detail::read_pod<std::uint32_t>(is);
    Grid g(d, n, L);
    Snapshot snap;
    snap.real_data = real_flag != 0;
    for (std::uint32_t c = 0; c < ncomp; ++c) {
        SpectralField f(g);
        for (auto& z : f.coeffs) {
            double re = detail::read_pod<double>(is);
            double im = detail::read_pod<double>(is);
            z = Complex(re, im);
        }
        snap.comps.push_back(std::move(f));
    }
    return snap;
}

inline void save_snapshot(const std::string& path, const std::vector<SpectralField>& comps,
                          bool real_data) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_snapshot(os, comps, real_data);
}

inline Snapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_snapshot(is);
}

// ---------------------------------------------------------------------------
// Deterministic CSV emission: fixed %.17g formatting, no locale, no
// timestamps, so identical data yields bit-identical files.
// ---------------------------------------------------------------------------
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : os_(path) {
        if (!os_) throw std::runtime_error("cannot open " + path);
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            os_ << (i ? "," : "") << cols[i];
        os_ << "\n";
    }

    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            os_ << (i ? "," : "") << format_full(vals[i]);
        os_ << "\n";
    }

  private:
    std::ofstream os_;
};

}  // namespace mhdlab
