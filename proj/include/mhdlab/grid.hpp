#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mhdlab {

inline constexpr double pi = 3.14159265358979323846;

// Periodic box [0, 2*pi*L)^d. Wavenumbers are k = m/L with integer
// m in {-n/2, ..., n/2-1} per axis; storage follows the usual DFT
// layout (index i <-> m = i for i < n/2, m = i - n otherwise).
struct Grid {
    int d = 2;
    int n = 0;
    double L = 1.0;

    Grid() = default;
    Grid(int d_, int n_, double L_ = 1.0) : d(d_), n(n_), L(L_) {
        if (d != 2 && d != 3) throw std::invalid_argument("Grid: d must be 2 or 3");
        if (n <= 0 || n % 2 != 0) throw std::invalid_argument("Grid: n must be a positive even integer");
        if (!(L > 0)) throw std::invalid_argument("Grid: L must be positive");
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
        return s;
    }

    double box_length() const { return 2.0 * pi * L; }
    double volume() const { return std::pow(box_length(), d); }
    double spacing() const { return box_length() / n; }

    // Integer lattice coordinates m_a of a flat index (axis 0 slowest).
    std::array<int, 3> modes(std::size_t flat) const {
        std::array<int, 3> m{0, 0, 0};
        for (int a = d - 1; a >= 0; --a) {
            int i = static_cast<int>(flat % n);
            flat /= n;
            m[a] = (i < n / 2) ? i : i - n;
        }
        return m;
    }

    std::size_t index_of(const std::array<int, 3>& m) const {
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            int i = m[a] >= 0 ? m[a] : m[a] + n;
            flat = flat * n + static_cast<std::size_t>(i);
        }
        return flat;
    }

    // Flat index of the conjugate partner mode -m.
    std::size_t conjugate_index(std::size_t flat) const {
        auto m = modes(flat);
        std::array<int, 3> neg{0, 0, 0};
        for (int a = 0; a < d; ++a) {
            int i = m[a] >= 0 ? m[a] : m[a] + n;
            neg[a] = (n - i) % n;
        }
        std::size_t out = 0;
        for (int a = 0; a < d; ++a) out = out * n + static_cast<std::size_t>(neg[a]);
        return out;
    }

    double k_squared(std::size_t flat) const {
        auto m = modes(flat);
        double s = 0;
        for (int a = 0; a < d; ++a) {
            double k = m[a] / L;
            s += k * k;
        }
        return s;
    }

    double k_abs(std::size_t flat) const { return std::sqrt(k_squared(flat)); }

    double k_component(std::size_t flat, int axis) const { return modes(flat)[axis] / L; }

    // 2/3-rule test: true if the mode survives dealiasing.
    bool in_dealias_band(std::size_t flat) const {
        auto m = modes(flat);
        for (int a = 0; a < d; ++a)
            if (3 * std::abs(m[a]) > n) return false;
        return true;
    }

    bool operator==(const Grid& o) const { return d == o.d && n == o.n && L == o.L; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

}  // namespace mhdlab
