#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mhdlab/ops.hpp"

namespace mhdlab {

// Deterministic RNG: avoids the implementation-defined std distributions so
// that a given seed reproduces bit-identical fields.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double gauss() {  // Box-Muller
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2 * pi * u2);
        have_spare_ = true;
        return r * std::cos(2 * pi * u2);
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0;
};

// Random real band-limited scalar field: independent Gaussian amplitudes on
// modes with 1 <= |m|_inf <= m_max, damped by (1+|k|^2)^{-decay/2}, with
// conjugate symmetry enforced by construction (zero mean). Modes are drawn in
// a fixed lexicographic order over the band, so a given (seed, m_max, L)
// produces the same continuum field on every resolution n.
inline SpectralField random_band_limited(const Grid& g, int m_max, Rng& rng, double decay = 1.0) {
    if (m_max >= g.n / 2) throw std::invalid_argument("random_band_limited: m_max must be < n/2");
    SpectralField f(g);
    std::array<int, 3> m{0, 0, 0};
    const int lo2 = (g.d == 3) ? -m_max : 0, hi2 = (g.d == 3) ? m_max : 0;
    for (m[0] = -m_max; m[0] <= m_max; ++m[0])
        for (m[1] = -m_max; m[1] <= m_max; ++m[1])
            for (m[2] = lo2; m[2] <= hi2; ++m[2]) {
                // canonical representative of the +-m pair: first nonzero > 0
                int lead = m[0] != 0 ? m[0] : (m[1] != 0 ? m[1] : m[2]);
                if (lead <= 0) continue;
                std::size_t i = g.index_of(m);
                double amp = std::pow(1.0 + g.k_squared(i), -0.5 * decay);
                Complex c(amp * rng.gauss(), amp * rng.gauss());
                f.coeffs[i] = c;
                f.coeffs[g.conjugate_index(i)] = std::conj(c);
            }
    return f;
}

inline VectorField random_vector_field(const Grid& g, int m_max, Rng& rng, double decay = 1.0) {
    std::vector<SpectralField> comps;
    for (int a = 0; a < g.d; ++a) comps.push_back(random_band_limited(g, m_max, rng, decay));
    return VectorField(std::move(comps));
}

inline VectorField random_divergence_free_field(const Grid& g, int m_max, Rng& rng,
                                                double decay = 1.0) {
    auto v = leray_project(random_vector_field(g, m_max, rng, decay));
    for (auto& f : v.comp) f.symmetrize();
    v.divergence_free = true;
    return v;
}

}  // namespace mhdlab
