#pragma once

#include <cmath>

#include "mhdlab/field.hpp"

namespace mhdlab {

// ---------------------------------------------------------------------------
// Fractional derivative: coeff(k) -> |k|^s coeff(k).
// Zero mode: mapped to 0 for s > 0, untouched for s = 0, rejected for s < 0
// when it carries mass (relative to the field's largest amplitude).
// ---------------------------------------------------------------------------
inline SpectralField lambda_pow(const SpectralField& f, double s) {
    if (s == 0.0) return f;
    SpectralField out(f.grid);
    const std::size_t zero = f.grid.index_of({0, 0, 0});
    if (s < 0) {
        double mx = f.max_coeff();
        if (std::abs(f.coeffs[zero]) > 1e-13 * mx && mx > 0) throw NegativeOrderOnZeroMode();
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i == zero) continue;
        out.coeffs[i] = std::pow(f.grid.k_squared(i), 0.5 * s) * f.coeffs[i];
    }
    return out;
}

// L^2 norm over the box (Fourier-side Parseval form).
inline double l2_norm(const SpectralField& f) {
    double s = 0;
    for (const auto& c : f.coeffs) s += std::norm(c);
    return std::sqrt(f.grid.volume() * s);
}

// ||Lambda^s f||_{L^2}.
inline double homogeneous_norm(const SpectralField& f, double s) {
    if (s == 0.0) return l2_norm(f);
    const std::size_t zero = f.grid.index_of({0, 0, 0});
    if (s < 0) {
        double mx = f.max_coeff();
        if (std::abs(f.coeffs[zero]) > 1e-13 * mx && mx > 0) throw NegativeOrderOnZeroMode();
    }
    double acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i == zero) continue;
        acc += std::pow(f.grid.k_squared(i), s) * std::norm(f.coeffs[i]);
    }
    return std::sqrt(f.grid.volume() * acc);
}

// (||Lambda^s f||^2 + ||f||^2)^{1/2} for s > 0; the plain L^2 norm at s = 0.
inline double sobolev_norm(const SpectralField& f, double s) {
    if (s < 0) throw std::invalid_argument("sobolev_norm: s must be nonnegative");
    if (s == 0.0) return l2_norm(f);
    double hom = homogeneous_norm(f, s);
    double l2 = l2_norm(f);
    return std::sqrt(hom * hom + l2 * l2);
}

inline double l2_norm(const VectorField& v) {
    double s = 0;
    for (const auto& f : v.comp) {
        double n = l2_norm(f);
        s += n * n;
    }
    return std::sqrt(s);
}

inline double homogeneous_norm(const VectorField& v, double s) {
    double acc = 0;
    for (const auto& f : v.comp) {
        double n = homogeneous_norm(f, s);
        acc += n * n;
    }
    return std::sqrt(acc);
}

inline double sobolev_norm(const VectorField& v, double s) {
    double acc = 0;
    for (const auto& f : v.comp) {
        double n = sobolev_norm(f, s);
        acc += n * n;
    }
    return std::sqrt(acc);
}

// L^2 inner product (real part; exact for real-valued fields).
inline double inner_product(const SpectralField& f, const SpectralField& g) {
    f.check_grid(g);
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += (f.coeffs[i] * std::conj(g.coeffs[i])).real();
    return f.grid.volume() * s;
}

inline double inner_product(const VectorField& v, const VectorField& w) {
    double s = 0;
    for (int a = 0; a < v.d(); ++a) s += inner_product(v[a], w[a]);
    return s;
}

// Spectral partial derivative along one axis.
inline SpectralField derivative(const SpectralField& f, int axis) {
    SpectralField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i)
        out.coeffs[i] = Complex(0, f.grid.k_component(i, axis)) * f.coeffs[i];
    return out;
}

inline SpectralField divergence(const VectorField& v) {
    SpectralField out(v.grid());
    for (int a = 0; a < v.d(); ++a) out += derivative(v[a], a);
    return out;
}

// max_k |div(k)| / (|k| |v(k)|), i.e. the per-mode relative divergence defect.
inline double divergence_defect(const VectorField& v) {
    const Grid& g = v.grid();
    double mx = v.max_coeff();
    if (mx == 0) return 0;
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double kabs = g.k_abs(i);
        if (kabs == 0) continue;
        Complex div{0, 0};
        for (int a = 0; a < g.d; ++a)
            div += Complex(0, g.k_component(i, a)) * v[a].coeffs[i];
        // relative to the largest coefficient, so roundoff-level modes do not
        // register as O(1) defects
        worst = std::max(worst, std::abs(div) / (kabs * mx));
    }
    return worst;
}

// Leray projector: u(k) -> u(k) - k (k.u(k)) / |k|^2; zero mode untouched.
inline VectorField leray_project(const VectorField& v) {
    const Grid& g = v.grid();
    VectorField out(g, true);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double k2 = g.k_squared(i);
        auto m = g.modes(i);
        if (k2 == 0) {
            for (int a = 0; a < g.d; ++a) out[a].coeffs[i] = v[a].coeffs[i];
            continue;
        }
        Complex kdotu{0, 0};
        for (int a = 0; a < g.d; ++a) kdotu += (m[a] / g.L) * v[a].coeffs[i];
        for (int a = 0; a < g.d; ++a)
            out[a].coeffs[i] = v[a].coeffs[i] - (m[a] / g.L) * kdotu / k2;
    }
    return out;
}

// 2/3-rule truncation.
inline SpectralField dealias(const SpectralField& f) {
    SpectralField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.grid.in_dealias_band(i)) out.coeffs[i] = f.coeffs[i];
    return out;
}

inline VectorField dealias(const VectorField& v) {
    VectorField out(v.grid(), v.divergence_free);
    for (int a = 0; a < v.d(); ++a) out[a] = dealias(v[a]);
    return out;
}

// ---------------------------------------------------------------------------
// Dealiased pseudo-spectral advection (u.grad)w for scalar w.
// Both inputs are truncated to the 2/3 band before forming the product, so
// the result coincides with the Galerkin evaluation on retained modes.
// ---------------------------------------------------------------------------
inline SpectralField advect(const VectorField& u, const SpectralField& w) {
    const Grid& g = u.grid();
    if (g != w.grid) throw GridMismatch("advect: grid mismatch");
    std::vector<Complex> acc(g.size(), Complex{0, 0});
    SpectralField wt = dealias(w);
    for (int a = 0; a < g.d; ++a) {
        auto u_phys = dealias(u[a]).to_physical();
        auto dw_phys = derivative(wt, a).to_physical();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += u_phys[i] * dw_phys[i];
    }
    return dealias(SpectralField(g, to_spectral(g, acc)));
}

inline VectorField advect(const VectorField& u, const VectorField& w) {
    VectorField out(u.grid());
    for (int a = 0; a < w.d(); ++a) out[a] = advect(u, w[a]);
    out.divergence_free = false;
    return out;
}

// Physical-space sup of the pointwise vector magnitude (on the dealiased field).
inline double max_pointwise_magnitude(const VectorField& v) {
    const Grid& g = v.grid();
    std::vector<double> mag2(g.size(), 0.0);
    for (int a = 0; a < g.d; ++a) {
        auto phys = dealias(v[a]).to_physical();
        for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += std::norm(phys[i]);
    }
    double mx = 0;
    for (double m : mag2) mx = std::max(mx, m);
    return std::sqrt(mx);
}

}  // namespace mhdlab
