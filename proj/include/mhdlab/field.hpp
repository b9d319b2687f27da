#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/fft.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

using Complex = std::complex<double>;

// Scalar field stored as spectral amplitudes: f(x) = sum_k coeff(k) e^{i k.x}.
// The L^2 norm over the box is vol^{1/2} * l2 of the coefficient array.
struct SpectralField {
    Grid grid;
    std::vector<Complex> coeffs;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), Complex{0, 0}) {}
    SpectralField(const Grid& g, std::vector<Complex> c) : grid(g), coeffs(std::move(c)) {
        if (coeffs.size() != g.size()) throw std::invalid_argument("SpectralField: coefficient count mismatch");
    }

    Complex& operator[](std::size_t i) { return coeffs[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs[i]; }
    std::size_t size() const { return coeffs.size(); }

    SpectralField& operator+=(const SpectralField& o) {
        check_grid(o);
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_grid(o);
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& c : coeffs) c *= a;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

    void check_grid(const SpectralField& o) const {
        if (grid != o.grid) throw GridMismatch("fields live on different grids");
    }

    std::vector<Complex> to_physical() const { return mhdlab::to_physical(grid, coeffs); }

    static SpectralField from_physical(const Grid& g, const std::vector<Complex>& phys) {
        return SpectralField(g, to_spectral(g, phys));
    }

    // Largest |coeff| over all modes.
    double max_coeff() const {
        double m = 0;
        for (const auto& c : coeffs) m = std::max(m, std::abs(c));
        return m;
    }

    // Worst deviation from coeff(-k) = conj(coeff(k)), relative to max_coeff.
    double conjugate_symmetry_defect() const {
        double mx = max_coeff();
        if (mx == 0) return 0;
        double worst = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            std::size_t j = grid.conjugate_index(i);
            worst = std::max(worst, std::abs(coeffs[i] - std::conj(coeffs[j])));
        }
        return worst / mx;
    }

    // Project exactly onto the real-valued subspace.
    void symmetrize() {
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            std::size_t j = grid.conjugate_index(i);
            if (j < i) continue;
            Complex avg = 0.5 * (coeffs[i] + std::conj(coeffs[j]));
            coeffs[i] = avg;
            coeffs[j] = std::conj(avg);
        }
    }
};

// d-component field on a shared grid.
struct VectorField {
    std::vector<SpectralField> comp;
    bool divergence_free = false;

    VectorField() = default;
    explicit VectorField(const Grid& g, bool div_free = false) : divergence_free(div_free) {
        comp.assign(g.d, SpectralField(g));
    }
    VectorField(std::vector<SpectralField> c, bool div_free = false)
        : comp(std::move(c)), divergence_free(div_free) {
        if (comp.empty()) throw std::invalid_argument("VectorField: no components");
        for (const auto& f : comp) comp.front().check_grid(f);
        if (static_cast<int>(comp.size()) != grid().d)
            throw std::invalid_argument("VectorField: component count must equal grid dimension");
    }

    const Grid& grid() const { return comp.front().grid; }
    int d() const { return static_cast<int>(comp.size()); }
    SpectralField& operator[](int a) { return comp[a]; }
    const SpectralField& operator[](int a) const { return comp[a]; }

    VectorField& operator+=(const VectorField& o) {
        for (int a = 0; a < d(); ++a) comp[a] += o.comp[a];
        divergence_free = divergence_free && o.divergence_free;
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        for (int a = 0; a < d(); ++a) comp[a] -= o.comp[a];
        divergence_free = divergence_free && o.divergence_free;
        return *this;
    }
    VectorField& operator*=(double s) {
        for (auto& f : comp) f *= s;
        return *this;
    }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(double s, VectorField v) { return v *= s; }

    double max_coeff() const {
        double m = 0;
        for (const auto& f : comp) m = std::max(m, f.max_coeff());
        return m;
    }
};

}  // namespace mhdlab
