#pragma once

#include <cmath>
#include <vector>

#include "mhdlab/ops.hpp"
#include "mhdlab/quadrature.hpp"
#include "mhdlab/report.hpp"

namespace mhdlab {

// Exact heat semigroup: coeff(k) -> e^{-|k|^2 t} coeff(k).
inline SpectralField heat_evolve(const SpectralField& u0, double t) {
    if (t < 0) throw std::invalid_argument("heat_evolve: t must be nonnegative");
    SpectralField out(u0.grid);
    for (std::size_t i = 0; i < u0.size(); ++i)
        out.coeffs[i] = std::exp(-u0.grid.k_squared(i) * t) * u0.coeffs[i];
    return out;
}

inline VectorField heat_evolve(const VectorField& u0, double t) {
    VectorField out(u0.grid(), u0.divergence_free);
    for (int a = 0; a < u0.d(); ++a) out[a] = heat_evolve(u0[a], t);
    out.divergence_free = u0.divergence_free;
    return out;
}

// C_q = ((2-q)/(2-2q))^{(2-q)/2} * 2^{-q/2}: the product of the two factors
// in the Hoelder step behind the L^q estimate, with the T-power extracted.
inline double cq_constant(double q) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("cq_constant: q must lie in (0,1)");
    return std::pow((2 - q) / (2 - 2 * q), 0.5 * (2 - q)) * std::pow(2.0, -0.5 * q);
}

struct SmoothingReport {
    double s = 0, T = 0, q = 0;
    double sup_Hs = 0;        // sup_t ||u(t)||_{H^s}^2
    double int_Hs1 = 0;       // int_0^T ||u||_{H^{s+1}}^2
    double int_weighted = 0;  // int_0^T t ||u||_{H^{s+2}}^2
    double int_Lq = 0;        // int_0^T ||u||_{H^{s+2}}^q
    double bound = 0;         // ||u0||_{H^s}^2
    double lq_bound = 0;      // C_q T^{1-q} ||u0||_{H^s}^q
    double margin_sup = 0, margin_int_Hs1 = 0, margin_weighted = 0, margin_lq = 0;
    double energy_residual = 0;    // relative defect of the H^{s+1} energy equality
    double weighted_margin2 = 0;   // quarter-bound margin of the t-weighted identity
};

namespace detail {

// Per-mode data for closed-form-in-k norm evaluation along the heat flow.
struct ModeTable {
    std::vector<double> mass;  // vol * |c(k)|^2
    std::vector<double> k2;

    explicit ModeTable(const SpectralField& f) {
        double vol = f.grid.volume();
        mass.reserve(f.size());
        k2.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            double m = vol * std::norm(f.coeffs[i]);
            if (m == 0) continue;
            mass.push_back(m);
            k2.push_back(f.grid.k_squared(i));
        }
    }

    // ||u(t)||_{H^s}^2 with the s=0 convention collapsing to L^2.
    double sobolev_sq(double t, double s) const {
        double acc = 0;
        for (std::size_t i = 0; i < mass.size(); ++i) {
            double w = (s == 0.0) ? 1.0 : (std::pow(k2[i], s) + 1.0);
            acc += mass[i] * w * std::exp(-2.0 * k2[i] * t);
        }
        return acc;
    }

    double homogeneous_sq(double t, double s) const {
        double acc = 0;
        for (std::size_t i = 0; i < mass.size(); ++i) {
            if (k2[i] == 0) continue;
            acc += mass[i] * std::pow(k2[i], s) * std::exp(-2.0 * k2[i] * t);
        }
        return acc;
    }

    double max_k2() const {
        double m = 0;
        for (double v : k2) m = std::max(m, v);
        return m;
    }
};

inline GradedMesh smoothing_mesh(double T, double kmax2) {
    int levels = std::max(12, static_cast<int>(std::ceil(std::log2(std::max(1.0, 2 * kmax2 * T)))) + 8);
    return GradedMesh::refine_towards_zero(T, levels);
}

}  // namespace detail

// Evaluates the four smoothing quantities along the exact semigroup by graded
// composite quadrature in time, and compares against the initial-data bound.
inline SmoothingReport verify_smoothing(const SpectralField& u0, double s, double T, double q) {
    if (s < 0) throw std::invalid_argument("verify_smoothing: s must be nonnegative");
    if (!(T > 0 && T <= 1)) throw std::invalid_argument("verify_smoothing: require 0 < T <= 1");
    if (!(q > 0 && q < 1)) throw std::invalid_argument("verify_smoothing: require q in (0,1)");

    detail::ModeTable tab(u0);
    GradedMesh mesh = detail::smoothing_mesh(T, tab.max_k2());

    SmoothingReport r;
    r.s = s;
    r.T = T;
    r.q = q;
    r.bound = tab.sobolev_sq(0.0, s);

    for (double t : mesh.breaks) r.sup_Hs = std::max(r.sup_Hs, tab.sobolev_sq(t, s));

    r.int_Hs1 = integrate_graded([&](double t) { return tab.sobolev_sq(t, s + 1); }, mesh);
    r.int_weighted = integrate_graded([&](double t) { return t * tab.sobolev_sq(t, s + 2); }, mesh);
    r.int_Lq = integrate_graded([&](double t) { return std::pow(tab.sobolev_sq(t, s + 2), 0.5 * q); }, mesh);
    r.lq_bound = cq_constant(q) * std::pow(T, 1 - q) * std::pow(r.bound, 0.5 * q);

    r.margin_sup = r.bound - r.sup_Hs;
    r.margin_int_Hs1 = r.bound - r.int_Hs1;
    r.margin_weighted = r.bound - r.int_weighted;
    r.margin_lq = r.lq_bound - r.int_Lq;

    // Energy equality for the homogeneous H^{s+1} dissipation.
    double int_hom_s1 = integrate_graded([&](double t) { return tab.homogeneous_sq(t, s + 1); }, mesh);
    double lhs = int_hom_s1 + 0.5 * tab.homogeneous_sq(T, s);
    double rhs = 0.5 * tab.homogeneous_sq(0.0, s);
    r.energy_residual = std::abs(lhs - rhs) / std::max(rhs, 1e-300);

    // t-weighted identity: (T/2)||L^{s+1}u(T)||^2 + int t||L^{s+2}u||^2 <= (1/4)||L^s u0||^2.
    double int_w_hom = integrate_graded([&](double t) { return t * tab.homogeneous_sq(t, s + 2); }, mesh);
    r.weighted_margin2 = 0.25 * tab.homogeneous_sq(0.0, s) -
                         (0.5 * T * tab.homogeneous_sq(T, s + 1) + int_w_hom);
    return r;
}

inline std::vector<EstimateReport> smoothing_estimates(const SmoothingReport& r, double tol) {
    std::vector<EstimateReport> out;
    out.push_back(EstimateReport::check("Lemma 2.1 sup bound", "smoothing.sup", r.sup_Hs, r.bound, tol));
    out.push_back(
        EstimateReport::check("Lemma 2.1 L2(H^{s+1})", "smoothing.int_hs1", r.int_Hs1, r.bound, tol));
    out.push_back(EstimateReport::check("Lemma 2.1 weighted L2(H^{s+2})", "smoothing.weighted",
                                        r.int_weighted, r.bound, tol));
    out.push_back(EstimateReport::check("Lemma 2.1 / (twomore)", "smoothing.lq", r.int_Lq,
                                        r.lq_bound, tol));
    auto e = EstimateReport::check("Lemma 2.1 / (straightE)", "smoothing.energy_eq",
                                   r.energy_residual, 0.0, 1e-8);
    e.details["energy_residual"] = r.energy_residual;
    out.push_back(e);
    out.push_back(EstimateReport::check("Lemma 2.1 / (tLambda)", "smoothing.tlambda",
                                        -r.weighted_margin2, 0.0, tol));
    return out;
}

}  // namespace mhdlab
