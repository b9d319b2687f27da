#pragma once

#include <cmath>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/quadrature.hpp"

namespace mhdlab {

// Surface measure of the unit sphere S^{d-1} for d = 2, 3.
inline double sphere_measure(int d) {
    if (d == 2) return 2 * pi;
    if (d == 3) return 4 * pi;
    throw std::invalid_argument("sphere_measure: d must be 2 or 3");
}

// Radial profile of the rough initial datum: 1 / (rho^{d/2} log(2 + rho)).
// Its Fourier-side mass is locally L^2 but decays too slowly for the solution
// to gain two integrable derivatives.
inline double counterexample_profile(double rho, int d) {
    if (!(rho > 0)) throw std::invalid_argument("counterexample_profile: rho must be positive");
    if (d != 2 && d != 3) throw std::invalid_argument("counterexample_profile: d must be 2 or 3");
    return 1.0 / (std::pow(rho, 0.5 * d) * std::log(2.0 + rho));
}

namespace detail {

// rho^4 * profile^2 * rho^{d-1} = rho^3 / log^2(2+rho), independent of d.
inline double h2_integrand(double rho, double t) {
    double lg = std::log(2.0 + rho);
    return rho * rho * rho / (lg * lg) * std::exp(-2.0 * rho * rho * t);
}

// Certified truncation radius: the Gaussian tail beyond R contributes at most
// rel_tol of the closed-form bound exp(-aR^2)(aR^2+1)/(2a^2) / log^2(2+R).
inline double tail_bound(double R, double t) {
    double a = 2.0 * t;
    double lg = std::log(2.0 + R);
    return std::exp(-a * R * R) * (a * R * R + 1.0) / (2.0 * a * a) / (lg * lg);
}

inline double rho_max_for(double t, double retained_guess, double rel_tol = 1e-10) {
    double R = std::max(4.0, 4.0 / std::sqrt(t));
    while (tail_bound(R, t) > rel_tol * retained_guess) R *= 1.5;
    return R;
}

}  // namespace detail

// Radial quadrature over [0, rho_max] of the dot-H^2 density at time t.
inline double h2_density_integral(double t, double rho_max, double rel_tol = 1e-11) {
    // Coarse pass on a geometric mesh to scale the adaptive tolerance.
    GradedMesh coarse;
    coarse.breaks.push_back(0.0);
    for (double r = std::min(1.0, rho_max); r < rho_max; r *= 2.0) coarse.breaks.push_back(r);
    coarse.breaks.push_back(rho_max);
    double rough = integrate_graded([&](double r) { return detail::h2_integrand(r, t); }, coarse);
    double total = 0;
    for (std::size_t i = 0; i + 1 < coarse.breaks.size(); ++i)
        total += integrate_adaptive([&](double r) { return detail::h2_integrand(r, t); },
                                    coarse.breaks[i], coarse.breaks[i + 1],
                                    rel_tol * std::max(rough, 1e-300) / coarse.breaks.size());
    return total;
}

// || u(t) ||_{dot H^2} for the counterexample datum, by adaptive radial
// quadrature with a certified Gaussian tail cutoff.
inline double counterexample_H2_norm(double t, int d, double rho_max = 0) {
    if (!(t > 0)) throw std::invalid_argument("counterexample_H2_norm: t must be positive");
    double omega = sphere_measure(d);
    if (rho_max <= 0) {
        double guess = h2_density_integral(t, std::max(4.0, 4.0 / std::sqrt(t)), 1e-8);
        rho_max = detail::rho_max_for(t, std::max(guess, 1e-300));
    }
    return std::sqrt(omega * h2_density_integral(t, rho_max));
}

// The constant c_shell with (int_{|xi|<=j} |xi|^4 |u0hat|^2)^{1/2} >= c_shell j^2 / log(2+j).
inline double shell_constant(int d) { return std::sqrt(sphere_measure(d) / 4.0); }

// S(N) = sum_{j=j0}^{N} 1 / ((j+1) log(2+j)), Kahan-compensated.
inline double harmonic_log_sum(long j0, long N) {
    double s = 0, c = 0;
    for (long j = j0; j <= N; ++j) {
        double term = 1.0 / ((j + 1.0) * std::log(2.0 + j));
        double y = term - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

struct ScanRow {
    double t_min = 0;
    double I = 0;      // int_{t_min}^{T} ||u(t)||_{dot H^2} dt
    long N = 0;        // floor(t_min^{-1/2})
    double S = 0;      // partial sum from j0 to N
    double ratio = 0;  // I / (e^{-1} c_shell S)
};

// Truncated time integral of the dot-H^2 norm against the comparison series.
inline std::vector<ScanRow> divergence_scan(int d, double T, const std::vector<double>& t_min_list) {
    long j0 = static_cast<long>(std::ceil(1.0 / std::sqrt(T)));
    j0 = std::max<long>(j0, 1);
    const double cs = shell_constant(d);
    std::vector<ScanRow> rows;
    for (double t_min : t_min_list) {
        ScanRow row;
        row.t_min = t_min;
        GradedMesh mesh = GradedMesh::between(t_min, T);
        row.I = integrate_graded([&](double t) { return counterexample_H2_norm(t, d); }, mesh);
        row.N = static_cast<long>(std::floor(1.0 / std::sqrt(t_min)));
        row.S = harmonic_log_sum(j0, row.N);
        row.ratio = row.I / (std::exp(-1.0) * cs * row.S);
        rows.push_back(row);
    }
    return rows;
}

// Per-j verification of the four lower-bound steps behind the divergence of
// the time integral. All margins should be nonnegative; the pointwise kernel
// bound is recorded with its sharp constant (>= e^{-2} on the sliced region,
// which yields the factor e^{-1} after the square root).
struct ChainRow {
    long j = 0;
    double margin_restrict = 0;  // full integral >= ball-restricted integral
    double margin_kernel = 0;    // A_j(j^{-2}) - e^{-2} A_j(0)
    double sharp_kernel = 0;     // A_j(j^{-2}) / A_j(0)
    double margin_interval = 0;  // j^{-2} - (j+1)^{-2} - 1/(j^2(j+1))
    double margin_shell = 0;     // A_j(0) - (omega/4) j^4 / log^2(2+j)
};

inline std::vector<ChainRow> chain_check(int d, double T, long j_max = 50) {
    long j0 = std::max<long>(static_cast<long>(std::ceil(1.0 / std::sqrt(T))), 1);
    double omega = sphere_measure(d);
    std::vector<ChainRow> rows;
    for (long j = j0; j <= j_max; ++j) {
        ChainRow row;
        row.j = j;
        double jd = static_cast<double>(j);
        double t_mid = 0.5 * (1.0 / (jd * jd) + 1.0 / ((jd + 1) * (jd + 1)));
        double A_full = omega * h2_density_integral(
                                    t_mid, detail::rho_max_for(t_mid, h2_density_integral(t_mid, 4 * jd, 1e-8)));
        double A_ball_mid = omega * h2_density_integral(t_mid, jd);
        row.margin_restrict = A_full - A_ball_mid;

        double A_ball_worst = omega * h2_density_integral(1.0 / (jd * jd), jd);
        double A_ball_0 =
            omega * integrate_adaptive([&](double r) { return detail::h2_integrand(r, 0.0); }, 0.0,
                                       jd, 1e-12 * jd * jd * jd * jd);
        row.margin_kernel = A_ball_worst - std::exp(-2.0) * A_ball_0;
        row.sharp_kernel = A_ball_worst / A_ball_0;

        row.margin_interval = 1.0 / (jd * jd) - 1.0 / ((jd + 1) * (jd + 1)) - 1.0 / (jd * jd * (jd + 1));

        double lg = std::log(2.0 + jd);
        row.margin_shell = A_ball_0 - 0.25 * omega * jd * jd * jd * jd / (lg * lg);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mhdlab
