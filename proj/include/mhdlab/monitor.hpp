#pragma once

#include <cmath>
#include <vector>

#include "mhdlab/constants.hpp"
#include "mhdlab/mhd.hpp"
#include "mhdlab/report.hpp"
#include "mhdlab/toolkit.hpp"

namespace mhdlab {
namespace detail {

// Three-point derivative on a nonuniform grid.
inline std::vector<double> centered_derivative(const std::vector<double>& t,
                                               const std::vector<double>& f) {
    std::size_t n = t.size();
    if (n < 3) throw std::invalid_argument("centered_derivative: series too short");
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double hl = t[i] - t[i - 1], hr = t[i + 1] - t[i];
        d[i] = (hl * (f[i + 1] - f[i]) / hr + hr * (f[i] - f[i - 1]) / hl) / (hl + hr);
    }
    d[0] = (f[1] - f[0]) / (t[1] - t[0]);
    d[n - 1] = (f[n - 1] - f[n - 2]) / (t[n - 1] - t[n - 2]);
    return d;
}

// Minimal c with lhs(t_i) <= c * rhs(t_i) at the interior points.
inline double fit_constant(const std::vector<double>& lhs, const std::vector<double>& rhs) {
    double c = 0;
    for (std::size_t i = 1; i + 1 < lhs.size(); ++i) {
        if (rhs[i] <= 0) continue;
        c = std::max(c, lhs[i] / rhs[i]);
    }
    return std::max(c, 0.0);
}

}  // namespace detail

struct MonitorResult {
    std::vector<EstimateReport> reports;
    MhdConstants constants;
    double T_star = 0;
    double run_horizon = 0;
};

// Fits the minimal constants making each differential inequality hold along
// the recorded series (derivatives by centered differences), verifies their
// Gronwall and bookkeeping consequences, and assembles the constant bundle.
inline MonitorResult monitor_inequalities(const MhdRunResult& run, double s, double eps) {
    const NormSeries& ns = run.series;
    if (ns.size() < 3) throw std::invalid_argument("monitor_inequalities: series too short");
    const std::size_t n = ns.size();

    MonitorResult out;
    out.run_horizon = ns.t.back();

    std::vector<double> u_l2_sq(n), B_l2_sq(n), u_sm1e_sq(n), B_hs_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        u_l2_sq[i] = ns.u_l2[i] * ns.u_l2[i];
        B_l2_sq[i] = ns.B_l2[i] * ns.B_l2[i];
        u_sm1e_sq[i] = ns.u_hsm1e[i] * ns.u_hsm1e[i];
        B_hs_sq[i] = ns.B_hs[i] * ns.B_hs[i];
    }
    auto d_u_l2_sq = detail::centered_derivative(ns.t, u_l2_sq);
    auto d_B_l2_sq = detail::centered_derivative(ns.t, B_l2_sq);
    auto d_u_sm1e_sq = detail::centered_derivative(ns.t, u_sm1e_sq);
    auto d_B_hs_sq = detail::centered_derivative(ns.t, B_hs_sq);

    const double M0 = u_l2_sq[0] + B_l2_sq[0];
    const double M1 = ns.u_hsm1e[0];
    const double B0_hs = ns.B_hs[0];

    // d/dt ||u||^2 + ||grad u||^2 <= c ||B||_{H^s}^4.
    std::vector<double> lhs_upoor(n), rhs_upoor(n);
    for (std::size_t i = 0; i < n; ++i) {
        lhs_upoor[i] = d_u_l2_sq[i] + ns.grad_u_l2[i] * ns.grad_u_l2[i];
        rhs_upoor[i] = std::pow(ns.B_hs[i], 4);
    }
    double c_upoor = detail::fit_constant(lhs_upoor, rhs_upoor);

    // (1/2) d/dt ||B||^2 <= c ||grad u||_{H^s} ||B||^2.
    std::vector<double> lhs_bpoor(n), rhs_bpoor(n);
    for (std::size_t i = 0; i < n; ++i) {
        lhs_bpoor[i] = 0.5 * d_B_l2_sq[i];
        rhs_bpoor[i] = ns.grad_u_hs[i] * B_l2_sq[i];
    }
    double c_bpoor = detail::fit_constant(lhs_bpoor, rhs_bpoor);

    // (1/2) d/dt ||B||_{H^s}^2 <= c4 ||grad u||_{H^s} ||B||_{H^s}^2.
    std::vector<double> lhs_bgood(n), rhs_bgood(n);
    for (std::size_t i = 0; i < n; ++i) {
        lhs_bgood[i] = 0.5 * d_B_hs_sq[i];
        rhs_bgood[i] = ns.grad_u_hs[i] * B_hs_sq[i];
    }
    double c4 = detail::fit_constant(lhs_bgood, rhs_bgood);

    // d/dt ||u||_{H^{s-1+eps}}^2 + ||u||_{H^{s+eps}}^2
    //   <= c (||u||_{H^{s-1+eps}}^{2(1+eps)/eps} + ||B||_{H^s}^{2(1+eps)} + ||B||_{H^s}^4) + 2||u||^2.
    std::vector<double> lhs_eq3(n), rhs_eq3(n);
    for (std::size_t i = 0; i < n; ++i) {
        lhs_eq3[i] = d_u_sm1e_sq[i] + ns.u_hse[i] * ns.u_hse[i] - 2 * u_l2_sq[i];
        rhs_eq3[i] = std::pow(ns.u_hsm1e[i], 2 * (1 + eps) / eps) +
                     std::pow(ns.B_hs[i], 2 * (1 + eps)) + std::pow(ns.B_hs[i], 4);
    }
    double c123 = detail::fit_constant(lhs_eq3, rhs_eq3);

    // c5 from the forcing bound raised to the r-th power and integrated:
    // int ||f||^r <= int (||B||_{H^s}^{2r} + c5 M0^{eps/s} ||u||_{H^{s+eps}}^2).
    const FitSeries& ft = run.fit;
    double c5 = 0;
    {
        double deficit = ft.int_f_r - ft.int_B_2r;
        double denom = std::pow(M0, eps / s) * ns.int_u_hse_sq.back();
        c5 = (denom > 0) ? std::max(deficit, 0.0) / denom : 0.0;
    }

    double C_eps_fit = ft.int_v_hs1_exact / std::max(std::pow(out.run_horizon, 0.5 * eps) * M1, 1e-300);
    double C_r_fit = ft.int_w_hs1 /
                     std::max(std::pow(out.run_horizon, 1.0 - 1.0 / ft.r) *
                                  std::pow(ft.int_f_r, 1.0 / ft.r),
                              1e-300);

    MhdConstants& k = out.constants;
    k.M0 = M0;
    k.M1 = M1;
    k.b0_hs = B0_hs;
    k.eps = eps;
    k.c1 = c123;
    k.c2 = c123;
    k.c3 = c123;
    k.c4 = c4;
    k.c5 = c5;
    k.C_eps = std::max(C_eps_fit, C_r_fit);
    k.C_r = C_r_fit;
    k.M2 = k.m2_from_ingredients();
    k.provenance = {{"M0", Provenance::PaperFormula}, {"M1", Provenance::PaperFormula},
                    {"M2", Provenance::PaperFormula}, {"c1", Provenance::EnsembleMax},
                    {"c2", Provenance::EnsembleMax},  {"c3", Provenance::EnsembleMax},
                    {"c4", Provenance::EnsembleMax},  {"c5", Provenance::EnsembleMax},
                    {"C_eps", Provenance::EnsembleMax}, {"C_r", Provenance::EnsembleMax}};

    auto re_scan = [&](const std::vector<double>& lhs, const std::vector<double>& rhs, double c) {
        double worst = 0;
        for (std::size_t i = 1; i + 1 < n; ++i) worst = std::max(worst, lhs[i] - c * rhs[i]);
        return worst;
    };

    double tol = 1e-9 * std::max(1.0, M0);
    auto rep_fit = [&](const std::string& tag, const std::string& name, double c,
                       const std::vector<double>& lhs, const std::vector<double>& rhs) {
        auto r = EstimateReport::check(tag, name, re_scan(lhs, rhs, c), 0.0, tol, 1.0);
        r.constant = c;
        out.reports.push_back(r);
    };
    rep_fit("(upoor)", "monitor.upoor", c_upoor, lhs_upoor, rhs_upoor);
    rep_fit("(Bpoor)", "monitor.bpoor", c_bpoor, lhs_bpoor, rhs_bpoor);
    rep_fit("(Bgood)", "monitor.bgood", c4, lhs_bgood, rhs_bgood);
    rep_fit("(eq(3))", "monitor.eq3", c123, lhs_eq3, rhs_eq3);

    // Young-exponent reciprocal sum behind (eq(3)) must be exactly 1.
    {
        double sum = young_exponents_reciprocal_sum(eps);
        auto r = EstimateReport::check("three-term Young exponents", "monitor.young",
                                       std::abs(sum - 1.0), 0.0, 1e-12);
        r.details["reciprocal_sum"] = sum;
        out.reports.push_back(r);
    }

    // Gronwall consequence: ||B(t)||_{H^s}^2 <= ||B0||_{H^s}^2 exp(2 c4 int ||grad u||_{H^s}).
    {
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double bound = B0_hs * B0_hs * std::exp(2 * c4 * ns.int_grad_u_hs[i]);
            worst = std::max(worst, B_hs_sq[i] - bound);
        }
        auto r = EstimateReport::check("(eq(1)) Gronwall", "monitor.gronwall", worst, 0.0,
                                       1e-3 * B0_hs * B0_hs);
        out.reports.push_back(r);
    }

    // T* and the B bound on [0, T*].
    out.T_star = existence_time(k, s, eps);
    {
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ns.t[i] > out.T_star) break;
            worst = std::max(worst, ns.B_hs[i] - 2 * B0_hs);
        }
        auto r = EstimateReport::check("B bound on [0, T*]", "monitor.b_bound", worst, 0.0, 1e-12);
        r.details["T_star"] = out.T_star;
        out.reports.push_back(r);
    }

    // (ubound4): int ||u||_{H^{s+eps}}^2 <= c1 T [2(M1^2 + T M2)]^{(1+eps)/eps} + T M2
    // on [0, min(T*, horizon)].
    {
        double Tcap = std::min(out.T_star, out.run_horizon);
        std::size_t icap = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (ns.t[i] <= Tcap) icap = i;
        double lhs = ns.int_u_hse_sq[icap];
        double rhs = k.c1 * Tcap * std::pow(2 * (M1 * M1 + Tcap * k.M2), (1 + eps) / eps) +
                     Tcap * k.M2;
        out.reports.push_back(EstimateReport::check("(ubound4)", "monitor.ubound4", lhs, rhs, tol));
    }

    // (ubound5): int ||u||_{H^{s+1}} < log(4) / (2 c4) for T < T*.
    {
        double Tcap = std::min(out.T_star * (1 - 1e-9), out.run_horizon);
        std::size_t icap = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (ns.t[i] <= Tcap) icap = i;
        double lhs = ns.int_u_hs1[icap];
        double rhs = (k.c4 > 0) ? std::log(4.0) / (2 * k.c4)
                                : std::numeric_limits<double>::infinity();
        out.reports.push_back(EstimateReport::check("(ubound5)", "monitor.ubound5", lhs, rhs, tol));
    }

    return out;
}

}  // namespace mhdlab
