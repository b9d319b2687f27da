#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mhdlab/heat.hpp"
#include "mhdlab/io.hpp"
#include "mhdlab/ops.hpp"
#include "mhdlab/random.hpp"

namespace mhdlab {

struct MhdState {
    VectorField u;
    VectorField B;
    double t = 0;
};

namespace detail {

struct MhdRhsEval {
    VectorField Nu;        // P[-(u.grad)u + (B.grad)B]
    VectorField NB;        // P[-(u.grad)B + (B.grad)u]
    VectorField f_stokes;  // unprojected -(u.grad)u + (B.grad)B
};

inline MhdRhsEval mhd_rhs(const VectorField& u, const VectorField& B) {
    MhdRhsEval out;
    VectorField uu = advect(u, u);
    VectorField bb = advect(B, B);
    out.f_stokes = bb - uu;
    out.Nu = leray_project(out.f_stokes);
    VectorField ub = advect(u, B);
    VectorField bu = advect(B, u);
    out.NB = leray_project(bu - ub);
    return out;
}

inline void check_finite(const VectorField& v, double t) {
    for (const auto& f : v.comp)
        for (const auto& c : f.coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw BlowUpDetected(t, "NaN in spectral coefficients");
}

}  // namespace detail

// One step of the integrating-factor RK3 scheme: the viscous multiplier on u
// is applied exactly at the stage times (only decaying exponentials appear),
// the nonlinear terms are dealiased and Leray-projected, and the pressure is
// never formed. `mid` receives the half-step stage state for quadrature use.
inline MhdState mhd_step(const MhdState& state, double dt, MhdState* mid = nullptr) {
    if (!(dt > 0)) throw std::invalid_argument("mhd_step: dt must be positive");
    const VectorField& u = state.u;
    const VectorField& B = state.B;

    auto r1 = detail::mhd_rhs(u, B);
    VectorField ua = heat_evolve(u + (0.5 * dt) * r1.Nu, 0.5 * dt);
    VectorField Ba = B + (0.5 * dt) * r1.NB;
    if (mid) {
        ua.divergence_free = Ba.divergence_free = true;
        *mid = MhdState{ua, Ba, state.t + 0.5 * dt};
    }

    auto r2 = detail::mhd_rhs(ua, Ba);
    VectorField ub = heat_evolve(u - dt * r1.Nu, dt) + (2 * dt) * heat_evolve(r2.Nu, 0.5 * dt);
    VectorField Bb = B - dt * r1.NB + (2 * dt) * r2.NB;

    auto r3 = detail::mhd_rhs(ub, Bb);
    VectorField un = heat_evolve(u + (dt / 6.0) * r1.Nu, dt) +
                     (2.0 * dt / 3.0) * heat_evolve(r2.Nu, 0.5 * dt) + (dt / 6.0) * r3.Nu;
    VectorField Bn = B + (dt / 6.0) * (r1.NB + 4.0 * r2.NB + r3.NB);

    un = leray_project(un);
    Bn = leray_project(Bn);
    detail::check_finite(un, state.t + dt);
    detail::check_finite(Bn, state.t + dt);
    return MhdState{std::move(un), std::move(Bn), state.t + dt};
}

// Per-step norm record plus the running time-integrals, in CSV column order.
struct NormSeries {
    std::vector<double> t;
    std::vector<double> u_l2, B_l2, grad_u_l2;
    std::vector<double> u_hsm1e, u_hse, u_hs1;
    std::vector<double> B_hs, grad_u_hs;
    std::vector<double> int_grad_u_sq;   // int ||grad u||^2
    std::vector<double> int_u_hse_sq;    // int ||u||_{H^{s+eps}}^2
    std::vector<double> int_u_hs1;       // int ||u||_{H^{s+1}}
    std::vector<double> int_grad_u_hs;   // int ||grad u||_{H^s}
    bool blew_up = false;

    std::size_t size() const { return t.size(); }

    static std::vector<std::string> csv_columns() {
        return {"t",          "u_l2",         "B_l2",         "grad_u_l2", "u_hsm1e",
                "u_hse",      "u_hs1",        "B_hs",         "grad_u_hs", "int_grad_u_sq",
                "int_u_hse_sq", "int_u_hs1",  "int_grad_u_hs"};
    }

    void write_csv(const std::string& path) const {
        CsvWriter w(path);
        w.header(csv_columns());
        for (std::size_t i = 0; i < size(); ++i)
            w.row({t[i], u_l2[i], B_l2[i], grad_u_l2[i], u_hsm1e[i], u_hse[i], u_hs1[i], B_hs[i],
                   grad_u_hs[i], int_grad_u_sq[i], int_u_hse_sq[i], int_u_hs1[i], int_grad_u_hs[i]});
    }
};

// Extra per-step data used only for constant fitting: the Stokes forcing norm
// and the heat/Duhamel split of u relative to the run's own initial data.
struct FitSeries {
    double r = 0;  // (s + eps) / s
    std::vector<double> t;
    std::vector<double> f_hsm1;   // ||f||_{H^{s-1}}, f = -(u.grad)u + (B.grad)B
    std::vector<double> v_hs1;    // ||v||_{H^{s+1}}, v = heat evolution of u0
    std::vector<double> w_hs1;    // ||u - v||_{H^{s+1}}
    double int_v_hs1_exact = 0;   // graded-mesh quadrature of the closed form
    double int_w_hs1 = 0;
    double int_f_r = 0;           // int ||f||_{H^{s-1}}^r
    double int_B_2r = 0;          // int ||B||_{H^s}^{2r}
};

struct MhdRunResult {
    NormSeries series;
    FitSeries fit;
    MhdState final_state;
    VectorField u0, B0;
    double s = 0, eps = 0;
};

struct DtControl {
    double cfl = 0.4;
    double dt_max = 2e-3;
    double dt_fixed = 0;  // > 0 forces a constant step
    double blowup_factor = 1e6;
};

namespace detail {

// Per-mode multiplier tables for the norm orders a run keeps asking for.
struct RunWeights {
    std::vector<double> k2, w_sm1e, w_se, w_s1, w_s, w_grad_s, w_sm1;

    RunWeights(const Grid& g, double s, double eps) {
        std::size_t n = g.size();
        k2.resize(n);
        w_sm1e.resize(n);
        w_se.resize(n);
        w_s1.resize(n);
        w_s.resize(n);
        w_grad_s.resize(n);
        w_sm1.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double q = g.k_squared(i);
            k2[i] = q;
            auto sob = [&](double order) { return (q == 0) ? 1.0 : std::pow(q, order) + 1.0; };
            w_sm1e[i] = sob(s - 1 + eps);
            w_se[i] = sob(s + eps);
            w_s1[i] = sob(s + 1);
            w_s[i] = sob(s);
            w_grad_s[i] = q * w_s[i];
            w_sm1[i] = sob(s - 1);
        }
    }

    double weighted_sq(const VectorField& v, const std::vector<double>& w) const {
        double acc = 0;
        for (const auto& f : v.comp)
            for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * std::norm(f.coeffs[i]);
        return v.grid().volume() * acc;
    }
};

struct InstantNorms {
    double u_l2, B_l2, grad_u_l2, u_hsm1e, u_hse, u_hs1, B_hs, grad_u_hs;
};

inline InstantNorms measure(const VectorField& u, const VectorField& B, const RunWeights& w) {
    InstantNorms n;
    double vol = u.grid().volume();
    double u2 = 0, gu2 = 0, usm1e = 0, use_ = 0, us1 = 0, gus = 0;
    for (const auto& f : u.comp)
        for (std::size_t i = 0; i < f.size(); ++i) {
            double m = std::norm(f.coeffs[i]);
            u2 += m;
            gu2 += w.k2[i] * m;
            usm1e += w.w_sm1e[i] * m;
            use_ += w.w_se[i] * m;
            us1 += w.w_s1[i] * m;
            gus += w.w_grad_s[i] * m;
        }
    double b2 = 0, bs = 0;
    for (const auto& f : B.comp)
        for (std::size_t i = 0; i < f.size(); ++i) {
            double m = std::norm(f.coeffs[i]);
            b2 += m;
            bs += w.w_s[i] * m;
        }
    n.u_l2 = std::sqrt(vol * u2);
    n.B_l2 = std::sqrt(vol * b2);
    n.grad_u_l2 = std::sqrt(vol * gu2);
    n.u_hsm1e = std::sqrt(vol * usm1e);
    n.u_hse = std::sqrt(vol * use_);
    n.u_hs1 = std::sqrt(vol * us1);
    n.B_hs = std::sqrt(vol * bs);
    n.grad_u_hs = std::sqrt(vol * gus);
    return n;
}

}  // namespace detail

// Integrates the non-resistive system to T (or detected blow-up), recording
// norms at every accepted step. Running integrals use Simpson increments over
// the step with the half-step stage as midpoint.
inline MhdRunResult mhd_run(const VectorField& u0_in, const VectorField& B0_in, double s,
                            double eps, double T, const DtControl& ctrl = {}) {
    const Grid& g = u0_in.grid();
    if (!(s > 0.5 * g.d)) throw std::invalid_argument("mhd_run: require s > d/2");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("mhd_run: require eps in (0,1) strictly");
    if (!(T > 0)) throw std::invalid_argument("mhd_run: require T > 0");
    if (divergence_defect(u0_in) > 1e-10 || divergence_defect(B0_in) > 1e-10)
        throw std::invalid_argument("mhd_run: initial data must be divergence-free");

    // Keep the data in the dealiased band so the Galerkin identities hold.
    VectorField u0 = leray_project(dealias(u0_in));
    VectorField B0 = leray_project(dealias(B0_in));
    for (auto& f : u0.comp) f.symmetrize();
    for (auto& f : B0.comp) f.symmetrize();

    detail::RunWeights W(g, s, eps);
    MhdRunResult res;
    res.u0 = u0;
    res.B0 = B0;
    res.s = s;
    res.eps = eps;
    res.fit.r = (s + eps) / s;

    MhdState state{u0, B0, 0.0};
    double B_hs0 = 0;

    auto push_row = [&](const MhdState& st, const detail::InstantNorms& n) {
        NormSeries& ns = res.series;
        ns.t.push_back(st.t);
        ns.u_l2.push_back(n.u_l2);
        ns.B_l2.push_back(n.B_l2);
        ns.grad_u_l2.push_back(n.grad_u_l2);
        ns.u_hsm1e.push_back(n.u_hsm1e);
        ns.u_hse.push_back(n.u_hse);
        ns.u_hs1.push_back(n.u_hs1);
        ns.B_hs.push_back(n.B_hs);
        ns.grad_u_hs.push_back(n.grad_u_hs);
    };

    auto fit_row = [&](const MhdState& st, const detail::MhdRhsEval& rhs) {
        res.fit.t.push_back(st.t);
        res.fit.f_hsm1.push_back(std::sqrt(W.weighted_sq(rhs.f_stokes, W.w_sm1)));
        VectorField v = heat_evolve(u0, st.t);
        VectorField w = st.u - v;
        res.fit.v_hs1.push_back(std::sqrt(W.weighted_sq(v, W.w_s1)));
        res.fit.w_hs1.push_back(std::sqrt(W.weighted_sq(w, W.w_s1)));
    };

    {
        auto n0 = detail::measure(state.u, state.B, W);
        push_row(state, n0);
        B_hs0 = n0.B_hs;
        res.series.int_grad_u_sq.push_back(0);
        res.series.int_u_hse_sq.push_back(0);
        res.series.int_u_hs1.push_back(0);
        res.series.int_grad_u_hs.push_back(0);
        auto rhs0 = detail::mhd_rhs(state.u, state.B);
        fit_row(state, rhs0);
    }

    while (state.t < T * (1 - 1e-12)) {
        double dt;
        if (ctrl.dt_fixed > 0) {
            dt = ctrl.dt_fixed;
        } else {
            double speed = std::max({max_pointwise_magnitude(state.u),
                                     max_pointwise_magnitude(state.B), 1e-8});
            dt = std::min(ctrl.cfl * g.spacing() / speed, ctrl.dt_max);
        }
        dt = std::min(dt, T - state.t);

        MhdState mid;
        MhdState next = mhd_step(state, dt, &mid);

        auto n_lo = detail::measure(state.u, state.B, W);
        auto n_mid = detail::measure(mid.u, mid.B, W);
        auto n_hi = detail::measure(next.u, next.B, W);

        auto simpson = [&](double a, double m, double b) { return dt / 6.0 * (a + 4 * m + b); };
        NormSeries& ns = res.series;
        ns.int_grad_u_sq.push_back(ns.int_grad_u_sq.back() +
                                   simpson(n_lo.grad_u_l2 * n_lo.grad_u_l2,
                                           n_mid.grad_u_l2 * n_mid.grad_u_l2,
                                           n_hi.grad_u_l2 * n_hi.grad_u_l2));
        ns.int_u_hse_sq.push_back(ns.int_u_hse_sq.back() +
                                  simpson(n_lo.u_hse * n_lo.u_hse, n_mid.u_hse * n_mid.u_hse,
                                          n_hi.u_hse * n_hi.u_hse));
        ns.int_u_hs1.push_back(ns.int_u_hs1.back() + simpson(n_lo.u_hs1, n_mid.u_hs1, n_hi.u_hs1));
        ns.int_grad_u_hs.push_back(ns.int_grad_u_hs.back() +
                                   simpson(n_lo.grad_u_hs, n_mid.grad_u_hs, n_hi.grad_u_hs));

        state = std::move(next);
        push_row(state, n_hi);
        auto rhs = detail::mhd_rhs(state.u, state.B);
        fit_row(state, rhs);

        if (n_hi.B_hs > ctrl.blowup_factor * std::max(B_hs0, 1e-300)) {
            res.series.blew_up = true;
            break;
        }
    }

    // Trapezoid integrals of the fit quantities on the accepted-step grid,
    // plus a graded-mesh quadrature of the closed-form heat part.
    {
        FitSeries& ft = res.fit;
        for (std::size_t i = 0; i + 1 < ft.t.size(); ++i) {
            double h = ft.t[i + 1] - ft.t[i];
            ft.int_w_hs1 += 0.5 * h * (ft.w_hs1[i] + ft.w_hs1[i + 1]);
            ft.int_f_r += 0.5 * h *
                          (std::pow(ft.f_hsm1[i], ft.r) + std::pow(ft.f_hsm1[i + 1], ft.r));
            ft.int_B_2r += 0.5 * h *
                           (std::pow(res.series.B_hs[i], 2 * ft.r) +
                            std::pow(res.series.B_hs[i + 1], 2 * ft.r));
        }
        detail::ModeTable vt(u0[0]);
        for (int a = 1; a < u0.d(); ++a) {
            detail::ModeTable ta(u0[a]);
            vt.mass.insert(vt.mass.end(), ta.mass.begin(), ta.mass.end());
            vt.k2.insert(vt.k2.end(), ta.k2.begin(), ta.k2.end());
        }
        double Tend = res.series.t.back();
        if (Tend > 0) {
            GradedMesh gm = detail::smoothing_mesh(Tend, vt.max_k2());
            ft.int_v_hs1_exact = integrate_graded(
                [&](double t) { return std::sqrt(vt.sobolev_sq(t, s + 1)); }, gm);
        }
    }

    res.final_state = std::move(state);
    return res;
}

// ---------------------------------------------------------------------------
// Initial-data presets.
// ---------------------------------------------------------------------------
struct InitialData {
    VectorField u0;
    VectorField B0;
};

namespace detail {

template <class F>
SpectralField field_from_function(const Grid& g, const F& fn) {
    std::vector<Complex> phys(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t rem = i;
        std::array<double, 3> x{0, 0, 0};
        for (int a = g.d - 1; a >= 0; --a) {
            x[a] = g.spacing() * static_cast<double>(rem % g.n);
            rem /= g.n;
        }
        phys[i] = Complex(fn(x), 0.0);
    }
    auto f = SpectralField::from_physical(g, phys);
    f.symmetrize();
    return f;
}

}  // namespace detail

inline InitialData make_initial_data(const Grid& g, const std::string& preset, double amplitude,
                                     int kmax, std::uint64_t seed) {
    const double invL = 1.0 / g.L;
    if (preset == "orszag-tang-2d") {
        if (g.d != 2) throw std::invalid_argument("orszag-tang-2d preset requires d=2");
        VectorField u(g, true), B(g, true);
        u[0] = detail::field_from_function(g, [&](auto& x) { return -amplitude * std::sin(invL * x[1]); });
        u[1] = detail::field_from_function(g, [&](auto& x) { return amplitude * std::sin(invL * x[0]); });
        B[0] = detail::field_from_function(g, [&](auto& x) { return -amplitude * std::sin(2 * invL * x[1]); });
        B[1] = detail::field_from_function(g, [&](auto& x) { return amplitude * std::sin(invL * x[0]); });
        u.divergence_free = B.divergence_free = true;
        return {u, B};
    }
    if (preset == "taylor-green-2d") {
        if (g.d != 2) throw std::invalid_argument("taylor-green-2d preset requires d=2");
        VectorField u(g, true), B(g, true);
        u[0] = detail::field_from_function(
            g, [&](auto& x) { return amplitude * std::sin(invL * x[0]) * std::cos(invL * x[1]); });
        u[1] = detail::field_from_function(
            g, [&](auto& x) { return -amplitude * std::cos(invL * x[0]) * std::sin(invL * x[1]); });
        u.divergence_free = B.divergence_free = true;
        return {u, B};
    }
    if (preset == "random") {
        Rng rng(seed);
        VectorField u = random_divergence_free_field(g, kmax, rng, 2.0);
        VectorField B = random_divergence_free_field(g, kmax, rng, 2.0);
        u *= amplitude;
        B *= amplitude;
        u.divergence_free = B.divergence_free = true;
        return {u, B};
    }
    if (preset == "zero") {
        return {VectorField(g, true), VectorField(g, true)};
    }
    throw std::invalid_argument("unknown initial-data preset: " + preset);
}

}  // namespace mhdlab
