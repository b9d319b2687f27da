#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "mhdlab/constants.hpp"
#include "mhdlab/ops.hpp"
#include "mhdlab/random.hpp"

namespace mhdlab {

// sqrt(sum_{a,b} ||d_b v_a||_{H^s}^2): the gradient Sobolev norm used on the
// right-hand side of the B estimates.
inline double grad_sobolev_norm(const VectorField& v, double s) {
    double acc = 0;
    for (int a = 0; a < v.d(); ++a)
        for (int b = 0; b < v.grid().d; ++b) {
            double n = sobolev_norm(derivative(v[a], b), s);
            acc += n * n;
        }
    return std::sqrt(acc);
}

inline double grad_l2_norm(const VectorField& v) {
    double acc = 0;
    for (int a = 0; a < v.d(); ++a) {
        double n = homogeneous_norm(v[a], 1.0);
        acc += n * n;
    }
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Sobolev interpolation: ||f||_{H^s} <= ||f||_{H^{s0}}^{1-theta} ||f||_{H^{s1}}^{theta}
// with s = (1-theta) s0 + theta s1. Exact Hoelder on the Fourier side for the
// homogeneous norms; the inhomogeneous ratio is reported as measured.
// ---------------------------------------------------------------------------
struct InterpolationResult {
    double theta = 0;
    double hom_ratio = 0;
    double inhom_ratio = 0;
};

inline InterpolationResult interpolation_check(const SpectralField& f, double s0, double s, double s1) {
    if (!(s0 < s && s < s1)) throw std::invalid_argument("interpolation_check: require s0 < s < s1");
    InterpolationResult r;
    r.theta = (s - s0) / (s1 - s0);
    double h0 = homogeneous_norm(f, s0), h1 = homogeneous_norm(f, s1), hm = homogeneous_norm(f, s);
    double denom_h = std::pow(h0, 1 - r.theta) * std::pow(h1, r.theta);
    r.hom_ratio = (denom_h > 0) ? hm / denom_h : 0.0;
    double i0 = sobolev_norm(f, s0), i1 = sobolev_norm(f, s1), im = sobolev_norm(f, s);
    double denom_i = std::pow(i0, 1 - r.theta) * std::pow(i1, r.theta);
    r.inhom_ratio = (denom_i > 0) ? im / denom_i : 0.0;
    return r;
}

// Alias-free pointwise product; requires both factors band-limited to < n/4.
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
    f.check_grid(g);
    auto fp = f.to_physical();
    auto gp = g.to_physical();
    for (std::size_t i = 0; i < fp.size(); ++i) fp[i] *= gp[i];
    return SpectralField::from_physical(f.grid, fp);
}

// Ensemble max of ||fg||_{H^s} / (||f||_{H^s} ||g||_{H^s}) over random real
// band-limited pairs: an empirical lower bound for the algebra constant.
inline double algebra_constant_estimate(const Grid& g, double s, int count, Rng& rng) {
    if (!(s > 0.5 * g.d)) throw std::invalid_argument("algebra_constant_estimate: require s > d/2");
    int m_max = g.n / 4 - 1;
    if (m_max < 1) throw std::invalid_argument("algebra_constant_estimate: grid too small");
    double best = 0;
    for (int i = 0; i < count; ++i) {
        SpectralField f = random_band_limited(g, m_max, rng);
        SpectralField h = random_band_limited(g, m_max, rng);
        double ratio = sobolev_norm(pointwise_product(f, h), s) /
                       (sobolev_norm(f, s) * sobolev_norm(h, s));
        best = std::max(best, ratio);
    }
    return best;
}

// |<Lambda^s (u.grad B), Lambda^s B>| / (c ||grad u||_{H^s} ||B||_{H^s}^2).
inline double commutator_estimate_check(const VectorField& u, const VectorField& B, double s) {
    if (!(s > 0.5 * u.grid().d))
        throw std::invalid_argument("commutator_estimate_check: require s > d/2");
    if (divergence_defect(u) > 1e-10)
        throw std::invalid_argument("commutator_estimate_check: u is not divergence-free");
    double lhs = 0;
    for (int a = 0; a < B.d(); ++a)
        lhs += inner_product(lambda_pow(advect(u, B[a]), s), lambda_pow(dealias(B[a]), s));
    lhs = std::abs(lhs);
    double bhs = sobolev_norm(B, s);
    double rhs = grad_sobolev_norm(u, s) * bhs * bhs;
    if (rhs == 0) return 0;
    return lhs / rhs;
}

// Reciprocal sum of the three-term Young exponents (1+e, 2(1+e)/(e(1-e)), 2/e);
// must equal 1 for every eps in (0,1).
inline double young_exponents_reciprocal_sum(double eps) {
    return 1.0 / (1.0 + eps) + eps * (1.0 - eps) / (2.0 * (1.0 + eps)) + 0.5 * eps;
}

// ---------------------------------------------------------------------------
// The comparison ODE Y' = c1 Y^{(1+eps)/eps} + M2, Y(0) = M1^2, and its
// closed-form majorant.
// ---------------------------------------------------------------------------
struct OdeParams {
    double eps = 0.5;
    double c1 = 0;
    double M1 = 0;
    double M2 = 0;
    double T = 1.0;

    void validate() const {
        if (!(eps > 0 && eps < 1)) throw std::invalid_argument("OdeParams: eps must lie in (0,1)");
        if (c1 < 0 || M1 < 0 || M2 < 0 || !(T > 0))
            throw std::invalid_argument("OdeParams: constants must be nonnegative, T positive");
    }

    double p_exponent() const { return (1.0 + eps) / eps; }
};

// (M1^2 + t M2) (1 - c1 t (M1^2 + t M2)^{1/eps} / eps)^{-eps}.
inline double ode_comparison_bound(const OdeParams& p, double t) {
    p.validate();
    double base = p.M1 * p.M1 + t * p.M2;
    double bracket = 1.0 - p.c1 * t * std::pow(base, 1.0 / p.eps) / p.eps;
    if (!(bracket > 0)) throw BeyondComparisonHorizon(t);
    return base * std::pow(bracket, -p.eps);
}

// First time the comparison bracket reaches zero (infinity when c1 = 0).
inline double comparison_horizon(const OdeParams& p) {
    p.validate();
    if (p.c1 == 0) return std::numeric_limits<double>::infinity();
    auto bracket = [&](double t) {
        return 1.0 - p.c1 * t * std::pow(p.M1 * p.M1 + t * p.M2, 1.0 / p.eps) / p.eps;
    };
    double hi = 1.0;
    while (bracket(hi) > 0) {
        hi *= 2;
        if (hi > 1e18) return std::numeric_limits<double>::infinity();
    }
    double lo = 0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (bracket(mid) > 0 ? lo : hi) = mid;
    }
    return lo;
}

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<double> values;
    bool blew_up = false;
    double blow_up_time = 0;
};

// Adaptive Dormand-Prince 5(4) integration, stopping before blow-up.
inline OdeTrajectory ode_integrate(const OdeParams& p, double dt0, double rtol = 1e-12,
                                   double atol = 1e-14, double y_max = 1e12) {
    p.validate();
    if (!(dt0 > 0)) throw std::invalid_argument("ode_integrate: dt must be positive");
    auto rhs = [&](double y) { return p.c1 * std::pow(y, p.p_exponent()) + p.M2; };

    OdeTrajectory traj;
    double t = 0, y = p.M1 * p.M1, h = dt0;
    traj.times.push_back(t);
    traj.values.push_back(y);

    while (t < p.T) {
        h = std::min(h, p.T - t);
        double k1 = rhs(y);
        double k2 = rhs(y + h * (k1 / 5));
        double k3 = rhs(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
        double k4 = rhs(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
        double k5 = rhs(y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                                 212.0 / 729 * k4));
        double k6 = rhs(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                                 49.0 / 176 * k4 - 5103.0 / 18656 * k5));
        double y5 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                             2187.0 / 6784 * k5 + 11.0 / 84 * k6);
        double k7 = rhs(y5);
        double y4 = y + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 + 393.0 / 640 * k4 -
                             92097.0 / 339200 * k5 + 187.0 / 2100 * k6 + k7 / 40);
        double err = std::abs(y5 - y4) / (atol + rtol * std::max(std::abs(y), std::abs(y5)));
        if (err <= 1.0 || h < 1e-16 * std::max(1.0, t)) {
            t += h;
            y = y5;
            traj.times.push_back(t);
            traj.values.push_back(y);
            if (!std::isfinite(y) || y > y_max) {
                traj.blew_up = true;
                traj.blow_up_time = t;
                break;
            }
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Existence time from the two bootstrap conditions. Both left sides are
// continuous and increasing in T with T -> 0 limits strictly inside the
// admissible region, so each threshold is found by bisection on (0, 1].
// ---------------------------------------------------------------------------
inline double tstar2_lhs(const MhdConstants& k, double s, double eps, double T) {
    double inner = std::pow(2.0, 2 * (s + eps) / s) * T * std::pow(k.b0_hs, 2 * (s + eps) / s) +
                   k.c5 * std::pow(k.M0, eps / s) *
                       (k.c1 * T * std::pow(2 * (k.M1 * k.M1 + T * k.M2), (1 + eps) / eps) +
                        T * k.M2);
    return k.C_eps * std::pow(T, 0.5 * eps) * k.M1 +
           k.C_eps * std::pow(T, eps / (s + eps)) * std::pow(inner, s / (s + eps));
}

inline double existence_time(const MhdConstants& k, double s, double eps) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("existence_time: eps must lie in (0,1)");
    k.validate();

    auto bisect_threshold = [](auto&& ok, double cap) {
        // ok(T) holds near 0 and is monotone; returns the largest T <= cap with ok.
        if (ok(cap)) return cap;
        double lo = 0, hi = cap;
        while (hi - lo > 1e-10) {
            double mid = 0.5 * (lo + hi);
            (ok(mid) ? lo : hi) = mid;
        }
        return lo;
    };

    double limit1 = 1.0 - std::pow(2.0, -1.0 / eps);
    auto cond1 = [&](double T) {
        return k.c1 * T * std::pow(k.M1 * k.M1 + T * k.M2, 1.0 / eps) / eps < limit1;
    };
    double T1 = (k.c1 == 0) ? 1.0 : bisect_threshold(cond1, 1.0);

    double T2 = 1.0;
    if (k.c4 > 0) {
        double bound2 = std::log(4.0) / (2.0 * k.c4);
        auto cond2 = [&](double T) { return tstar2_lhs(k, s, eps, T) < bound2; };
        if (!cond2(1e-12))
            throw std::invalid_argument("existence_time: no positive T* (degenerate constants)");
        T2 = bisect_threshold(cond2, 1.0);
    }
    double tstar = std::min(T1, T2);
    if (!(tstar > 0)) throw std::invalid_argument("existence_time: no positive T*");
    return tstar;
}

}  // namespace mhdlab
