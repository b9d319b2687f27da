#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "mhdlab/errors.hpp"

namespace mhdlab {
namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> gk_wk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> gk_wg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
    double value;
    double error;
};

template <class F>
GkResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double resk = 0, resg = 0;
    for (int i = 0; i < 8; ++i) {
        double fv;
        if (i == 7) {
            fv = f(c);
            resk += gk_wk[7] * fv;
            resg += gk_wg[3] * fv;
        } else {
            double f1 = f(c - h * gk_nodes[i]);
            double f2 = f(c + h * gk_nodes[i]);
            resk += gk_wk[i] * (f1 + f2);
            if (i % 2 == 1) resg += gk_wg[i / 2] * (f1 + f2);
        }
    }
    return {h * resk, std::abs(h * (resk - resg))};
}

template <class F>
double adaptive_impl(const F& f, double a, double b, double tol, int depth) {
    auto r = gk15(f, a, b);
    if (r.error <= tol || depth > 60) {
        if (depth > 60 && r.error > 100 * tol)
            throw QuadratureFailure("adaptive quadrature failed to converge");
        return r.value;
    }
    double m = 0.5 * (a + b);
    return adaptive_impl(f, a, m, 0.5 * tol, depth + 1) +
           adaptive_impl(f, m, b, 0.5 * tol, depth + 1);
}

// 8-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 4> gl8_x = {
    0.183434642495650, 0.525532409916329, 0.796666477413627, 0.960289856497536};
inline constexpr std::array<double, 4> gl8_w = {
    0.362683783378362, 0.313706645877887, 0.222381034453374, 0.101228536290376};

}  // namespace detail

// Adaptive Gauss-Kronrod integration with an absolute tolerance.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol) {
    if (a == b) return 0;
    return detail::adaptive_impl(f, a, b, abs_tol, 0);
}

// Fixed 8-point Gauss-Legendre on one interval.
template <class F>
double gauss8(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 4; ++i)
        s += detail::gl8_w[i] * (f(c - h * detail::gl8_x[i]) + f(c + h * detail::gl8_x[i]));
    return h * s;
}

// Geometrically graded breakpoints a = b/ratio^m < ... < b (plus the leading
// [0, a] interval when from_zero). Resolves the t ~ 0 layer of heat-kernel
// time integrals.
struct GradedMesh {
    std::vector<double> breaks;

    static GradedMesh refine_towards_zero(double T, int levels, double ratio = 2.0) {
        GradedMesh m;
        m.breaks.push_back(0.0);
        for (int j = levels; j >= 0; --j) m.breaks.push_back(T / std::pow(ratio, j));
        return m;
    }

    static GradedMesh between(double t_min, double T, double ratio = 2.0) {
        GradedMesh m;
        std::vector<double> rev;
        double t = T;
        while (t > t_min * (1 + 1e-12)) {
            rev.push_back(t);
            t /= ratio;
        }
        m.breaks.push_back(t_min);
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) m.breaks.push_back(*it);
        return m;
    }
};

// Composite Gauss-Legendre over a graded mesh.
template <class F>
double integrate_graded(const F& f, const GradedMesh& mesh) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < mesh.breaks.size(); ++i)
        s += gauss8(f, mesh.breaks[i], mesh.breaks[i + 1]);
    return s;
}

}  // namespace mhdlab
