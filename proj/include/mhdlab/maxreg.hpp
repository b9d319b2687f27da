#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mhdlab/heat.hpp"
#include "mhdlab/ops.hpp"
#include "mhdlab/quadrature.hpp"
#include "mhdlab/report.hpp"

namespace mhdlab {

// Time-sampled forcing, linearly interpolated between samples. Components are
// arbitrary (1 for scalar forcings, d for vector ones).
struct ForcingTrace {
    std::vector<double> times;
    std::vector<std::vector<SpectralField>> samples;  // samples[i][comp]

    void validate() const {
        if (times.empty() || samples.size() != times.size())
            throw std::invalid_argument("ForcingTrace: empty or inconsistent trace");
        if (times.front() != 0.0)
            throw std::invalid_argument("ForcingTrace: times must start at 0");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("ForcingTrace: times must be strictly increasing");
        const Grid& g = grid();
        for (const auto& snap : samples) {
            if (snap.size() != samples.front().size())
                throw std::invalid_argument("ForcingTrace: component count varies");
            for (const auto& f : snap)
                if (f.grid != g) throw GridMismatch("ForcingTrace: grid varies across samples");
        }
    }

    const Grid& grid() const { return samples.front().front().grid; }
    std::size_t ncomp() const { return samples.front().size(); }
    double horizon() const { return times.back(); }

    std::vector<SpectralField> interpolate(double t) const {
        std::size_t i = segment_of(t);
        double h = times[i + 1] - times[i];
        double w = (t - times[i]) / h;
        std::vector<SpectralField> out;
        for (std::size_t c = 0; c < ncomp(); ++c) {
            SpectralField f(grid());
            for (std::size_t m = 0; m < f.size(); ++m)
                f.coeffs[m] = (1 - w) * samples[i][c].coeffs[m] + w * samples[i + 1][c].coeffs[m];
            out.push_back(std::move(f));
        }
        return out;
    }

    std::size_t segment_of(double t) const {
        if (t < times.front() || t > times.back() * (1 + 1e-12))
            throw std::invalid_argument("ForcingTrace: time outside trace");
        std::size_t i = 0;
        while (i + 2 < times.size() && t >= times[i + 1]) ++i;
        return i;
    }

    static ForcingTrace from_vector_fields(std::vector<double> ts, std::vector<VectorField> vfs) {
        ForcingTrace tr;
        tr.times = std::move(ts);
        for (auto& v : vfs) tr.samples.push_back(std::move(v.comp));
        tr.validate();
        return tr;
    }
};

namespace detail {

// Exact integral of e^{-k2 (tau - sigma)} (fa + sigma * slope) over [0, tau].
// Series branches guard the small-z cancellations.
inline Complex duhamel_segment(Complex fa, Complex slope, double k2, double tau) {
    if (k2 == 0.0) return fa * tau + slope * (0.5 * tau * tau);
    double z = k2 * tau;
    double e1 = -std::expm1(-z) / k2;  // int e^{-k2(tau-sigma)} dsigma
    double e2;                          // int sigma e^{-k2(tau-sigma)} dsigma
    if (z < 1e-4) {
        e2 = tau * tau * (0.5 - z / 6.0 + z * z / 24.0);
    } else {
        e2 = (tau - e1) / k2;
    }
    return fa * e1 + slope * e2;
}

}  // namespace detail

// Zero-initial-data Duhamel solution of du/dt + |k|^2 u = f with f the
// piecewise-linear interpolant of the trace; each segment is integrated
// exactly against the exponential kernel, so the only approximation is the
// interpolation of f itself.
class DuhamelEvaluator {
  public:
    explicit DuhamelEvaluator(ForcingTrace trace) : f_(std::move(trace)) {
        f_.validate();
        const Grid& g = f_.grid();
        std::size_t nc = f_.ncomp();
        w_.assign(f_.times.size(), {});
        w_[0].assign(nc, SpectralField(g));
        for (std::size_t i = 0; i + 1 < f_.times.size(); ++i) {
            double h = f_.times[i + 1] - f_.times[i];
            w_[i + 1].assign(nc, SpectralField(g));
            for (std::size_t c = 0; c < nc; ++c) {
                for (std::size_t m = 0; m < g.size(); ++m) {
                    double k2 = g.k_squared(m);
                    Complex fa = f_.samples[i][c].coeffs[m];
                    Complex slope = (f_.samples[i + 1][c].coeffs[m] - fa) / h;
                    w_[i + 1][c].coeffs[m] = std::exp(-k2 * h) * w_[i][c].coeffs[m] +
                                             detail::duhamel_segment(fa, slope, k2, h);
                }
            }
        }
    }

    const ForcingTrace& forcing() const { return f_; }

    // Solution at an arbitrary time in [0, T].
    std::vector<SpectralField> solution_at(double t) const {
        std::size_t i = f_.segment_of(t);
        const Grid& g = f_.grid();
        double tau = t - f_.times[i];
        double h = f_.times[i + 1] - f_.times[i];
        std::vector<SpectralField> out;
        for (std::size_t c = 0; c < f_.ncomp(); ++c) {
            SpectralField u(g);
            for (std::size_t m = 0; m < g.size(); ++m) {
                double k2 = g.k_squared(m);
                Complex fa = f_.samples[i][c].coeffs[m];
                Complex slope = (f_.samples[i + 1][c].coeffs[m] - fa) / h;
                u.coeffs[m] = std::exp(-k2 * tau) * w_[i][c].coeffs[m] +
                              detail::duhamel_segment(fa, slope, k2, tau);
            }
            out.push_back(std::move(u));
        }
        return out;
    }

    ForcingTrace solution_trace() const {
        ForcingTrace tr;
        tr.times = f_.times;
        tr.samples = w_;
        return tr;
    }

  private:
    ForcingTrace f_;
    std::vector<std::vector<SpectralField>> w_;
};

inline ForcingTrace duhamel_solve(const ForcingTrace& f) {
    return DuhamelEvaluator(f).solution_trace();
}

namespace detail {

inline double multi_norm_sq(const std::vector<SpectralField>& comps,
                            double (*norm)(const SpectralField&, double), double s) {
    double acc = 0;
    for (const auto& f : comps) {
        double n = norm(f, s);
        acc += n * n;
    }
    return acc;
}

// Composite Gauss-Legendre over the trace's own segments.
template <class F>
double integrate_segments(const std::vector<double>& times, const F& fn) {
    double acc = 0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) acc += gauss8(fn, times[i], times[i + 1]);
    return acc;
}

}  // namespace detail

struct MaxRegReport {
    double r = 0, s = 0, T = 0;
    double lhs = 0;       // ||u||_{L^r(0,T; dot H^{s+2})}
    double rhs = 0;       // ||f||_{L^r(0,T; H^s)}
    double ratio = 0;
    double l2_inhom = 0;  // ||u||_{L^2 L^2} / ||f||_{L^2 L^2}, bounded by e^T
};

// Measures both sides of the L^r maximal-regularity estimate by quadrature.
inline MaxRegReport maxreg_ratio(const ForcingTrace& f, double s, double r) {
    if (!(r > 1)) throw std::invalid_argument("maxreg_ratio: require r > 1");
    if (s < 0) throw std::invalid_argument("maxreg_ratio: require s >= 0");
    f.validate();
    double T = f.horizon();
    if (!(T <= 1)) throw std::invalid_argument("maxreg_ratio: require T <= 1");

    DuhamelEvaluator ev(f);
    auto u_norm = [&](double t, double order) {
        return std::sqrt(detail::multi_norm_sq(ev.solution_at(t),
                                               static_cast<double (*)(const SpectralField&, double)>(
                                                   &homogeneous_norm),
                                               order));
    };
    auto f_norm = [&](double t, double order) {
        return std::sqrt(detail::multi_norm_sq(f.interpolate(t),
                                               static_cast<double (*)(const SpectralField&, double)>(
                                                   &sobolev_norm),
                                               order));
    };

    MaxRegReport rep;
    rep.r = r;
    rep.s = s;
    rep.T = T;
    rep.lhs = std::pow(
        detail::integrate_segments(f.times, [&](double t) { return std::pow(u_norm(t, s + 2), r); }),
        1.0 / r);
    rep.rhs = std::pow(
        detail::integrate_segments(f.times, [&](double t) { return std::pow(f_norm(t, s), r); }),
        1.0 / r);
    rep.ratio = rep.lhs / std::max(rep.rhs, 1e-300);

    double u_l2 = std::sqrt(detail::integrate_segments(
        f.times, [&](double t) { double v = u_norm(t, 0.0); return v * v; }));
    double f_l2 = std::sqrt(detail::integrate_segments(
        f.times, [&](double t) { double v = f_norm(t, 0.0); return v * v; }));
    rep.l2_inhom = u_l2 / std::max(f_l2, 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// Stokes problem with nonzero divergence-free initial data: u = v + w with
// v the heat evolution of u0 and w the Duhamel solution of the projected
// forcing. Measures the L^1(0,T; H^{s+1}) estimate and reports the fitted
// prefactors of its two branches.
// ---------------------------------------------------------------------------
struct StokesReport {
    double s = 0, eps = 0, r = 0, T = 0;
    double lhs = 0;           // int_0^T ||u||_{H^{s+1}}
    double term_ic = 0;       // T^{eps/2} ||u0||_{H^{s-1+eps}}
    double term_forcing = 0;  // T^{1-1/r} ||f||_{L^r(0,T; H^{s-1})}
    double c_eps_fit = 0;     // int ||v||_{H^{s+1}} / term_ic
    double c_r_fit = 0;       // int ||w||_{H^{s+1}} / term_forcing
    double int_v = 0, int_w = 0;
    double holder_margin = 0;      // Hoelder product bound minus int ||v||_{H^{s+1}}
    double interp_margin = 0;      // pointwise interpolation bound integral minus int ||v||
};

inline StokesReport stokes_ic_estimate(const VectorField& u0, const ForcingTrace& f, double s,
                                       double eps, double r) {
    if (!(s > 1)) throw std::invalid_argument("stokes_ic_estimate: require s > 1");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("stokes_ic_estimate: require eps in (0,1)");
    if (!(r > 1)) throw std::invalid_argument("stokes_ic_estimate: require r > 1");
    if (divergence_defect(u0) > 1e-10)
        throw std::invalid_argument("stokes_ic_estimate: u0 is not divergence-free");
    f.validate();
    double T = f.horizon();
    if (!(T <= 1)) throw std::invalid_argument("stokes_ic_estimate: require T <= 1");

    // Projected pieces, exactly as the splitting argument does.
    VectorField pu0 = leray_project(u0);
    ForcingTrace pf = f;
    for (auto& snap : pf.samples) {
        VectorField v(snap, false);
        snap = leray_project(v).comp;
    }
    DuhamelEvaluator ev(pf);

    // Combined mode table over all components of u0 (norms add in squares).
    detail::ModeTable vtab(pu0[0]);
    for (int a = 1; a < pu0.d(); ++a) {
        detail::ModeTable ta(pu0[a]);
        vtab.mass.insert(vtab.mass.end(), ta.mass.begin(), ta.mass.end());
        vtab.k2.insert(vtab.k2.end(), ta.k2.begin(), ta.k2.end());
    }

    auto v_norm = [&](double t, double order) { return std::sqrt(vtab.sobolev_sq(t, order)); };
    auto w_fields = [&](double t) { return ev.solution_at(t); };
    auto w_norm = [&](double t, double order) {
        return std::sqrt(detail::multi_norm_sq(
            w_fields(t),
            static_cast<double (*)(const SpectralField&, double)>(&sobolev_norm), order));
    };
    auto u_norm = [&](double t, double order) {
        auto w = w_fields(t);
        double acc = 0;
        for (int a = 0; a < pu0.d(); ++a) {
            SpectralField uc = w[a];
            for (std::size_t m = 0; m < uc.size(); ++m)
                uc.coeffs[m] += std::exp(-uc.grid.k_squared(m) * t) * pu0[a].coeffs[m];
            double n = sobolev_norm(uc, order);
            acc += n * n;
        }
        return std::sqrt(acc);
    };
    auto f_norm = [&](double t, double order) {
        return std::sqrt(detail::multi_norm_sq(
            f.interpolate(t),
            static_cast<double (*)(const SpectralField&, double)>(&sobolev_norm), order));
    };

    // The heat part is sharply peaked near t = 0; integrate it (and u, which
    // contains it) on a graded mesh. The Duhamel part vanishes at 0.
    GradedMesh gm = detail::smoothing_mesh(T, vtab.max_k2());
    auto graded_plus_segments = [&](auto&& fn) {
        GradedMesh m = gm;
        for (double t : f.times)
            if (t > 0 && t < T) m.breaks.push_back(t);
        std::sort(m.breaks.begin(), m.breaks.end());
        return integrate_graded(fn, m);
    };

    StokesReport rep;
    rep.s = s;
    rep.eps = eps;
    rep.r = r;
    rep.T = T;
    rep.int_v = integrate_graded([&](double t) { return v_norm(t, s + 1); }, gm);
    rep.int_w = graded_plus_segments([&](double t) { return w_norm(t, s + 1); });
    rep.lhs = graded_plus_segments([&](double t) { return u_norm(t, s + 1); });

    rep.term_ic = std::pow(T, 0.5 * eps) * std::sqrt(vtab.sobolev_sq(0.0, s - 1 + eps));
    double f_lr = std::pow(
        detail::integrate_segments(f.times,
                                   [&](double t) { return std::pow(f_norm(t, s - 1), r); }),
        1.0 / r);
    rep.term_forcing = std::pow(T, 1.0 - 1.0 / r) * f_lr;
    rep.c_eps_fit = rep.int_v / std::max(rep.term_ic, 1e-300);
    rep.c_r_fit = rep.int_w / std::max(rep.term_forcing, 1e-300);

    // Interpolation step: int ||v||_{H^{s+1}} <= int ||v||_{H^{s+1+eps}}^{1-eps} ||v||_{H^{s+eps}}^{eps}
    // <= (int ||v||_{H^{s+1+eps}}^{2(1-eps)/(2-eps)})^{(2-eps)/2} (int ||v||_{H^{s+eps}}^2)^{eps/2}.
    double interp_int = integrate_graded(
        [&](double t) {
            return std::pow(v_norm(t, s + 1 + eps), 1 - eps) * std::pow(v_norm(t, s + eps), eps);
        },
        gm);
    double hold_a = integrate_graded(
        [&](double t) { return std::pow(v_norm(t, s + 1 + eps), 2 * (1 - eps) / (2 - eps)); }, gm);
    double hold_b = integrate_graded(
        [&](double t) { double v = v_norm(t, s + eps); return v * v; }, gm);
    rep.interp_margin = interp_int - rep.int_v;
    rep.holder_margin =
        std::pow(hold_a, 0.5 * (2 - eps)) * std::pow(hold_b, 0.5 * eps) - interp_int;
    return rep;
}

}  // namespace mhdlab
