#include <catch2/catch_amalgamated.hpp>

#include "mhdlab/experiments.hpp"
#include "mhdlab/maxreg.hpp"
#include "mhdlab/random.hpp"

using namespace mhdlab;

namespace {

ForcingTrace constant_mode_forcing(const Grid& g, std::array<int, 3> m, double T, int ntimes) {
    ForcingTrace tr;
    for (int i = 0; i < ntimes; ++i) {
        SpectralField f(g);
        f.coeffs[g.index_of(m)] = 1.0;
        f.coeffs[g.index_of({-m[0], -m[1], -m[2]})] = 1.0;
        tr.times.push_back(T * i / (ntimes - 1.0));
        tr.samples.push_back({f});
    }
    tr.validate();
    return tr;
}

}  // namespace

TEST_CASE("forcing trace validation") {
    Grid g(2, 16, 1.0);
    ForcingTrace tr;
    REQUIRE_THROWS_AS(tr.validate(), std::invalid_argument);
    tr.times = {0.1, 0.2};
    tr.samples = {{SpectralField(g)}, {SpectralField(g)}};
    REQUIRE_THROWS_AS(tr.validate(), std::invalid_argument);  // must start at 0
    tr.times = {0.0, 0.0};
    REQUIRE_THROWS_AS(tr.validate(), std::invalid_argument);  // strictly increasing
    tr.times = {0.0, 0.2};
    REQUIRE_NOTHROW(tr.validate());
}

TEST_CASE("duhamel solve") {
    Grid g(2, 16, 1.0);

    SECTION("zero forcing gives the zero solution") {
        ForcingTrace tr;
        tr.times = {0.0, 0.5, 1.0};
        tr.samples.assign(3, {SpectralField(g)});
        auto sol = duhamel_solve(tr);
        for (const auto& snap : sol.samples) REQUIRE(snap[0].max_coeff() == 0.0);
    }

    SECTION("constant single-mode forcing: u(t) = (1 - e^{-k^2 t})/k^2") {
        std::array<int, 3> m{2, 1, 0};
        Grid gg(2, 16, 1.0);
        double k2 = gg.k_squared(gg.index_of(m));
        auto tr = constant_mode_forcing(gg, m, 1.0, 5);
        DuhamelEvaluator ev(tr);
        for (double t : {0.13, 0.5, 0.77, 1.0}) {
            auto u = ev.solution_at(t);
            Complex expected{-std::expm1(-k2 * t) / k2, 0.0};
            REQUIRE(std::abs(u[0].coeffs[gg.index_of(m)] - expected) <= 1e-13);
        }
    }

    SECTION("steady state of the mode ODE: u -> f/k^2 for large t") {
        std::array<int, 3> m{3, 0, 0};
        Grid gg(2, 16, 1.0);
        double k2 = gg.k_squared(gg.index_of(m));
        ForcingTrace tr;
        for (int i = 0; i <= 10; ++i) {
            SpectralField f(gg);
            f.coeffs[gg.index_of(m)] = 1.0;
            f.coeffs[gg.index_of({-3, 0, 0})] = 1.0;
            tr.times.push_back(3.0 * i);
            tr.samples.push_back({f});
        }
        auto u = DuhamelEvaluator(tr).solution_at(30.0);
        REQUIRE(std::abs(u[0].coeffs[gg.index_of(m)] - Complex{1.0 / k2, 0.0}) <= 1e-12);
    }

    SECTION("mode ODE residual by finite differences at interior times") {
        Rng rng(41);
        auto tr = random_scalar_trace(g, 1.0, 9, 4, rng);
        DuhamelEvaluator ev(tr);
        double h = 1e-6;
        for (double t : {0.3, 0.55, 0.8}) {
            auto up = ev.solution_at(t + h);
            auto um = ev.solution_at(t - h);
            auto uc = ev.solution_at(t);
            auto fc = tr.interpolate(t);
            double worst = 0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                Complex dudt = (up[0].coeffs[i] - um[0].coeffs[i]) / (2 * h);
                Complex res = dudt + g.k_squared(i) * uc[0].coeffs[i] - fc[0].coeffs[i];
                worst = std::max(worst, std::abs(res));
            }
            REQUIRE(worst <= 1e-4);  // central-difference truncation dominates
        }
    }

    SECTION("Leray projection commutes with duhamel_solve to 1e-12") {
        Rng rng(43);
        ForcingTrace tr;
        for (int i = 0; i < 5; ++i) {
            tr.times.push_back(0.25 * i);
            tr.samples.push_back(random_vector_field(g, 4, rng).comp);
        }
        tr.validate();
        // project then solve
        ForcingTrace ptr = tr;
        for (auto& snap : ptr.samples) snap = leray_project(VectorField(snap)).comp;
        auto sol_a = duhamel_solve(ptr);
        // solve then project
        auto sol_b = duhamel_solve(tr);
        double worst = 0;
        for (std::size_t i = 0; i < sol_b.times.size(); ++i) {
            auto proj = leray_project(VectorField(sol_b.samples[i])).comp;
            for (int a = 0; a < 2; ++a)
                for (std::size_t k = 0; k < g.size(); ++k)
                    worst = std::max(worst,
                                     std::abs(proj[a].coeffs[k] - sol_a.samples[i][a].coeffs[k]));
        }
        REQUIRE(worst <= 1e-12);
    }
}

TEST_CASE("maximal regularity ratios") {
    Grid g(2, 32, 1.0);

    SECTION("r=2 single-mode constant forcing: ratio <= 1") {
        auto tr = constant_mode_forcing(g, {1, 1, 0}, 1.0, 9);
        auto rep = maxreg_ratio(tr, 1.0, 2.0);
        REQUIRE(rep.ratio <= 1.0 + 1e-9);
        REQUIRE(rep.l2_inhom <= std::exp(rep.T) + 1e-9);
    }

    SECTION("r=2 random ensemble: ratio <= 1 + 1e-6, l2 ratio <= e^T + 1e-6") {
        Rng rng(47);
        for (int trial = 0; trial < 20; ++trial) {
            auto tr = random_scalar_trace(g, 1.0, 9, 8, rng);
            auto rep = maxreg_ratio(tr, 1.0, 2.0);
            REQUIRE(rep.ratio <= 1.0 + 1e-6);
            REQUIRE(rep.l2_inhom <= std::exp(1.0) + 1e-6);
        }
    }

    SECTION("r != 2: ratio finite, recorded as empirical C_r") {
        Rng rng(53);
        auto tr = random_scalar_trace(g, 1.0, 9, 8, rng);
        for (double r : {1.25, 1.5, 3.0, 4.0}) {
            auto rep = maxreg_ratio(tr, 1.0, r);
            REQUIRE(std::isfinite(rep.ratio));
            REQUIRE(rep.ratio > 0);
        }
    }

    SECTION("r <= 1 and T > 1 rejected") {
        Rng rng(59);
        auto tr = random_scalar_trace(g, 1.0, 5, 4, rng);
        REQUIRE_THROWS_AS(maxreg_ratio(tr, 1.0, 1.0), std::invalid_argument);
        auto long_tr = random_scalar_trace(g, 2.0, 5, 4, rng);
        REQUIRE_THROWS_AS(maxreg_ratio(long_tr, 1.0, 2.0), std::invalid_argument);
    }
}

TEST_CASE("stokes estimate with initial data") {
    Grid g(2, 32, 1.0);
    Rng rng(61);
    double s = 1.5, eps = 0.5, r = (s + eps) / s, T = 0.5;

    auto make_forcing = [&](bool zero) {
        ForcingTrace tr;
        for (int i = 0; i < 9; ++i) {
            tr.times.push_back(T * i / 8.0);
            tr.samples.push_back(zero ? VectorField(g).comp
                                      : random_vector_field(g, 6, rng).comp);
        }
        tr.validate();
        return tr;
    };

    SECTION("f = 0: LHS reduces to the pure heat part") {
        VectorField u0 = random_divergence_free_field(g, 6, rng);
        auto rep = stokes_ic_estimate(u0, make_forcing(true), s, eps, r);
        REQUIRE(rep.int_w == 0.0);
        REQUIRE(rep.lhs == Catch::Approx(rep.int_v).epsilon(1e-10));
        REQUIRE(rep.interp_margin >= -1e-9);
        REQUIRE(rep.holder_margin >= -1e-9);
    }

    SECTION("u0 = 0: LHS bounded by the forcing branch alone") {
        VectorField u0(g, true);
        auto rep = stokes_ic_estimate(u0, make_forcing(false), s, eps, r);
        REQUIRE(rep.int_v == 0.0);
        REQUIRE(rep.lhs == Catch::Approx(rep.int_w).epsilon(1e-10));
        REQUIRE(rep.lhs <= rep.c_r_fit * rep.term_forcing * (1 + 1e-12));
    }

    SECTION("random pair: split and fitted-constant bookkeeping") {
        VectorField u0 = random_divergence_free_field(g, 6, rng);
        auto rep = stokes_ic_estimate(u0, make_forcing(false), s, eps, r);
        REQUIRE(rep.lhs <= rep.int_v + rep.int_w + 1e-9);
        REQUIRE(rep.c_eps_fit == Catch::Approx(rep.int_v / rep.term_ic).epsilon(1e-12));
        REQUIRE(rep.c_r_fit == Catch::Approx(rep.int_w / rep.term_forcing).epsilon(1e-12));
        REQUIRE(rep.interp_margin >= -1e-9);
        REQUIRE(rep.holder_margin >= -1e-9);
    }

    SECTION("preconditions enforced") {
        VectorField bad = random_vector_field(g, 6, rng);  // not divergence-free
        REQUIRE_THROWS_AS(stokes_ic_estimate(bad, make_forcing(false), s, eps, r),
                          std::invalid_argument);
        VectorField u0 = random_divergence_free_field(g, 6, rng);
        REQUIRE_THROWS_AS(stokes_ic_estimate(u0, make_forcing(false), 0.5, eps, r),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(stokes_ic_estimate(u0, make_forcing(false), s, 1.5, r),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(stokes_ic_estimate(u0, make_forcing(false), s, eps, 1.0),
                          std::invalid_argument);
    }
}

TEST_CASE("stokes ensemble refinement stability (coarse)") {
    StokesParams a;
    a.n = 32;
    a.kmax = 8;
    a.count = 5;
    StokesParams b = a;
    b.n = 64;
    auto ra = stokes_experiment(a, 2);
    auto rb = stokes_experiment(b, 2);
    REQUIRE(ra.pass);
    REQUIRE(rb.pass);
    // fitted prefactors stay within +-20% across refinement
    REQUIRE(std::abs(rb.c_eps_max - ra.c_eps_max) <= 0.2 * ra.c_eps_max);
    REQUIRE(std::abs(rb.c_r_max - ra.c_r_max) <= 0.2 * ra.c_r_max);
}
