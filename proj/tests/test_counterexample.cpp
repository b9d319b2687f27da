#include <catch2/catch_amalgamated.hpp>

#include "mhdlab/counterexample.hpp"
#include "mhdlab/experiments.hpp"

using namespace mhdlab;

namespace {

// Independent long-double oracle for S(N).
long double s_oracle(long j0, long N) {
    long double s = 0;
    for (long j = N; j >= j0; --j)  // reversed order: different rounding path
        s += 1.0L / ((j + 1.0L) * std::log(2.0L + j));
    return s;
}

// Independent quadrature oracle: composite Simpson on a fine uniform grid over
// [lo, hi] of the dot-H^2 density integrand.
double simpson_oracle(double t, double lo, double hi, int n) {
    auto f = [&](double r) {
        double lg = std::log(2.0 + r);
        return r * r * r / (lg * lg) * std::exp(-2.0 * r * r * t);
    };
    double h = (hi - lo) / n, acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("radial profile") {
    REQUIRE(counterexample_profile(1.0, 2) == Catch::Approx(1.0 / std::log(3.0)).epsilon(1e-15));
    REQUIRE_THROWS_AS(counterexample_profile(0.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(counterexample_profile(1.0, 4), std::invalid_argument);

    // monotone decay for large rho
    double prev = counterexample_profile(10.0, 2);
    for (double rho = 20; rho <= 1e6; rho *= 10) {
        double cur = counterexample_profile(rho, 2);
        REQUIRE(cur < prev);
        prev = cur;
    }

    // L^2 membership on [1, inf): int dr / (r log^2(2+r)) finite
    for (int d : {2, 3}) {
        double acc = 0;
        double lo = 1.0;
        for (int block = 0; block < 60; ++block) {
            double hi = lo * 2;
            acc += integrate_adaptive(
                [&](double r) {
                    double p = counterexample_profile(r, d);
                    return p * p * std::pow(r, d - 1);
                },
                lo, hi, 1e-12);
            lo = hi;
        }
        // dominated by int_1^inf dr/(r log^2 r-ish); well under 2/log(3)
        REQUIRE(acc < 2.0 / std::log(3.0));
        REQUIRE(acc > 0.1);
    }
}

TEST_CASE("shell integral closed form (d=2, j=2)") {
    // int_{|xi|<=2} |xi|^{4-d} dxi = 2 pi 2^4 / 4 = 8 pi
    double val = 2 * pi *
                 integrate_adaptive([](double r) { return r * r * r; }, 0.0, 2.0, 1e-13);
    REQUIRE(val == Catch::Approx(8 * pi).epsilon(1e-12));
    REQUIRE(shell_constant(2) == Catch::Approx(std::sqrt(2 * pi / 4.0)).epsilon(1e-15));
    REQUIRE(shell_constant(3) == Catch::Approx(std::sqrt(4 * pi / 4.0)).epsilon(1e-15));
}

TEST_CASE("H2 norm of the counterexample") {
    SECTION("matches an independent Simpson oracle to 1e-8") {
        for (double t : {1e-2, 1e-3, 1e-4}) {
            double R = detail::rho_max_for(t, h2_density_integral(t, 4.0 / std::sqrt(t), 1e-8));
            double oracle = simpson_oracle(t, 1e-12, R, 400000);
            REQUIRE(h2_density_integral(t, R) == Catch::Approx(oracle).epsilon(1e-8));
        }
    }
    SECTION("non-increasing in t") {
        double prev = counterexample_H2_norm(1e-6, 2);
        for (double t : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
            double cur = counterexample_H2_norm(t, 2);
            REQUIRE(cur < prev);
            prev = cur;
        }
    }
    SECTION("t ||u(t)||^2 grows without bound as t -> 0 (slowly)") {
        double prev = 0;
        for (double t : {1e-2, 1e-4, 1e-6, 1e-8}) {
            double v = counterexample_H2_norm(t, 2);
            double cur = t * v * v;
            REQUIRE(cur > prev);
            prev = cur;
        }
    }
    SECTION("t <= 0 rejected") {
        REQUIRE_THROWS_AS(counterexample_H2_norm(0.0, 2), std::invalid_argument);
    }
}

TEST_CASE("harmonic log sum vs direct-summation oracle") {
    REQUIRE(harmonic_log_sum(1, 10) ==
            Catch::Approx(static_cast<double>(s_oracle(1, 10))).epsilon(1e-14));
    double s3 = harmonic_log_sum(2, 1000);
    double s6 = harmonic_log_sum(2, 1000000);
    REQUIRE(s3 == Catch::Approx(static_cast<double>(s_oracle(2, 1000))).epsilon(1e-12));
    REQUIRE(s6 == Catch::Approx(static_cast<double>(s_oracle(2, 1000000))).epsilon(1e-12));
    // log log growth
    REQUIRE(s6 > s3 + 0.3);
}

TEST_CASE("divergence scan: I monotone and unbounded across decades") {
    std::vector<double> tmins = {1e-3, 1e-4, 1e-5, 1e-6};
    auto rows = divergence_scan(2, 0.25, tmins);
    REQUIRE(rows.size() == tmins.size());
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].I > rows[i - 1].I);
    // no finite asymptote: increments not collapsing to zero across decades
    double d1 = rows[1].I - rows[0].I;
    double d2 = rows[3].I - rows[2].I;
    REQUIRE(d2 > 0.5 * d1);
    for (const auto& r : rows) {
        REQUIRE(r.N == static_cast<long>(std::floor(1.0 / std::sqrt(r.t_min))));
        REQUIRE(r.ratio > 0);
    }
}

TEST_CASE("four-step inequality chain for j = j0..50") {
    auto rows = chain_check(2, 0.25, 50);
    REQUIRE(rows.front().j == 2);  // j0 = ceil(1/sqrt(0.25))
    REQUIRE(rows.back().j == 50);
    for (const auto& r : rows) {
        INFO("j = " << r.j);
        REQUIRE(r.margin_restrict >= -1e-9);
        REQUIRE(r.margin_kernel >= -1e-9);
        REQUIRE(r.margin_interval >= 0.0);
        REQUIRE(r.margin_shell >= -1e-9);
        // the sharp pointwise constant is at least e^{-2} on the sliced region
        REQUIRE(r.sharp_kernel >= std::exp(-2.0) - 1e-12);
        REQUIRE(r.sharp_kernel <= 1.0);
    }
}

TEST_CASE("counterexample experiment pipeline") {
    CounterexampleParams p;
    p.t_min_list = {1e-3, 1e-4, 1e-5};
    p.j_max = 10;
    auto res = counterexample_experiment(p, 2);
    for (const auto& c : res.checks) {
        INFO(c.summary_line());
        REQUIRE(c.pass);
    }
}
