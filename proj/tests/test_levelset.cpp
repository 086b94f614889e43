#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "functionals.hpp"
#include "levelset.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

using namespace wehrl;

namespace {

HomPoly kernel_at_pole(int d, int N) {
    std::vector<cplx> e(static_cast<std::size_t>(d) + 1, cplx{0.0, 0.0});
    e[0] = 1.0;
    return HomPoly::reproducing_kernel(N, e);
}

HomPoly two_term(int d, int N) {
    std::vector<int> a(static_cast<std::size_t>(d) + 1, 0), b(static_cast<std::size_t>(d) + 1, 0);
    a[0] = N;
    b[1] = N;
    const double s = 1.0 / std::sqrt(2.0);
    return HomPoly::from_terms(d, N, {{a, cplx{s, 0.0}}, {b, cplx{s, 0.0}}});
}

// Dense-grid oracle for the profile of (zeta_1^N + zeta_2^N)/sqrt(2) at d=1:
// U depends on (rho, psi) with psi the relative phase, U = ((1-r)^N + r^N +
// 2 (r(1-r))^{N/2} cos(N psi)) / 2, and sigma reduces to drho dpsi/(2pi).
// The deterministic grid values feed a LevelProfile, giving quantiles by
// order statistics.
LevelProfile two_term_grid_profile(int N, double T) {
    const int nr = 2000, np = 1200;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(nr) * np);
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) / nr;
        const double base = 0.5 * (std::pow(1.0 - r, N) + std::pow(r, N));
        const double osc = std::pow(r * (1.0 - r), N / 2.0);
        for (int j = 0; j < np; ++j) {
            const double psi = 2.0 * M_PI * (j + 0.5) / np;
            vals.push_back(base + osc * std::cos(N * psi));
        }
    }
    return LevelProfile::from_values(1, N, std::move(vals), 0, T);
}

}  // namespace

TEST_CASE("extremal profile closed forms") {
    ExtremalProfile ex{2, 6};
    CHECK(ex.mu0(0.0) == 1.0);
    CHECK(ex.mu0(1.0) == 0.0);
    for (double t : {0.1, 0.4, 0.9}) {
        double m = ex.mu0(t);
        CHECK(std::abs(ex.mu0_inv(m) - t) < 1e-12);
    }
    // int_0^1 mu0 = 1/binom(N+d,d)
    CHECK(std::abs(ex.integral_mu0(1.0) - 1.0 / binomial(8, 2)) < 1e-14);
    CHECK(std::abs(ex.integral_mu0_inv(1.0) - 1.0 / binomial(8, 2)) < 1e-14);
}

TEST_CASE("extremal empirical profile matches mu0") {
    const int d = 2, N = 4;
    HomPoly K = kernel_at_pole(d, N);
    const std::size_t n = 200000;
    LevelProfile prof = LevelProfile::build(K, n, 2024, 1.0);
    ExtremalProfile ex{d, N};

    CHECK(prof.mu(0.0) == 1.0);
    CHECK(prof.mu(1.0) == 0.0);
    double worst = 0.0;
    for (double t = 0.01; t < 1.0; t += 0.01)
        worst = std::max(worst, std::abs(prof.mu(t) - ex.mu0(t)));
    CHECK(worst < 5.0 / std::sqrt(static_cast<double>(n)));

    // quantiles
    for (double s : {0.1, 0.5, 0.9})
        CHECK(std::abs(prof.mu_inverse(s) - ex.mu0_inv(s)) < 5e-3);
    CHECK(prof.mu_inverse(1e-6) > 0.99);

    // mass identity
    CHECK(std::abs(prof.mean() - 1.0 / binomial(N + d, d)) < 4.0 / std::sqrt(static_cast<double>(n)));

    // crossing is degenerate for the extremizer
    CHECK(prof.crossing_points().degenerate);

    // deficits vanish within noise
    auto def = prof.deficit_integrals(0.5);
    CHECK(std::abs(def.inverse_integral) < 1e-3);
    CHECK(std::abs(def.direct_integral) < 1e-3);
}

TEST_CASE("d=1, N=1 median of the extremal profile") {
    // mu0^{-1}(1/2) = 1/2 for d = N = 1
    HomPoly K = kernel_at_pole(1, 1);
    LevelProfile prof = LevelProfile::build(K, 100000, 5, 1.0);
    CHECK(std::abs(prof.mu_inverse(0.5) - 0.5) < 5e-3);
}

TEST_CASE("two-term polynomial: crossing and deficit against a dense-grid oracle") {
    const int d = 1, N = 4;
    HomPoly Q = two_term(d, N);
    REQUIRE(std::abs(Q.norm() - 1.0) < 1e-12);
    SupResult sup = sup_modulus(Q);
    CHECK(std::abs(sup.T - 0.5) < 1e-9);  // max of (c^N + s^N)^2/2 at the poles

    const std::size_t n = 1000000;
    LevelProfile prof = LevelProfile::build(Q, n, 31, sup.T);

    auto cross = prof.crossing_points();
    CHECK(!cross.degenerate);
    CHECK(cross.t_star > 0.0);
    CHECK(cross.t_star < 0.5);
    // s* consistency: mu(t*) agrees with mu0(t*) by construction of t*
    CHECK(std::abs(prof.mu(cross.t_star) - cross.s_star) < 2.0 / std::sqrt(static_cast<double>(n)));

    // mass identity at s_hat = 1
    auto full = prof.deficit_integrals(1.0, 0.6);
    CHECK(std::abs(full.inverse_integral) < 4.0 / std::sqrt(static_cast<double>(n)));

    // positive deficit at s_hat = 0.3, cross-checked against the dense grid
    const double s_hat = 0.3;
    auto def = prof.deficit_integrals(s_hat);
    CHECK(def.inverse_integral > 0.0);

    LevelProfile oracle = two_term_grid_profile(N, sup.T);
    ExtremalProfile ex{d, N};
    double oracle_def = 0.0;
    const int steps = 300;
    for (int i = 0; i < steps; ++i) {
        const double s = s_hat * (i + 0.5) / steps;
        oracle_def += (ex.mu0_inv(s) - oracle.mu_inverse(s)) * s_hat / steps;
    }
    CHECK(def.inverse_integral == doctest::Approx(oracle_def).epsilon(0.02));
}

TEST_CASE("deficit integrals stay nonnegative at random cut points") {
    const int d = 2, N = 5;
    CounterRng rng(61);
    HomPoly Q = HomPoly::random_unit(d, N, rng);
    SupResult sup = sup_modulus(Q);
    const std::size_t n = 400000;
    LevelProfile prof = LevelProfile::build(Q, n, 62, sup.T);
    const double tol = 4.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 20; ++i) {
        const double s_hat = 0.02 + 0.96 * rng.next_unit();
        auto def = prof.deficit_integrals(s_hat);
        CHECK(def.inverse_integral >= -tol);
        CHECK(def.direct_integral >= -tol);
    }
}

TEST_CASE("differential inequality: extremal equality within tolerance") {
    const int d = 2, N = 5;
    HomPoly K = kernel_at_pole(d, N);
    LevelProfile prof = LevelProfile::build(K, 2000000, 7, 1.0);
    auto rep = prof.check_differential_inequality(0.3, 16);
    CHECK(rep.status == "ok");
    CHECK(rep.violations == 0);
    // the kernel profile saturates the inequality: slopes sit on the bound
    int close = 0, used = 0;
    for (const auto& pt : rep.points) {
        if (pt.inconclusive) continue;
        ++used;
        if (std::abs(pt.slope - pt.bound) < 5.0 * pt.noise + 0.05 * std::abs(pt.bound)) ++close;
    }
    CHECK(used > 0);
    CHECK(close >= used * 3 / 4);
}

TEST_CASE("profile csv export") {
    HomPoly K = kernel_at_pole(1, 3);
    LevelProfile prof = LevelProfile::build(K, 10000, 77, 1.0);
    const char* path = "profile_test.csv";
    prof.export_csv(path);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,mu_empirical,mu0,diff");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(f, line)) ++rows;
    CHECK(rows == 1000);
    std::remove(path);
}
