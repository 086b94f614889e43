#include <doctest.h>

#include <cmath>

#include "convexfn.hpp"
#include "functionals.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

using namespace wehrl;

namespace {

std::vector<cplx> pole(int d) {
    std::vector<cplx> e(static_cast<std::size_t>(d) + 1, cplx{0.0, 0.0});
    e[0] = 1.0;
    return e;
}

std::vector<cplx> random_point(CounterRng& rng, int d) {
    std::vector<cplx> z(static_cast<std::size_t>(d) + 1);
    double n2 = 0.0;
    for (auto& x : z) {
        x = cplx{rng.next_normal(), rng.next_normal()};
        n2 += std::norm(x);
    }
    for (auto& x : z) x /= std::sqrt(n2);
    return z;
}

HomPoly two_term(int d, int N) {
    std::vector<int> a(static_cast<std::size_t>(d) + 1, 0), b(static_cast<std::size_t>(d) + 1, 0);
    a[0] = N;
    b[1] = N;
    const double s = 1.0 / std::sqrt(2.0);
    return HomPoly::from_terms(d, N, {{a, cplx{s, 0.0}}, {b, cplx{s, 0.0}}});
}

}  // namespace

TEST_CASE("convex functions") {
    ConvexFn h = ConvexFn::hinge(0.4);
    CHECK(h(0.2) == 0.0);
    CHECK(h(0.4) == 0.0);
    CHECK(h(0.9) == doctest::Approx(0.5));
    CHECK(h.left_derivative(0.3) == 0.0);
    CHECK(h.left_derivative(0.8) == 1.0);

    ConvexFn x = ConvexFn::xlogx();
    CHECK(x(0.0) == 0.0);
    CHECK(x(1.0) == 0.0);
    CHECK(x(0.5) == doctest::Approx(0.5 * std::log(0.5)));
    CHECK(x.left_derivative(0.5) == doctest::Approx(std::log(0.5) + 1.0));

    CHECK_THROWS_AS(ConvexFn::power(0.5), std::invalid_argument);
    CHECK_THROWS_AS(
        ConvexFn::custom([](double t) { return -t * t; }, [](double t) { return -2 * t; },
                         "concave"),
        std::domain_error);
    CHECK(ConvexFn::parse("power:2").param() == 2.0);
    CHECK(ConvexFn::parse("hinge:0.3").param() == doctest::Approx(0.3));
    CHECK_THROWS_AS(ConvexFn::parse("bogus"), std::invalid_argument);
}

TEST_CASE("sup modulus") {
    CounterRng rng(1);
    // kernels attain T = 1
    for (int d : {1, 2}) {
        auto eta = random_point(rng, d);
        HomPoly K = HomPoly::reproducing_kernel(5, eta);
        SupResult s = sup_modulus(K);
        CHECK(std::abs(s.T - 1.0) < 1e-9);
        // the maximizer is eta up to phase
        cplx ip = 0.0;
        for (int k = 0; k <= d; ++k) ip += s.argmax[static_cast<std::size_t>(k)] * std::conj(eta[static_cast<std::size_t>(k)]);
        CHECK(std::abs(std::abs(ip) - 1.0) < 1e-6);
    }
    // (zeta_1^N + zeta_2^N)/sqrt(2): T = 1/2 for N >= 2
    for (int N : {2, 4, 6}) {
        SupResult s = sup_modulus(two_term(1, N));
        CHECK(std::abs(s.T - 0.5) < 1e-9);
    }
    // pole monomial
    HomPoly zN = HomPoly::reproducing_kernel(6, pole(2));
    SupResult s = sup_modulus(zN);
    CHECK(std::abs(s.T - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(s.argmax[0]) - 1.0) < 1e-6);
}

TEST_CASE("distance to kernels") {
    CounterRng rng(2);
    HomPoly K = HomPoly::reproducing_kernel(4, random_point(rng, 2));
    CHECK(distance_to_kernels(K).value < 1e-5);

    DistanceResult r = distance_to_kernels(two_term(1, 4));
    CHECK(std::abs(r.value - std::sqrt(2.0 * (1.0 - std::pow(0.5, 0.5)))) < 1e-8);
    CHECK(r.value == doctest::Approx(0.7653668647301795).epsilon(1e-6));

    for (int trial = 0; trial < 5; ++trial) {
        HomPoly Q = HomPoly::random_unit(2, 4, rng);
        DistanceResult dr = distance_to_kernels(Q);
        CHECK(dr.value <= std::sqrt(2.0) + 1e-12);
        // cross-validation against the direct minimization route
        DirectKernelFit fit = distance_direct(Q);
        CHECK(std::abs(2.0 * (1.0 - std::sqrt(dr.T)) - fit.min_dist_sq) < 1e-6);
    }
}

TEST_CASE("cap measure") {
    CHECK(cap_measure(2, 1, 0.25) == doctest::Approx(0.5).epsilon(1e-14));
    for (int d : {1, 2}) {
        const int N = 5;
        const double omega = 0.2;
        const double t = std::pow(1.0 - std::pow(omega, 1.0 / d), N);
        CHECK(cap_measure(N, d, t) == doctest::Approx(omega).epsilon(1e-12));
    }
    CHECK(cap_measure(3, 2, 1.0 - 1e-12) < 1e-7);
    CHECK_THROWS_AS(cap_measure(3, 2, 0.0), std::domain_error);
}

TEST_CASE("cap concentration: exact path against closed forms") {
    CounterRng rng(3);
    // pole kernel against the optimal cap: the extremal value
    for (int d : {1, 2}) {
        const int N = 6;
        const double omega = 0.15;
        const double t = std::pow(1.0 - std::pow(omega, 1.0 / d), N);
        HomPoly K = HomPoly::reproducing_kernel(N, pole(d));
        double c = cap_concentration_exact(K, pole(d), t);
        CHECK(c == doctest::Approx(extremal_concentration(N, d, omega)).epsilon(1e-11));
    }
    // d=1 closed form: C*(omega) = 1 - (1-omega)^{N+1}
    CHECK(extremal_concentration(1, 1, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(extremal_concentration(4, 1, 0.3) ==
          doctest::Approx(1.0 - std::pow(0.7, 5)).epsilon(1e-12));

    // random cap center: exact path equals the Monte Carlo indicator route
    const int d = 2, N = 4;
    HomPoly Q = HomPoly::random_unit(d, N, rng);
    auto eta = random_point(rng, d);
    const double t = 0.15;
    double exact = cap_concentration_exact(Q, eta, t);
    Region capr = Region::cap(eta, t);
    std::vector<cplx> eta_copy(eta);
    const double thr = cap_inner_threshold(N, t);
    Region ind = Region::indicator(
        [eta_copy, thr](std::span<const cplx> z) {
            cplx ip = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) ip += z[k] * std::conj(eta_copy[k]);
            return std::norm(ip) > thr;
        },
        cap_measure(N, d, t));
    ConcOptions copt;
    copt.samples = 400000;
    McValue mc = concentration(Q, ind, copt);
    CHECK(std::abs(mc.value - exact) < 5.0 * mc.stderr_);

    McValue viaRegion = concentration(Q, capr);
    CHECK(viaRegion.exact);
    CHECK(viaRegion.value == doctest::Approx(exact).epsilon(1e-12));

    // complement: 1 - cap value (normalization)
    McValue comp = concentration(Q, Region::cap_complement(eta, t));
    CHECK(comp.value == doctest::Approx(1.0 - exact).epsilon(1e-10));
}

TEST_CASE("Corollary 1.6: caps never beat the extremal value") {
    CounterRng rng(5);
    const int d = 2, N = 5;
    for (int trial = 0; trial < 25; ++trial) {
        HomPoly Q = HomPoly::random_unit(d, N, rng);
        auto eta = random_point(rng, d);
        const double t = 0.05 + 0.9 * rng.next_unit();
        const double omega = cap_measure(N, d, t);
        double c = cap_concentration_exact(Q, eta, t);
        CHECK(c <= extremal_concentration(N, d, omega) + 1e-9);
    }
}

TEST_CASE("optimal concentration dominates regions of equal measure") {
    CounterRng rng(6);
    const int d = 1, N = 4;
    HomPoly Q = HomPoly::random_unit(d, N, rng);
    const double omega = 0.25;
    ConcOptions copt;
    copt.samples = 300000;
    OptimalConcentration oc = optimal_concentration(Q, omega, copt);
    CHECK(oc.C.value <= 1.0 + 1e-9);
    CHECK(oc.C.value > 0.0);

    // superlevel beats caps of the same measure (Remark 1.3 as a comparison)
    const double t = std::pow(1.0 - std::pow(omega, 1.0 / d), N);
    for (int trial = 0; trial < 20; ++trial) {
        auto eta = random_point(rng, d);
        double c = cap_concentration_exact(Q, eta, t);
        CHECK(c <= oc.C.value + 4.0 * oc.C.stderr_ + 1e-9);
    }
    // omega -> 1 recovers the full mass
    OptimalConcentration near_all = optimal_concentration(Q, 0.999, copt);
    CHECK(near_all.C.value > 0.99);
}

TEST_CASE("Wehrl entropy: exact paths") {
    CounterRng rng(7);
    const int d = 2, N = 4;
    HomPoly Q = HomPoly::random_unit(d, N, rng);

    McValue lin = wehrl_entropy(Q, ConvexFn::linear());
    CHECK(lin.exact);
    CHECK(lin.value == doctest::Approx(-1.0).epsilon(1e-14));

    // power(2) via the Bombieri norm of Q^2 agrees with the extremal value
    // computation for the kernel
    HomPoly K = HomPoly::reproducing_kernel(N, pole(d));
    McValue p2 = wehrl_entropy(K, ConvexFn::power(2.0));
    CHECK(p2.exact);
    CHECK(std::abs(p2.value - extremal_entropy(N, d, ConvexFn::power(2.0))) < 1e-8);
}

TEST_CASE("optimal concentration of the extremizer matches the closed form") {
    for (int d : {1, 2}) {
        const int N = 5;
        HomPoly K = HomPoly::reproducing_kernel(N, pole(d));
        const double omega = 0.2;
        ConcOptions copt;
        copt.samples = 400000;
        OptimalConcentration oc = optimal_concentration(K, omega, copt);
        CHECK(std::abs(oc.C.value - extremal_concentration(N, d, omega)) <
              5.0 * oc.C.stderr_ + 1e-3);
        // the threshold approximates mu0^{-1}(omega)
        ExtremalProfile ex{d, N};
        CHECK(std::abs(oc.threshold - ex.mu0_inv(omega)) < 5e-3);
    }
}

TEST_CASE("entropy on a user-selected exact rule") {
    CounterRng rng(71);
    const int d = 2, N = 4;
    HomPoly Q = HomPoly::random_unit(d, N, rng);
    EntropyOptions eop;
    eop.rule_degree = 2 * N;
    McValue via_rule = wehrl_entropy(Q, ConvexFn::power(2.0), eop);
    CHECK(via_rule.exact);
    McValue via_algebra = wehrl_entropy(Q, ConvexFn::power(2.0));
    CHECK(std::abs(via_rule.value - via_algebra.value) < 1e-11);

    eop.rule_degree = N;  // below the integrand degree
    CHECK_THROWS_AS(wehrl_entropy(Q, ConvexFn::power(2.0), eop), std::invalid_argument);
    eop.rule_degree = 4 * N;
    CHECK_THROWS_AS(wehrl_entropy(Q, ConvexFn::xlogx(), eop), std::invalid_argument);
}

TEST_CASE("extremal entropy closed forms") {
    // Phi(t)=t: normalization gives -1
    CHECK(extremal_entropy(6, 2, ConvexFn::linear()) == doctest::Approx(-1.0).epsilon(1e-12));

    // xlogx: hand-derived Beta-log integrals, d=1: N/(N+1); d=2: N(2N+3)/((N+1)(N+2))
    for (int N : {1, 4, 9}) {
        CHECK(extremal_entropy(N, 1, ConvexFn::xlogx()) ==
              doctest::Approx(static_cast<double>(N) / (N + 1)).epsilon(1e-9));
        CHECK(extremal_entropy(N, 2, ConvexFn::xlogx()) ==
              doctest::Approx(static_cast<double>(N) * (2 * N + 3) / ((N + 1.0) * (N + 2.0)))
                  .epsilon(1e-9));
    }

    // hinge closed reduction agrees with a Monte Carlo evaluation
    const int d = 2, N = 5;
    const ConvexFn h = ConvexFn::hinge(0.35);
    HomPoly K = HomPoly::reproducing_kernel(N, pole(d));
    EntropyOptions eop;
    eop.samples = 400000;
    McValue mc = wehrl_entropy(K, h, eop);
    CHECK(std::abs(mc.value - extremal_entropy(N, d, h)) < 5.0 * mc.stderr_);
}

TEST_CASE("hinge identity ties entropy and concentration") {
    CounterRng rng(8);
    const int d = 1, N = 5;
    const double t0 = 0.2;
    HomPoly Q = HomPoly::random_unit(d, N, rng);
    const double binom = binomial(N + d, d);

    // common sample cloud: the identity holds exactly per sample
    std::vector<double> u = abs2_samples(Q.normalized(), 200000, 99);
    double phi_sum = 0.0, conc_sum = 0.0;
    std::size_t above = 0;
    for (double v : u) {
        if (v > t0) {
            phi_sum += v - t0;
            conc_sum += v;
            ++above;
        }
    }
    const double n = static_cast<double>(u.size());
    const double S = -binom * phi_sum / n;
    const double C = binom * conc_sum / n;
    const double mu_t0 = static_cast<double>(above) / n;
    CHECK(std::abs(S + C - binom * t0 * mu_t0) < 1e-10);
}

TEST_CASE("Lieb-Solovej entropy inequality with near-equality at kernels") {
    CounterRng rng(9);
    const int d = 2, N = 4;
    const ConvexFn phi = ConvexFn::xlogx();
    const double Sstar = extremal_entropy(N, d, phi);

    EntropyOptions eop;
    eop.samples = 150000;
    for (int trial = 0; trial < 10; ++trial) {
        HomPoly Q = HomPoly::random_unit(d, N, rng);
        McValue S = wehrl_entropy(Q, phi, eop);
        CHECK(S.value - Sstar >= -4.0 * S.stderr_);
    }

    // near-kernel input: deficit within noise of zero, D below 1e-4
    HomPoly K = HomPoly::reproducing_kernel(N, pole(d));
    HomPoly G = HomPoly::random_unit(d, N, rng);
    HomPoly Gp = (G - K * G.bombieri_inner(K)).normalized();
    HomPoly Qnear = (K + Gp * cplx{5e-5, 0.0}).normalized();
    CHECK(distance_to_kernels(Qnear).value < 1e-4);
    McValue Snear = wehrl_entropy(Qnear, phi, eop);
    CHECK(std::abs(Snear.value - Sstar) < 4.0 * Snear.stderr_);
}

TEST_CASE("rotation invariance of the functionals") {
    CounterRng rng(10);
    const int d = 2, N = 4;
    HomPoly Q = HomPoly::random_unit(d, N, rng);
    auto R = random_unitary(d + 1, rng);
    HomPoly QR = Q.rotate(R);

    CHECK(std::abs(distance_to_kernels(Q).value - distance_to_kernels(QR).value) < 1e-8);

    EntropyOptions eop;
    eop.samples = 200000;
    McValue a = wehrl_entropy(Q, ConvexFn::xlogx(), eop);
    eop.seed = 17;
    McValue b = wehrl_entropy(QR, ConvexFn::xlogx(), eop);
    CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.stderr_, b.stderr_));
}

TEST_CASE("alpha coefficient") {
    // d=1, omega_tilde=1: alpha = N omega^2 (1-omega)^{N-1} (1-omega)^{N+1}/(N+1)
    for (int N : {2, 5}) {
        for (double omega : {0.1, 0.4}) {
            double expected = N * omega * omega * std::pow(1.0 - omega, N - 1) *
                              std::pow(1.0 - omega, N + 1) / (N + 1);
            CHECK(alpha_coefficient(omega, N, 1, 1.0) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
    CHECK(alpha_coefficient(0.299999, 5, 2, 0.3) > 0.0);
    CHECK(alpha_coefficient(0.299999, 5, 2, 0.3) < 1e-4);
    CHECK_THROWS_AS(alpha_coefficient(0.4, 5, 2, 0.3), std::domain_error);
    for (double omega : {0.05, 0.15, 0.25})
        CHECK(alpha_coefficient(omega, 4, 2, 0.3) > 0.0);
}

TEST_CASE("Fraenkel asymmetry") {
    const int d = 1, N = 4;
    const double omega = 0.2;
    const double thr = 1.0 - std::pow(omega, 1.0 / d);

    // a cap has asymmetry ~ 0
    std::vector<cplx> eta{cplx{0.6, 0.0}, cplx{0.64, 0.48}};
    double n2 = 0.0;
    for (auto& x : eta) n2 += std::norm(x);
    for (auto& x : eta) x /= std::sqrt(n2);
    auto cap_member = [eta, thr](std::span<const cplx> z) {
        cplx ip = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) ip += z[k] * std::conj(eta[k]);
        return std::norm(ip) > thr;
    };
    AsymOptions aop;
    aop.samples = 30000;
    AsymResult r = fraenkel_asymmetry(N, d, cap_member, omega, aop, eta);
    CHECK(r.value < 0.05);
    CHECK(r.value <= 2.0);

    // two caps at orthogonal centers, each of measure omega/2
    const double half_thr = 1.0 - std::pow(omega / 2.0, 1.0 / d);
    std::vector<cplx> e1{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    std::vector<cplx> e2{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    auto union_member = [e1, e2, half_thr](std::span<const cplx> z) {
        cplx a = 0.0, b = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            a += z[k] * std::conj(e1[k]);
            b += z[k] * std::conj(e2[k]);
        }
        return std::norm(a) > half_thr || std::norm(b) > half_thr;
    };
    AsymResult r2 = fraenkel_asymmetry(N, d, union_member, omega, aop, e1);
    CHECK(r2.value >= 0.5 - 5.0 * r2.stderr_ - 0.05);
}
