// Acceptance suite: one pass/fail line per criterion, exit code counts the
// failures. Sample sizes are chosen so the whole run stays within the
// stated per-criterion budgets on a small desktop machine.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "convexfn.hpp"
#include "experiments.hpp"
#include "functionals.hpp"
#include "levelset.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "states.hpp"

using namespace wehrl;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %d: %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

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

char buf[512];

void criterion1() {
    Timer t;
    double worst = 0.0;
    CounterRng rng(101);
    for (int d = 1; d <= 3; ++d) {
        for (int N = 1; N <= 8; ++N) {
            SphereRule rule(d, N);
            const double binom = binomial(N + d, d);
            for (int pair = 0; pair < 50; ++pair) {
                HomPoly P = HomPoly::random_unit(d, N, rng);
                HomPoly Q = HomPoly::random_unit(d, N, rng);
                cplx via_rule = binom * integrate_sphere_product(P, Q, rule);
                worst = std::max(worst, std::abs(via_rule - P.bombieri_inner(Q)));
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "quadrature vs Bombieri, worst |diff| = %.2e (tol 1e-10)",
                  worst);
    report(1, "inner-product oracle", worst <= 1e-10, buf, t.elapsed());
}

void criterion2() {
    Timer t;
    double worst_norm = 0.0, worst_repr = 0.0;
    CounterRng rng(202);
    for (int d = 1; d <= 3; ++d) {
        for (int N = 1; N <= 8; ++N) {
            HomPoly Q = HomPoly::random_unit(d, N, rng);
            for (int i = 0; i < 100; ++i) {
                auto eta = random_point(rng, d);
                HomPoly K = HomPoly::reproducing_kernel(N, eta);
                worst_norm = std::max(worst_norm, std::abs(K.norm() - 1.0));
                worst_repr = std::max(worst_repr, std::abs(Q.bombieri_inner(K) - Q.eval(eta)));
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "|norm-1| = %.2e, |<Q,K> - Q(eta)| = %.2e (tol 1e-10)",
                  worst_norm, worst_repr);
    report(2, "kernel axioms", worst_norm <= 1e-10 && worst_repr <= 1e-10, buf, t.elapsed());
}

void criterion3() {
    Timer t;
    const std::size_t n = 1000000;
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    double worst = 0.0;
    for (int d : {1, 2}) {
        for (int N : {4, 8}) {
            HomPoly K = HomPoly::reproducing_kernel(N, pole(d));
            LevelProfile prof = LevelProfile::build(K, n, 303 + static_cast<std::uint64_t>(10 * d + N), 1.0);
            ExtremalProfile ex{d, N};
            for (int g = 1; g < 1000; ++g) {
                const double tt = static_cast<double>(g) / 1000.0;
                worst = std::max(worst, std::abs(prof.mu(tt) - ex.mu0(tt)));
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "sup-norm deviation = %.2e (tol %.2e at n=1e6)", worst, tol);
    report(3, "extremal profile", worst <= tol, buf, t.elapsed());
}

void criterion4() {
    Timer t;
    int violations = 0, checks = 0;
    CounterRng rng(404);
    const std::size_t n_mc = 100000;
    for (auto [d, N] : {std::pair{1, 4}, std::pair{2, 4}, std::pair{2, 8}}) {
        const ConvexFn phis[] = {ConvexFn::xlogx(), ConvexFn::power(2.0), ConvexFn::hinge(0.3),
                                 ConvexFn::hinge(0.7)};
        double Sstar[4];
        for (int p = 0; p < 4; ++p) Sstar[p] = extremal_entropy(N, d, phis[p]);
        for (int i = 0; i < 200; ++i) {
            HomPoly Q = HomPoly::random_unit(d, N, rng);
            // one cloud per polynomial, shared across the Phi family
            std::vector<double> u =
                abs2_samples(Q, n_mc, 40400 + static_cast<std::uint64_t>(1000 * d + 100 * N) + static_cast<std::uint64_t>(i));
            for (int p = 0; p < 4; ++p) {
                ++checks;
                if (phis[p].tag() == ConvexFn::Tag::Power) {
                    McValue S = wehrl_entropy(Q, phis[p]);  // exact route
                    if (S.value - Sstar[p] < -1e-9) ++violations;
                } else {
                    McValue S = entropy_from_values(u, N, d, phis[p], false);
                    if (S.value - Sstar[p] < -4.0 * S.stderr_) ++violations;
                }
            }
            // Corollary 1.6 on a random cap (exact route on both sides)
            ++checks;
            auto eta = random_point(rng, d);
            const double omega = 0.02 + 0.9 * rng.next_unit();
            const double tcap = std::pow(1.0 - std::pow(omega, 1.0 / d), N);
            if (cap_concentration_exact(Q, eta, tcap) >
                extremal_concentration(N, d, omega) + 1e-9)
                ++violations;
        }
    }
    std::snprintf(buf, sizeof(buf), "%d violations in %d checks (tol: zero beyond 4 stderr)",
                  violations, checks);
    report(4, "Lieb-Solovej suite (Thm 1.5 / Cor 1.6)", violations == 0, buf, t.elapsed());
}

void criterion5() {
    Timer t;
    double worst = 0.0;
    CounterRng rng(505);
    for (auto [d, N] : {std::pair{1, 6}, std::pair{2, 6}}) {
        for (int i = 0; i < 50; ++i) {
            HomPoly Q = HomPoly::random_unit(d, N, rng);
            SupOptions o;
            o.seed = 5050 + static_cast<std::uint64_t>(i);
            DistanceResult dr = distance_to_kernels(Q, o);
            DirectKernelFit fit = distance_direct(Q, o);
            worst = std::max(worst, std::abs(2.0 * (1.0 - std::sqrt(dr.T)) - fit.min_dist_sq));
        }
    }
    std::snprintf(buf, sizeof(buf), "|2(1-sqrt T) - min ||Q-K||^2| worst = %.2e (tol 1e-6)",
                  worst);
    report(5, "distance identity (Lemma 4.1)", worst <= 1e-6, buf, t.elapsed());
}

void criterion6() {
    Timer t;
    SharpnessReport rep =
        sharpness_family(2, 6, {0.025, 0.05, 0.1, 0.2}, ConvexFn::xlogx(), 2000000, 606);
    const bool slope_D_ok = std::abs(rep.slope_D - 1.0) <= 0.15;
    const bool slope_def_ok =
        !std::isnan(rep.slope_deficit) && std::abs(rep.slope_deficit - 2.0) <= 0.2;
    const bool ratio_ok = rep.significant_points >= 2 && !std::isnan(rep.ratio_min) &&
                          rep.ratio_max <= 2.0 * rep.ratio_min;
    std::snprintf(buf, sizeof(buf),
                  "slope(D) = %.3f (want 1.0+-0.15), slope(deficit) = %.3f (want 2.0+-0.2), "
                  "significant deficits: %d/4",
                  rep.slope_D, rep.slope_deficit, rep.significant_points);
    report(6, "sharpness scaling", slope_D_ok && slope_def_ok && ratio_ok, buf, t.elapsed());
    for (const auto& p : rep.points)
        std::printf("       [info] eps=%.3f  T=%.15f  D=%.3e  deficit=%.3e +- %.1e\n", p.eps, p.T,
                    p.D, p.deficit, p.deficit_stderr);
    std::printf(
        "       [info] the perturbation zeta_1^{N-1} zeta_2 is tangent to the kernel family at\n"
        "       [info] zeta_1^N, so D scales as eps^2 (measured slope ~2) and the entropy\n"
        "       [info] deficit as eps^4; at eps <= 0.1 the deficit lies below the Monte Carlo\n"
        "       [info] noise floor for any feasible sample count.\n");
}

void criterion7() {
    Timer t;
    SweepConfig cfg;
    cfg.d = 2;
    cfg.N = 8;
    cfg.generator.kind = GeneratorSpec::Kind::NearKernel;
    cfg.generator.eps_min = 0.01;
    cfg.generator.eps_max = 0.5;
    cfg.polynomials = 100;
    cfg.samples = 2000000;
    cfg.omega_grid = {0.1};
    cfg.omega_tilde = 0.3;
    cfg.seed = 707;
    SweepSummary summary;
    auto records = sweep_concentration_stability(cfg, &summary);

    int not_significant = 0;
    double min_ratio = 1e300;
    for (const auto& r : records) {
        if (r.D > 0.05) {
            if (r.deficit <= 4.0 * r.deficit_stderr) ++not_significant;
            min_ratio = std::min(min_ratio, r.ratio);
        }
    }
    const bool pass = summary.violations == 0 && not_significant == 0 && min_ratio > 0.0;
    std::snprintf(buf, sizeof(buf),
                  "min deficit/D^2 = %.3f over D > 0.05; %d insignificant deficits; %d violations",
                  min_ratio, not_significant, summary.violations);
    report(7, "stability positivity (Thms 1.6/1.7 empirical)", pass, buf, t.elapsed());
}

void criterion8() {
    Timer t;
    AffinePoly one(1, 0, {cplx{1.0, 0.0}});
    FockReport rep = fock_limit_check(one, {64, 256}, 1.0, ConvexFn::xlogx(), 6000000, 808);
    const double se_o = rep.oracle_concentration_stderr;
    const auto& p64 = rep.points[0];
    const auto& p256 = rep.points[1];
    const double gap64 = std::abs(p64.concentration - rep.oracle_concentration);
    const double gap256 = std::abs(p256.concentration - rep.oracle_concentration);
    const bool near64 = gap64 <= 5.0 * std::hypot(p64.concentration_stderr, se_o);
    const bool near256 = gap256 <= 5.0 * std::hypot(p256.concentration_stderr, se_o);
    const bool monotone =
        gap256 <= gap64 + 2.0 * std::hypot(p64.concentration_stderr, p256.concentration_stderr);
    std::snprintf(buf, sizeof(buf),
                  "oracle %.5f; N=64: %.5f (gap %.1e), N=256: %.5f (gap %.1e); budgets 5 stderr",
                  rep.oracle_concentration, p64.concentration, gap64, p256.concentration, gap256);
    report(8, "Bargmann-Fock limit", near64 && near256 && monotone, buf, t.elapsed());
}

void criterion9() {
    Timer t;
    AuditConfig cfg;
    cfg.d = 2;
    cfg.N = 5;
    cfg.polynomials = 20;
    cfg.samples = 10000000;
    cfg.seed = 909;
    cfg.omega_tilde = 0.3;
    cfg.grid_points = 24;
    AuditReport rep = differential_inequality_audit(cfg);
    const bool pass =
        rep.total_violations == 0 && rep.total_monotonicity_violations == 0 && rep.status != "inconclusive";
    std::snprintf(buf, sizeof(buf),
                  "%d slope violations, %d monotonicity violations over 20 polynomials (status %s)",
                  rep.total_violations, rep.total_monotonicity_violations, rep.status.c_str());
    report(9, "differential-inequality audit (Lemma 3.3)", pass, buf, t.elapsed());
}

void criterion10() {
    Timer t;
    const int d = 2, N = 4;
    CounterRng rng(1010);
    double worst_exact = 0.0, worst_mc = 0.0;
    for (int i = 0; i < 50; ++i) {
        HomPoly Q = HomPoly::random_unit(d, N, rng);
        DensityState st = DensityState::pure(Q);

        // pointwise Husimi vs |Q|^2
        for (int k = 0; k < 3; ++k) {
            auto z = random_point(rng, d);
            worst_exact = std::max(worst_exact, std::abs(st.husimi(z) - std::norm(Q.eval(z))));
        }
        // exact cap concentration
        auto eta = random_point(rng, d);
        Region cap = Region::cap(eta, 0.15);
        worst_exact = std::max(
            worst_exact, std::abs(st.concentration(cap).value - concentration(Q, cap).value));
        // linear entropy (exact) and xlogx with a shared cloud seed
        worst_exact = std::max(worst_exact, std::abs(st.entropy(ConvexFn::linear()).value -
                                                     wehrl_entropy(Q, ConvexFn::linear()).value));
        EntropyOptions eop;
        eop.samples = 20000;
        eop.seed = 10100 + static_cast<std::uint64_t>(i);
        worst_mc = std::max(worst_mc, std::abs(st.entropy(ConvexFn::xlogx(), eop).value -
                                               wehrl_entropy(Q, ConvexFn::xlogx(), eop).value));
    }

    // maximally mixed Husimi is constant 1/binom
    DensityState mix = DensityState::maximally_mixed(d, N);
    const double c = 1.0 / binomial(N + d, d);
    double worst_mix = 0.0;
    for (int k = 0; k < 100; ++k) {
        auto z = random_point(rng, d);
        worst_mix = std::max(worst_mix, std::abs(mix.husimi(z) - c));
    }
    const bool pass = worst_exact <= 1e-8 && worst_mc <= 1e-8 && worst_mix <= 1e-12;
    std::snprintf(buf, sizeof(buf),
                  "rank-1 worst |diff|: exact %.2e, common-cloud MC %.2e; mixed Husimi %.2e",
                  worst_exact, worst_mc, worst_mix);
    report(10, "states reduction", pass, buf, t.elapsed());
}

}  // namespace

int main() {
    std::printf("wehrl acceptance suite\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
