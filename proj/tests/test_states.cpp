#include <doctest.h>

#include <cmath>

#include "functionals.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "states.hpp"

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

DensityState random_mixed(CounterRng& rng, int d, int N, int rank) {
    const std::size_t dim = multiindex_count(d, N);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<double> w(static_cast<std::size_t>(rank));
    double tot = 0.0;
    for (auto& x : w) {
        x = rng.next_unit();
        tot += x;
    }
    for (int r = 0; r < rank; ++r) {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx{rng.next_normal(), rng.next_normal()};
        v.normalize();
        m += (w[static_cast<std::size_t>(r)] / tot) * (v * v.adjoint());
    }
    m = 0.5 * (m + m.adjoint().eval());
    m /= m.trace().real();
    return DensityState::from_matrix(d, N, std::move(m));
}

}  // namespace

TEST_CASE("state validation") {
    const int d = 1, N = 2;
    const std::size_t dim = multiindex_count(d, N);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    CHECK_THROWS_AS(DensityState::from_matrix(d, N, bad), std::invalid_argument);  // trace 3

    Eigen::MatrixXcd nh = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    nh(0, 1) = cplx{1.0, 0.0};
    nh(0, 0) = 1.0;
    CHECK_THROWS_AS(DensityState::from_matrix(d, N, nh), std::invalid_argument);

    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    neg(2, 2) = 0.0;
    CHECK_THROWS_AS(DensityState::from_matrix(d, N, neg), std::invalid_argument);
}

TEST_CASE("Husimi basics") {
    CounterRng rng(31);
    const int d = 2, N = 3;
    const double dim = binomial(N + d, d);

    // coherent projector at eta evaluates to 1 at eta
    auto eta = random_point(rng, d);
    DensityState coh = DensityState::coherent(d, N, eta);
    CHECK(coh.husimi(eta) == doctest::Approx(1.0).epsilon(1e-12));

    // maximally mixed: constant 1/binom
    DensityState mix = DensityState::maximally_mixed(d, N);
    for (int trial = 0; trial < 20; ++trial) {
        auto z = random_point(rng, d);
        CHECK(std::abs(mix.husimi(z) - 1.0 / dim) < 1e-12);
    }

    // rank-1 state of zeta_1^N: |zeta_1|^{2N}
    DensityState zn = DensityState::coherent(d, N, pole(d));
    for (int trial = 0; trial < 10; ++trial) {
        auto z = random_point(rng, d);
        CHECK(zn.husimi(z) == doctest::Approx(std::pow(std::norm(z[0]), N)).epsilon(1e-10));
    }
}

TEST_CASE("Husimi is linear in the state (mixtures)") {
    CounterRng rng(37);
    const int d = 1, N = 3;
    DensityState a = random_mixed(rng, d, N, 2);
    DensityState b = random_mixed(rng, d, N, 3);
    const double lam = 0.3;
    Eigen::MatrixXcd mm = lam * a.matrix() + (1.0 - lam) * b.matrix();
    DensityState mix = DensityState::from_matrix(d, N, std::move(mm));
    for (int trial = 0; trial < 10; ++trial) {
        auto z = random_point(rng, d);
        CHECK(mix.husimi(z) ==
              doctest::Approx(lam * a.husimi(z) + (1.0 - lam) * b.husimi(z)).epsilon(1e-11));
    }
}

TEST_CASE("rank-1 consistency with the pure-state functionals") {
    CounterRng rng(41);
    const int d = 2, N = 4;
    for (int trial = 0; trial < 5; ++trial) {
        HomPoly Q = HomPoly::random_unit(d, N, rng);
        DensityState st = DensityState::pure(Q);

        // pointwise Husimi equals |Q|^2
        for (int k = 0; k < 5; ++k) {
            auto z = random_point(rng, d);
            CHECK(st.husimi(z) == doctest::Approx(std::norm(Q.eval(z))).epsilon(1e-10));
        }

        // exact entropy paths agree to 1e-8
        McValue sp = st.entropy(ConvexFn::linear());
        McValue qp = wehrl_entropy(Q, ConvexFn::linear());
        CHECK(std::abs(sp.value - qp.value) < 1e-12);

        // cap concentration agrees exactly
        auto eta = random_point(rng, d);
        Region cap = Region::cap(eta, 0.2);
        McValue cs = st.concentration(cap);
        McValue cq = concentration(Q, cap);
        CHECK(std::abs(cs.value - cq.value) < 1e-8);

        // Monte Carlo entropy with the same seed uses the same cloud
        EntropyOptions eop;
        eop.samples = 50000;
        eop.seed = 1234 + static_cast<std::uint64_t>(trial);
        McValue se = st.entropy(ConvexFn::xlogx(), eop);
        McValue qe = wehrl_entropy(Q, ConvexFn::xlogx(), eop);
        CHECK(std::abs(se.value - qe.value) < 1e-8 + 1e-10);
    }
}

TEST_CASE("mixed-state entropy obeys the coherent lower bound") {
    CounterRng rng(43);
    const int d = 1, N = 4;
    const ConvexFn phi = ConvexFn::power(2.0);
    const double Sstar = extremal_entropy(N, d, phi);
    EntropyOptions eop;
    eop.samples = 100000;
    for (int trial = 0; trial < 5; ++trial) {
        DensityState st = random_mixed(rng, d, N, 3);
        McValue S = st.entropy(phi, eop);
        CHECK(S.value - Sstar >= -4.0 * S.stderr_ - 1e-12);
    }

    // maximally mixed with Phi(t) = t^2: S = -1/binom
    const double dim = binomial(N + d, d);
    DensityState mix = DensityState::maximally_mixed(d, N);
    McValue S = mix.entropy(phi, eop);
    CHECK(S.value == doctest::Approx(-1.0 / dim).epsilon(1e-12));

    // coherent state entropy matches the polynomial extremal value
    DensityState coh = DensityState::coherent(d, N, pole(d));
    McValue Sc = coh.entropy(phi, eop);
    CHECK(std::abs(Sc.value - Sstar) < 4.0 * Sc.stderr_ + 1e-9);
}

TEST_CASE("trace distance") {
    CounterRng rng(47);
    const int d = 1, N = 3;

    // self-distance at the projector's own center
    auto eta = random_point(rng, d);
    DensityState coh = DensityState::coherent(d, N, eta);
    CHECK(coh.trace_distance_to(eta) < 1e-10);
    auto td = coh.trace_distance_to_coherent();
    CHECK(td.value < 1e-5);

    // equal mixture of orthogonal coherent states: distance 1 at either center
    std::vector<cplx> e1 = pole(d);
    std::vector<cplx> e2(static_cast<std::size_t>(d) + 1, cplx{0.0, 0.0});
    e2[1] = 1.0;  // kernels at orthogonal centers have orthogonal coordinates
    Eigen::MatrixXcd m = 0.5 * coherent_projector(d, N, e1) + 0.5 * coherent_projector(d, N, e2);
    DensityState two = DensityState::from_matrix(d, N, std::move(m));
    CHECK(two.trace_distance_to(e1) == doctest::Approx(1.0).epsilon(1e-10));
    auto td2 = two.trace_distance_to_coherent();
    CHECK(td2.value >= 0.0);
    CHECK(td2.value <= 2.0);
    CHECK(td2.value == doctest::Approx(1.0).epsilon(1e-4));

    // generic state: bounds
    DensityState st = random_mixed(rng, d, N, 4);
    auto td3 = st.trace_distance_to_coherent();
    CHECK(td3.value > 0.0);
    CHECK(td3.value <= 2.0);
}

TEST_CASE("unitary covariance") {
    CounterRng rng(53);
    const int d = 1, N = 3;
    DensityState st = random_mixed(rng, d, N, 2);
    auto R = random_unitary(d + 1, rng);
    Eigen::MatrixXcd U = rotation_matrix_onb(d, N, R);
    CHECK((U * U.adjoint() - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() <
          1e-10);
    Eigen::MatrixXcd conj_m = U * st.matrix() * U.adjoint();
    DensityState rotated = DensityState::from_matrix(d, N, std::move(conj_m));

    EntropyOptions eop;
    eop.samples = 150000;
    McValue a = st.entropy(ConvexFn::xlogx(), eop);
    eop.seed = 99;
    McValue b = rotated.entropy(ConvexFn::xlogx(), eop);
    CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.stderr_, b.stderr_));

    // the trace-distance argmin maps by the rotation: rotating zeta maps
    // Husimi values, u_{U rho U*}(zeta) = u_rho(R^{-1} zeta)
    auto z = random_point(rng, d);
    std::vector<cplx> Rinv_z(static_cast<std::size_t>(d) + 1, cplx{0.0, 0.0});
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j)
            Rinv_z[static_cast<std::size_t>(i)] += std::conj(R[static_cast<std::size_t>(j * (d + 1) + i)]) * z[static_cast<std::size_t>(j)];
    CHECK(rotated.husimi(z) == doctest::Approx(st.husimi(Rinv_z)).epsilon(1e-9));
}
