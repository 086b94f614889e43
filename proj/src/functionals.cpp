#include "functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "quadrature.hpp"
#include "rng.hpp"

namespace wehrl {

namespace {

double real_inner(std::span<const cplx> a, std::span<const cplx> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        acc += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    return acc;
}

void normalize_vec(std::vector<cplx>& v) {
    double n2 = 0.0;
    for (const cplx& x : v) n2 += std::norm(x);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& x : v) x *= inv;
}

// Projected gradient ascent of |Q|^2 on the unit sphere, run on log |Q|^2 so
// the step scale stays O(1/N) even where the modulus is exponentially small.
// The reported gradient is the one of U itself.
struct AscentOutcome {
    double value = 0.0;
    std::vector<cplx> point;
    bool grad_small = false;
};

AscentOutcome ascend_abs2_on_sphere(std::vector<cplx> start, DenseEvaluator& ev,
                                    std::vector<DenseEvaluator>& partials, double grad_tol,
                                    int max_iter, int degree) {
    normalize_vec(start);
    std::vector<cplx> g(start.size()), cand(start.size());
    double U = std::norm(ev(start));
    if (U <= 0.0) return {0.0, std::move(start), false};
    double step = 1.0 / (2.0 * degree + 2.0);
    bool grad_small = false;
    for (int it = 0; it < max_iter; ++it) {
        const cplx q = ev(start);
        for (std::size_t k = 0; k < g.size(); ++k)
            g[k] = 2.0 * q * std::conj(partials[k](start));
        // tangent projection (the radial direction is pure homogeneity growth)
        const double r = real_inner(g, start);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] -= r * start[k];
        double gn2 = 0.0;
        for (const cplx& x : g) gn2 += std::norm(x);
        const double gn = std::sqrt(gn2);
        if (gn < grad_tol) {
            grad_small = true;
            break;
        }
        // ascend L = log U: gradient g/U, curvature-safe steps ~ 1/N
        const double ln2 = gn2 / (U * U);
        double s = std::min(step * 2.0, 4.0 / (degree + 1.0));
        bool accepted = false;
        while (s > 1e-18) {
            for (std::size_t k = 0; k < cand.size(); ++k) cand[k] = start[k] + (s / U) * g[k];
            normalize_vec(cand);
            const double Uc = std::norm(ev(cand));
            if (Uc > 0.0 && std::log(Uc) >= std::log(U) + 1e-4 * s * ln2) {
                start = cand;
                U = Uc;
                step = s;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            // no improving step representable; stationary at double precision
            grad_small = gn < 1e-6;
            break;
        }
    }
    return {U, std::move(start), grad_small};
}

const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<cplx> quasi_random_sphere_point(std::size_t index, int d) {
    const int m = 2 * (d + 1);
    std::vector<double> u(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double a = std::sqrt(static_cast<double>(kPrimes[j % 12])) * (1.0 + j / 12);
        double v = static_cast<double>(index + 1) * a;
        u[static_cast<std::size_t>(j)] = v - std::floor(v);
    }
    std::vector<cplx> zeta(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) {
        const double u1 = std::max(u[static_cast<std::size_t>(2 * k)], 1e-12);
        const double u2 = u[static_cast<std::size_t>(2 * k + 1)];
        const double r = std::sqrt(-2.0 * std::log(u1));
        zeta[static_cast<std::size_t>(k)] = cplx{r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }
    normalize_vec(zeta);
    return zeta;
}

SupResult sup_modulus(const HomPoly& Q_in, const SupOptions& opts) {
    const HomPoly Q = Q_in.normalized();
    const int d = Q.dim();
    const int N = Q.degree();

    DenseEvaluator ev(Q);
    std::vector<DenseEvaluator> dev;
    dev.reserve(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) dev.emplace_back(Q.partial(k));

    // starts: quasi-random points plus the best Monte Carlo samples
    std::vector<std::vector<cplx>> starts;
    const int n_quasi = opts.starts / 2;
    for (int i = 0; i < n_quasi; ++i) starts.push_back(quasi_random_sphere_point(static_cast<std::size_t>(i), d));

    const int n_mc = opts.starts - n_quasi;
    if (n_mc > 0) {
        SampleCloud cloud = sample_sphere(d, opts.screen_samples, opts.seed);
        std::vector<std::pair<double, std::size_t>> scored(cloud.count);
        DenseEvaluator sev(Q);
        for (std::size_t i = 0; i < cloud.count; ++i)
            scored[i] = {std::norm(sev(cloud.point(i))), i};
        std::partial_sort(scored.begin(), scored.begin() + std::min<std::size_t>(static_cast<std::size_t>(n_mc), scored.size()),
                          scored.end(), std::greater<>());
        for (int i = 0; i < n_mc && static_cast<std::size_t>(i) < scored.size(); ++i) {
            auto p = cloud.point(scored[static_cast<std::size_t>(i)].second);
            starts.emplace_back(p.begin(), p.end());
        }
    }

    SupResult best;
    for (auto& s : starts) {
        AscentOutcome out =
            ascend_abs2_on_sphere(std::move(s), ev, dev, opts.grad_tol, opts.max_iter, N);
        if (out.value > best.T) {
            best.T = out.value;
            best.argmax = std::move(out.point);
        }
        best.converged = best.converged || out.grad_small;
    }
    if (best.T > 1.0 + 1e-9)
        throw std::runtime_error("sup_modulus: T exceeds 1 beyond tolerance (normalization bug?)");
    best.T = std::min(best.T, 1.0);
    return best;
}

double distance_from_T(double T) { return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(T)))); }

DistanceResult distance_to_kernels(const HomPoly& Q, const SupOptions& opts) {
    SupResult s = sup_modulus(Q, opts);
    return {distance_from_T(s.T), s.T, std::move(s.argmax), s.converged};
}

DirectKernelFit distance_direct(const HomPoly& Q_in, const SupOptions& opts) {
    // Independent route for the distance identity: Nelder-Mead on the
    // coefficient-space distance ||Q - K_N(., eta)||^2, with the phase of
    // eta carrying the phase freedom of the kernel family. No point
    // evaluation or gradient enters this path.
    const HomPoly Q = Q_in.normalized();
    const int d = Q.dim();
    const int N = Q.degree();
    const auto& w = bombieri_weights(d, N);

    auto objective = [&](std::span<const double> x) {
        std::vector<cplx> eta(static_cast<std::size_t>(d) + 1);
        double n2 = 0.0;
        for (int k = 0; k <= d; ++k) {
            eta[static_cast<std::size_t>(k)] = cplx{x[static_cast<std::size_t>(2 * k)], x[static_cast<std::size_t>(2 * k + 1)]};
            n2 += std::norm(eta[static_cast<std::size_t>(k)]);
        }
        if (n2 < 1e-14) return 4.0;
        const double inv = 1.0 / std::sqrt(n2);
        for (cplx& e : eta) e *= inv;
        HomPoly K = HomPoly::reproducing_kernel(N, eta);
        auto qc = Q.coeffs();
        auto kc = K.coeffs();
        double acc = 0.0;
        for (std::size_t i = 0; i < qc.size(); ++i) acc += w[i] * std::norm(qc[i] - kc[i]);
        return acc;
    };

    // starts: quasi-random plus the best screening samples of |Q|
    std::vector<std::vector<cplx>> starts;
    const int n_quasi = std::max(2, opts.starts / 4);
    for (int i = 0; i < n_quasi; ++i)
        starts.push_back(quasi_random_sphere_point(static_cast<std::size_t>(i), d));
    {
        SampleCloud cloud = sample_sphere(d, opts.screen_samples, opts.seed + 1);
        std::vector<std::pair<double, std::size_t>> scored(cloud.count);
        DenseEvaluator sev(Q);
        for (std::size_t i = 0; i < cloud.count; ++i)
            scored[i] = {std::norm(sev(cloud.point(i))), i};
        const std::size_t n_mc = static_cast<std::size_t>(std::max(2, opts.starts / 4));
        std::partial_sort(scored.begin(), scored.begin() + std::min(n_mc, scored.size()),
                          scored.end(), std::greater<>());
        for (std::size_t i = 0; i < n_mc && i < scored.size(); ++i) {
            auto p = cloud.point(scored[i].second);
            starts.emplace_back(p.begin(), p.end());
        }
    }

    DirectKernelFit fit;
    fit.min_dist_sq = 4.0;
    for (const auto& s : starts) {
        std::vector<double> x0(2 * static_cast<std::size_t>(d + 1));
        for (int k = 0; k <= d; ++k) {
            x0[static_cast<std::size_t>(2 * k)] = s[static_cast<std::size_t>(k)].real();
            x0[static_cast<std::size_t>(2 * k + 1)] = s[static_cast<std::size_t>(k)].imag();
        }
        // coarse pass, then a refinement restart around the best vertex
        auto [x1, f1] = nelder_mead_min(objective, std::move(x0), 0.5, opts.max_iter);
        auto [x2, f2] = nelder_mead_min(objective, std::move(x1), 1e-3, opts.max_iter);
        const double fx = std::min(f1, f2);
        if (fx < fit.min_dist_sq) {
            fit.min_dist_sq = fx;
            fit.argmin.assign(static_cast<std::size_t>(d) + 1, cplx{});
            double n2 = 0.0;
            for (int k = 0; k <= d; ++k) {
                fit.argmin[static_cast<std::size_t>(k)] = cplx{x2[static_cast<std::size_t>(2 * k)], x2[static_cast<std::size_t>(2 * k + 1)]};
                n2 += std::norm(fit.argmin[static_cast<std::size_t>(k)]);
            }
            for (cplx& e : fit.argmin) e /= std::sqrt(n2);
        }
        fit.converged = true;
    }
    return fit;
}

double cap_measure(int N, int d, double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("cap_measure: t must lie in (0,1)");
    return std::pow(1.0 - std::pow(t, 1.0 / N), d);
}

Region Region::cap(std::vector<cplx> eta, double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("Region::cap: t must lie in (0,1)");
    Region r;
    r.kind_ = Kind::Cap;
    normalize_vec(eta);
    r.eta_ = std::move(eta);
    r.t_ = t;
    return r;
}

Region Region::cap_complement(std::vector<cplx> eta, double t) {
    Region r = cap(std::move(eta), t);
    r.kind_ = Kind::CapComplement;
    return r;
}

Region Region::indicator(std::function<bool(std::span<const cplx>)> member,
                         double declared_measure) {
    if (!(declared_measure > 0.0 && declared_measure < 1.0))
        throw std::domain_error("Region::indicator: measure must lie in (0,1)");
    Region r;
    r.kind_ = Kind::Indicator;
    r.member_ = std::move(member);
    r.declared_measure_ = declared_measure;
    return r;
}

Region Region::superlevel(double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::domain_error("Region::superlevel: omega must lie in (0,1)");
    Region r;
    r.kind_ = Kind::Superlevel;
    r.omega_ = omega;
    return r;
}

double Region::measure(int N, int d) const {
    switch (kind_) {
        case Kind::Cap: return cap_measure(N, d, t_);
        case Kind::CapComplement: return 1.0 - cap_measure(N, d, t_);
        case Kind::Indicator: return declared_measure_;
        case Kind::Superlevel: return omega_;
    }
    return 0.0;
}

bool Region::contains(int N, std::span<const cplx> zeta) const {
    switch (kind_) {
        case Kind::Cap:
        case Kind::CapComplement: {
            cplx ip = 0.0;
            for (std::size_t k = 0; k < eta_.size(); ++k) ip += zeta[k] * std::conj(eta_[k]);
            const bool in_cap = std::norm(ip) > cap_inner_threshold(N, t_);
            return kind_ == Kind::Cap ? in_cap : !in_cap;
        }
        case Kind::Indicator: return member_(zeta);
        case Kind::Superlevel:
            throw std::logic_error("Region::contains: superlevel needs the polynomial context");
    }
    return false;
}

double cap_concentration_exact(const HomPoly& Q, std::span<const cplx> eta, double t) {
    const int d = Q.dim();
    const int N = Q.degree();
    const double x = 1.0 - cap_inner_threshold(N, t);  // rho_1 < x inside the cap
    std::vector<cplx> R = unitary_from_first_column(eta);
    // adjoint, so the rotated polynomial is Q(R xi) with R e_1 = eta
    const int n = d + 1;
    std::vector<cplx> Radj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Radj[static_cast<std::size_t>(i * n + j)] = std::conj(R[static_cast<std::size_t>(j * n + i)]);
    HomPoly Qr = Q.rotate(Radj);

    // C = sum_alpha w_alpha |a_alpha|^2 I_x(N+d-alpha_1, alpha_1+1), where
    // I_x is the regularized incomplete beta (binomial tail, integer orders).
    const auto& idx = enumerate_multiindices(d, N);
    const auto& w = bombieri_weights(d, N);
    auto coeffs = Qr.coeffs();
    const int nn = N + d;
    double C = 0.0;
    std::vector<double> tail_by_a1(static_cast<std::size_t>(N) + 1, -1.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double c2 = std::norm(coeffs[i]);
        if (c2 == 0.0) continue;
        const int a1 = idx[i][0];
        double& tail = tail_by_a1[static_cast<std::size_t>(a1)];
        if (tail < 0.0) {
            // P(Bin(N+d, x) >= N+d-a1)
            double acc = 0.0;
            for (int j = nn - a1; j <= nn; ++j)
                acc += binomial(nn, j) * std::pow(x, j) * std::pow(1.0 - x, nn - j);
            tail = acc;
        }
        C += w[i] * c2 * tail;
    }
    return C / Q.norm_sq();
}

McValue concentration(const HomPoly& Q_in, const Region& region, const ConcOptions& opts) {
    const HomPoly Q = Q_in.normalized();
    const int d = Q.dim();
    const int N = Q.degree();
    const double meas = region.measure(N, d);
    if (!(meas > 0.0 && meas < 1.0))
        throw std::domain_error("concentration: region measure must lie in (0,1)");

    switch (region.kind()) {
        case Region::Kind::Cap:
            return {cap_concentration_exact(Q, region.center(), region.level()), 0.0, true};
        case Region::Kind::CapComplement:
            return {1.0 - cap_concentration_exact(Q, region.center(), region.level()), 0.0, true};
        case Region::Kind::Superlevel: {
            return optimal_concentration(Q, region.omega(), opts).C;
        }
        case Region::Kind::Indicator: {
            const double binom = binomial(N + d, d);
            std::vector<double> vals(opts.samples);
            const std::size_t stride = static_cast<std::size_t>(d) + 1;
            stream_sphere_samples(d, opts.samples, opts.seed,
                                  [&](std::size_t begin, std::span<const cplx> pts) {
                                      DenseEvaluator ev(Q);
                                      const std::size_t m = pts.size() / stride;
                                      for (std::size_t i = 0; i < m; ++i) {
                                          auto z = pts.subspan(i * stride, stride);
                                          vals[begin + i] = region.contains(N, z)
                                                                ? binom * std::norm(ev(z))
                                                                : 0.0;
                                      }
                                  });
            MeanStderr ms = mc_mean(vals);
            return {ms.mean, ms.stderr_, false};
        }
    }
    throw std::logic_error("concentration: unreachable");
}

OptimalConcentration optimal_concentration(const HomPoly& Q_in, double omega,
                                           const ConcOptions& opts) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::domain_error("optimal_concentration: omega must lie in (0,1)");
    const HomPoly Q = Q_in.normalized();
    const int d = Q.dim();
    const int N = Q.degree();
    const double binom = binomial(N + d, d);

    std::vector<double> u = abs2_samples(Q, opts.samples, opts.seed);
    std::vector<double> sorted(u);
    std::size_t keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(omega * static_cast<double>(u.size()))));
    std::nth_element(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(keep), sorted.end());
    const double threshold = sorted[sorted.size() - keep];

    // value: binom * mean(U ; U > threshold); stderr by batch means
    double total = 0.0;
    for (double v : u)
        if (v > threshold) total += v;
    const double value = binom * total / static_cast<double>(u.size());

    const int B = opts.blocks;
    std::vector<double> block_vals(static_cast<std::size_t>(B), 0.0);
    const std::size_t bs = u.size() / static_cast<std::size_t>(B);
    for (int b = 0; b < B; ++b) {
        double acc = 0.0;
        for (std::size_t i = static_cast<std::size_t>(b) * bs; i < (static_cast<std::size_t>(b) + 1) * bs; ++i)
            if (u[i] > threshold) acc += u[i];
        block_vals[static_cast<std::size_t>(b)] = binom * acc / static_cast<double>(bs);
    }
    MeanStderr ms = mc_mean(block_vals);
    return {{value, ms.stderr_, false}, threshold};
}

McValue entropy_from_values(std::span<const double> u, int N, int d, const ConvexFn& phi,
                            bool strict) {
    const double binom = binomial(N + d, d);
    std::vector<double> vals(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double t = u[i];
        if (t > 1.0 + 1e-9 && strict)
            throw std::runtime_error("entropy: |Q|^2 exceeds 1 beyond 1e-9 for unit norm input");
        t = std::min(t, 1.0);
        vals[i] = phi(t);
    }
    MeanStderr ms = mc_mean(vals);
    return {-binom * ms.mean, binom * ms.stderr_, false};
}

McValue wehrl_entropy(const HomPoly& Q_in, const ConvexFn& phi, const EntropyOptions& opts) {
    const HomPoly Q = Q_in.normalized();
    const int d = Q.dim();
    const int N = Q.degree();
    const double binom = binomial(N + d, d);

    if (opts.rule_degree > 0) {
        // user-selected exact rule; only polynomial Phi are exactly
        // integrable, anything else must go through Monte Carlo
        int needed = 0;
        if (phi.is_linear()) {
            needed = N;
        } else if (phi.tag() == ConvexFn::Tag::Power) {
            const int ip = static_cast<int>(std::lround(phi.param()));
            if (std::abs(phi.param() - ip) > 1e-12)
                throw std::invalid_argument(
                    "wehrl_entropy: rule-degree evaluation needs an integer power");
            needed = ip * N;
        } else {
            throw std::invalid_argument(
                "wehrl_entropy: rule-degree evaluation is exact only for linear or integer "
                "power Phi");
        }
        if (opts.rule_degree < needed)
            throw std::invalid_argument("wehrl_entropy: rule degree below the integrand degree " +
                                        std::to_string(needed));
        SphereRule rule(d, opts.rule_degree);
        DenseEvaluator ev(Q);
        const double integral = integrate_sphere_real(
            [&](std::span<const cplx> z) { return phi(std::min(1.0, std::norm(ev(z)))); }, rule);
        return {-binom * integral, 0.0, true};
    }

    if (phi.is_linear()) return {-1.0, 0.0, true};  // Phi(t) = t

    if (phi.tag() == ConvexFn::Tag::Power) {
        const double p = phi.param();
        const int ip = static_cast<int>(std::lround(p));
        if (std::abs(p - ip) < 1e-12 && ip >= 2 && ip * N + d <= 120) {
            // int |Q|^{2p} = ||Q^p||^2 / binom(pN+d, d), exact through the
            // Bombieri norm of the p-th power
            HomPoly P = Q;
            for (int k = 1; k < ip; ++k) P = P.multiply(Q);
            const double integral = P.norm_sq() / binomial(ip * N + d, d);
            return {-binom * integral, 0.0, true};
        }
    }

    std::vector<double> u = abs2_samples(Q, opts.samples, opts.seed);
    return entropy_from_values(u, N, d, phi, opts.strict);
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

double gl_on(double lo, double hi, const std::function<double(double)>& f) {
    static const Axis1D gl = gauss_jacobi_01(64, 0);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * f(lo + (hi - lo) * gl.nodes[i]);
    return (hi - lo) * acc;
}

}  // namespace

double extremal_entropy(int N, int d, const ConvexFn& phi) {
    const double binom = binomial(N + d, d);
    // S = -binom * d * int_0^1 Phi((1-x)^N) x^{d-1} dx  (s = x^d substitution)
    auto integrand = [&](double x) {
        return static_cast<double>(d) * std::pow(x, d - 1) * phi(std::pow(1.0 - x, N));
    };
    switch (phi.tag()) {
        case ConvexFn::Tag::Linear: return -1.0;
        case ConvexFn::Tag::Hinge: {
            // polynomial on [0, 1 - t0^{1/N}], zero after the kink
            const double t0 = phi.param();
            const double xk = 1.0 - std::pow(t0, 1.0 / N);
            return -binom * gl_on(0.0, xk, [&](double x) {
                return static_cast<double>(d) * std::pow(x, d - 1) *
                       (std::pow(1.0 - x, N) - t0);
            });
        }
        case ConvexFn::Tag::Power: {
            const double p = phi.param();
            const int ip = static_cast<int>(std::lround(p));
            if (std::abs(p - ip) < 1e-12 && ip * N + d - 1 <= 120)
                return -binom * gl_on(0.0, 1.0, integrand);  // polynomial, GL-exact
            break;
        }
        default: break;
    }
    return -binom * adaptive_simpson(integrand, 0.0, 1.0, 1e-13);
}

double extremal_concentration(int N, int d, double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::domain_error("extremal_concentration: omega must lie in (0,1)");
    const ExtremalProfile ex{d, N};
    return binomial(N + d, d) * ex.integral_mu0_inv(omega);
}

double alpha_coefficient(double omega, int N, int d, double omega_tilde) {
    if (!(omega > 0.0 && omega < omega_tilde && omega_tilde <= 1.0))
        throw std::domain_error("alpha_coefficient: need 0 < omega < omega_tilde <= 1");
    const ExtremalProfile ex{d, N};
    const double integral = ex.integral_mu0_inv(omega_tilde) - ex.integral_mu0_inv(omega);
    return std::pow(static_cast<double>(N), d) * omega * omega *
           std::pow(1.0 - std::pow(omega, 1.0 / d), N - 1) * integral;
}

double stability_coefficient(int N, int d, double omega, double omega_tilde) {
    if (!(omega > 0.0 && omega < omega_tilde && omega_tilde <= 1.0))
        throw std::domain_error("stability_coefficient: need 0 < omega < omega_tilde <= 1");
    const ExtremalProfile ex{d, N};
    return std::pow(static_cast<double>(N), d) *
           (ex.integral_mu0_inv(omega_tilde) - ex.integral_mu0_inv(omega));
}

// Objective must tolerate any point of R^m.
std::pair<std::vector<double>, double> nelder_mead_min(
    const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
    double scale, int max_iter) {
    const std::size_t m = x0.size();
    std::vector<std::vector<double>> simplex(m + 1, x0);
    std::vector<double> fv(m + 1);
    for (std::size_t i = 1; i <= m; ++i) simplex[i][i - 1] += scale;
    for (std::size_t i = 0; i <= m; ++i) fv[i] = f(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(m + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex.swap(s2);
        fv.swap(f2);
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(fv[m] - fv[0]) < 1e-12) break;
        std::vector<double> centroid(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) centroid[j] += simplex[i][j] / static_cast<double>(m);
        auto blend = [&](double coef) {
            std::vector<double> p(m);
            for (std::size_t j = 0; j < m; ++j) p[j] = centroid[j] + coef * (simplex[m][j] - centroid[j]);
            return p;
        };
        auto xr = blend(-1.0);
        double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = blend(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                simplex[m] = xe;
                fv[m] = fe;
            } else {
                simplex[m] = xr;
                fv[m] = fr;
            }
        } else if (fr < fv[m - 1]) {
            simplex[m] = xr;
            fv[m] = fr;
        } else {
            auto xc = blend(0.5);
            double fc = f(xc);
            if (fc < fv[m]) {
                simplex[m] = xc;
                fv[m] = fc;
            } else {
                for (std::size_t i = 1; i <= m; ++i) {
                    for (std::size_t j = 0; j < m; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return {simplex[0], fv[0]};
}

AsymResult fraenkel_asymmetry(int N, int d,
                              const std::function<bool(std::span<const cplx>)>& member,
                              double region_measure, const AsymOptions& opts,
                              std::span<const cplx> hint) {
    if (!(region_measure > 0.0 && region_measure < 1.0))
        throw std::domain_error("fraenkel_asymmetry: region measure must lie in (0,1)");
    SampleCloud cloud = sample_sphere(d, opts.samples, opts.seed);
    std::vector<char> in_region(cloud.count);
    for (std::size_t i = 0; i < cloud.count; ++i)
        in_region[i] = member(cloud.point(i)) ? 1 : 0;

    // equal-measure cap: |<zeta, eta>|^2 > 1 - measure^{1/d}
    const double thr = 1.0 - std::pow(region_measure, 1.0 / d);
    const std::size_t stride = cloud.stride;

    auto asym_of = [&](std::span<const double> x) {
        // interpret as a complex vector; normalize inside
        std::vector<cplx> eta(static_cast<std::size_t>(d) + 1);
        double n2 = 0.0;
        for (int k = 0; k <= d; ++k) {
            eta[static_cast<std::size_t>(k)] = cplx{x[static_cast<std::size_t>(2 * k)], x[static_cast<std::size_t>(2 * k + 1)]};
            n2 += std::norm(eta[static_cast<std::size_t>(k)]);
        }
        if (n2 < 1e-14) return 2.0;
        const double inv = 1.0 / std::sqrt(n2);
        for (cplx& e : eta) e *= inv;
        std::size_t mismatch = 0;
        for (std::size_t i = 0; i < cloud.count; ++i) {
            const cplx* z = cloud.points.data() + i * stride;
            cplx ip = 0.0;
            for (int k = 0; k <= d; ++k) ip += z[k] * std::conj(eta[static_cast<std::size_t>(k)]);
            const bool in_cap = std::norm(ip) > thr;
            mismatch += (in_cap != static_cast<bool>(in_region[i])) ? 1 : 0;
        }
        return static_cast<double>(mismatch) / (static_cast<double>(cloud.count) * region_measure);
    };

    double best = 2.0;
    std::vector<double> best_x;
    for (int s = 0; s < opts.starts; ++s) {
        std::vector<double> x0(2 * static_cast<std::size_t>(d + 1));
        if (s == 0 && !hint.empty()) {
            for (int k = 0; k <= d; ++k) {
                x0[static_cast<std::size_t>(2 * k)] = hint[static_cast<std::size_t>(k)].real();
                x0[static_cast<std::size_t>(2 * k + 1)] = hint[static_cast<std::size_t>(k)].imag();
            }
        } else {
            auto p = quasi_random_sphere_point(static_cast<std::size_t>(100 + s), d);
            for (int k = 0; k <= d; ++k) {
                x0[static_cast<std::size_t>(2 * k)] = p[static_cast<std::size_t>(k)].real();
                x0[static_cast<std::size_t>(2 * k + 1)] = p[static_cast<std::size_t>(k)].imag();
            }
        }
        auto [x, fx] = nelder_mead_min(asym_of, std::move(x0), 0.3, opts.nm_max_iter);
        if (fx < best) {
            best = fx;
            best_x = std::move(x);
        }
    }

    AsymResult out;
    out.value = best;
    const double p = best * region_measure;  // symmetric-difference measure
    out.stderr_ = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(cloud.count))) /
                  region_measure;
    out.center.resize(static_cast<std::size_t>(d) + 1);
    double n2 = 0.0;
    for (int k = 0; k <= d; ++k) {
        out.center[static_cast<std::size_t>(k)] = cplx{best_x[static_cast<std::size_t>(2 * k)], best_x[static_cast<std::size_t>(2 * k + 1)]};
        n2 += std::norm(out.center[static_cast<std::size_t>(k)]);
    }
    for (cplx& e : out.center) e /= std::sqrt(n2);
    return out;
}

}  // namespace wehrl
