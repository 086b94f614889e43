#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "io.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace wehrl {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

std::vector<cplx> random_sphere_point(CounterRng& rng, int d) {
    std::vector<cplx> z(static_cast<std::size_t>(d) + 1);
    double n2 = 0.0;
    for (auto& x : z) {
        x = cplx{rng.next_normal(), rng.next_normal()};
        n2 += std::norm(x);
    }
    for (auto& x : z) x /= std::sqrt(n2);
    return z;
}

// Paired samples of U = |Q|^2 and V = |K(., eta)|^2 on a common cloud.
void paired_kernel_samples(const HomPoly& Q, std::span<const cplx> eta, std::size_t n,
                           std::uint64_t seed, std::vector<double>& U, std::vector<double>& V) {
    const int d = Q.dim();
    const int N = Q.degree();
    const std::size_t stride = static_cast<std::size_t>(d) + 1;
    U.resize(n);
    V.resize(n);
    std::vector<cplx> etac(eta.begin(), eta.end());
    stream_sphere_samples(d, n, seed, [&](std::size_t begin, std::span<const cplx> pts) {
        DenseEvaluator ev(Q);
        const std::size_t m = pts.size() / stride;
        for (std::size_t i = 0; i < m; ++i) {
            auto z = pts.subspan(i * stride, stride);
            U[begin + i] = std::norm(ev(z));
            cplx ip = 0.0;
            for (std::size_t k = 0; k < stride; ++k) ip += z[k] * std::conj(etac[k]);
            V[begin + i] = ipow(std::norm(ip), N);
        }
    });
}

// binom * mean(X ; X > threshold) where threshold is the empirical
// (1-omega)-quantile of X.
struct TopMean {
    double value = 0.0;
    double threshold = 0.0;
};
TopMean top_mean(const std::vector<double>& x, double omega, double binom) {
    std::vector<double> sorted(x);
    std::size_t keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(omega * static_cast<double>(x.size()))));
    std::nth_element(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(keep),
                     sorted.end());
    TopMean tm;
    tm.threshold = sorted[sorted.size() - keep];
    double acc = 0.0;
    for (double v : x)
        if (v > tm.threshold) acc += v;
    tm.value = binom * acc / static_cast<double>(x.size());
    return tm;
}

double nanval() { return std::nan(""); }

struct LogFit {
    double slope = std::nan("");
    int points = 0;
};
LogFit loglog_fit(const std::vector<std::pair<double, double>>& xy) {
    LogFit f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0)) continue;
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    f.points = n;
    if (n >= 2) f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return f;
}

}  // namespace

double SweepConfig::resolved_omega_tilde() const {
    return omega_tilde > 0.0 ? omega_tilde : default_omega_tilde(d);
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    SweepConfig c;
    if (j.contains("d")) c.d = j["d"].get<int>();
    if (j.contains("N")) c.N = j["N"].get<int>();
    if (j.contains("phi")) c.phi = j["phi"].get<std::string>();
    if (j.contains("omega_grid")) c.omega_grid = j["omega_grid"].get<std::vector<double>>();
    if (j.contains("polynomials")) c.polynomials = j["polynomials"].get<int>();
    if (j.contains("samples")) c.samples = j["samples"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("omega_tilde")) c.omega_tilde = j["omega_tilde"].get<double>();
    if (j.contains("compute_asymmetry")) c.compute_asymmetry = j["compute_asymmetry"].get<bool>();
    if (j.contains("asym_samples")) c.asym_samples = j["asym_samples"].get<std::size_t>();
    if (j.contains("generator")) {
        const auto& g = j["generator"];
        const std::string kind = g.value("kind", "gaussian");
        if (kind == "gaussian")
            c.generator.kind = GeneratorSpec::Kind::Gaussian;
        else if (kind == "near_kernel")
            c.generator.kind = GeneratorSpec::Kind::NearKernel;
        else if (kind == "file")
            c.generator.kind = GeneratorSpec::Kind::File;
        else
            throw std::invalid_argument("generator.kind: unknown '" + kind + "'");
        if (g.contains("eps_min")) c.generator.eps_min = g["eps_min"].get<double>();
        if (g.contains("eps_max")) c.generator.eps_max = g["eps_max"].get<double>();
        if (g.contains("path")) c.generator.path = g["path"].get<std::string>();
    }
    return c;
}

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json j;
    j["d"] = d;
    j["N"] = N;
    j["phi"] = phi;
    j["omega_grid"] = omega_grid;
    j["polynomials"] = polynomials;
    j["samples"] = samples;
    j["seed"] = seed;
    j["omega_tilde"] = resolved_omega_tilde();
    j["compute_asymmetry"] = compute_asymmetry;
    j["asym_samples"] = asym_samples;
    nlohmann::json g;
    switch (generator.kind) {
        case GeneratorSpec::Kind::Gaussian: g["kind"] = "gaussian"; break;
        case GeneratorSpec::Kind::NearKernel:
            g["kind"] = "near_kernel";
            g["eps_min"] = generator.eps_min;
            g["eps_max"] = generator.eps_max;
            break;
        case GeneratorSpec::Kind::File:
            g["kind"] = "file";
            g["path"] = generator.path;
            break;
    }
    j["generator"] = std::move(g);
    return j;
}

HomPoly generate_polynomial(const SweepConfig& cfg, std::size_t item, double* eps_out) {
    CounterRng rng = CounterRng(cfg.seed).substream(0xa11ce + item);
    if (eps_out) *eps_out = nanval();
    switch (cfg.generator.kind) {
        case GeneratorSpec::Kind::Gaussian:
            return HomPoly::random_unit(cfg.d, cfg.N, rng);
        case GeneratorSpec::Kind::NearKernel: {
            double eps = cfg.generator.eps_min;
            if (cfg.polynomials > 1) {
                const double t = static_cast<double>(item) / (cfg.polynomials - 1);
                eps = std::exp(std::log(cfg.generator.eps_min) +
                               t * (std::log(cfg.generator.eps_max) - std::log(cfg.generator.eps_min)));
            }
            if (eps_out) *eps_out = eps;
            auto eta = random_sphere_point(rng, cfg.d);
            HomPoly K = HomPoly::reproducing_kernel(cfg.N, eta);
            HomPoly G = HomPoly::random_unit(cfg.d, cfg.N, rng);
            // orthogonal complement of the kernel direction
            HomPoly Gp = G - K * G.bombieri_inner(K);
            if (Gp.norm() < 1e-12) Gp = G;  // G parallel to K: vanishing odds
            return (K + Gp.normalized() * cplx{eps, 0.0}).normalized();
        }
        case GeneratorSpec::Kind::File: return load_poly(cfg.generator.path).normalized();
    }
    throw std::logic_error("generate_polynomial: unreachable");
}

std::vector<StabilityRecord> sweep_concentration_stability(const SweepConfig& cfg,
                                                           SweepSummary* summary) {
    const auto t0 = std::chrono::steady_clock::now();
    const double omega_tilde = cfg.resolved_omega_tilde();
    if (cfg.omega_grid.empty())
        throw std::invalid_argument("sweep_concentration_stability: omega grid is empty");
    for (double w : cfg.omega_grid)
        if (!(w > 0.0 && w < omega_tilde))
            throw std::invalid_argument(
                "sweep_concentration_stability: omega grid must lie in (0, omega_tilde)");

    const double binom = binomial(cfg.N + cfg.d, cfg.d);
    std::vector<StabilityRecord> records;
    SweepSummary local;

    for (int item = 0; item < cfg.polynomials; ++item) {
        double eps = nanval();
        HomPoly Q = generate_polynomial(cfg, static_cast<std::size_t>(item), &eps);
        SupOptions sopt;
        sopt.seed = CounterRng(cfg.seed).substream(0x500 + static_cast<std::uint64_t>(item)).next_u64();
        SupResult sup = sup_modulus(Q, sopt);
        const double D = distance_from_T(sup.T);

        std::vector<double> U, V;
        paired_kernel_samples(Q, sup.argmax, cfg.samples,
                              CounterRng(cfg.seed).substream(0xc10d + static_cast<std::uint64_t>(item)).next_u64(),
                              U, V);

        for (double omega : cfg.omega_grid) {
            StabilityRecord rec;
            rec.item = static_cast<std::size_t>(item);
            rec.eps = eps;
            rec.omega = omega;
            rec.phi = "";
            rec.D = D;
            rec.D2 = D * D;
            const double Cstar = extremal_concentration(cfg.N, cfg.d, omega);

            // paired estimator of the relative deficit: the kernel top-mean
            // tracks C* with the same sampling noise as the Q top-mean
            TopMean tu = top_mean(U, omega, binom);
            TopMean tv = top_mean(V, omega, binom);
            rec.deficit = (tv.value - tu.value) / Cstar;

            const int B = 32;
            const std::size_t bs = U.size() / B;
            std::vector<double> bd(B);
            for (int b = 0; b < B; ++b) {
                double au = 0.0, av = 0.0;
                for (std::size_t i = static_cast<std::size_t>(b) * bs; i < static_cast<std::size_t>(b + 1) * bs; ++i) {
                    if (U[i] > tu.threshold) au += U[i];
                    if (V[i] > tv.threshold) av += V[i];
                }
                bd[static_cast<std::size_t>(b)] = binom * (av - au) / (static_cast<double>(bs) * Cstar);
            }
            rec.deficit_stderr = mc_mean(bd).stderr_;

            rec.coeff = stability_coefficient(cfg.N, cfg.d, omega, omega_tilde);
            rec.alpha = alpha_coefficient(omega, cfg.N, cfg.d, omega_tilde);

            if (cfg.compute_asymmetry) {
                DenseEvaluator ev(Q.normalized());
                auto member = [&ev, thr = tu.threshold](std::span<const cplx> z) mutable {
                    return std::norm(ev(z)) > thr;
                };
                AsymOptions aop;
                aop.samples = cfg.asym_samples;
                aop.seed = CounterRng(cfg.seed).substream(0xa57 + static_cast<std::uint64_t>(item)).next_u64();
                AsymResult ar = fraenkel_asymmetry(cfg.N, cfg.d, member, omega, aop, sup.argmax);
                rec.asym2 = ar.value * ar.value;
            }

            if (D < 1e-6)
                rec.status = "extremal";
            else if (rec.deficit < -4.0 * rec.deficit_stderr)
                rec.status = "violation";
            else if (rec.deficit < 4.0 * rec.deficit_stderr)
                rec.status = "below_noise";
            else
                rec.status = "ok";
            if (D > 1e-6) rec.ratio = rec.deficit / rec.D2;
            if (rec.status == "violation") ++local.violations;
            if (rec.status == "ok") {
                if (std::isnan(local.min_ratio) || rec.ratio < local.min_ratio)
                    local.min_ratio = rec.ratio;
                if (std::isnan(local.max_ratio) || rec.ratio > local.max_ratio)
                    local.max_ratio = rec.ratio;
            }
            records.push_back(std::move(rec));
        }
    }
    local.records = records.size();
    local.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (summary) *summary = local;
    return records;
}

std::vector<StabilityRecord> sweep_wehrl_stability(const SweepConfig& cfg, SweepSummary* summary) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConvexFn phi = ConvexFn::parse(cfg.phi);
    std::vector<StabilityRecord> records;
    SweepSummary local;

    if (phi.is_linear()) {
        // the stability theorem's hypotheses exclude linear Phi; emit the
        // exclusion status instead of degenerate zeros
        for (int item = 0; item < cfg.polynomials; ++item) {
            StabilityRecord rec;
            rec.item = static_cast<std::size_t>(item);
            rec.phi = cfg.phi;
            rec.D = rec.D2 = rec.deficit = rec.deficit_stderr = nanval();
            rec.status = "excluded: linear";
            records.push_back(std::move(rec));
        }
        local.records = records.size();
        if (summary) *summary = local;
        return records;
    }

    const double Sstar = extremal_entropy(cfg.N, cfg.d, phi);
    const double binom = binomial(cfg.N + cfg.d, cfg.d);
    std::vector<double> significant_ratios;

    for (int item = 0; item < cfg.polynomials; ++item) {
        double eps = nanval();
        HomPoly Q = generate_polynomial(cfg, static_cast<std::size_t>(item), &eps);
        SupOptions sopt;
        sopt.seed = CounterRng(cfg.seed).substream(0x5e0 + static_cast<std::uint64_t>(item)).next_u64();
        SupResult sup = sup_modulus(Q, sopt);
        const double D = distance_from_T(sup.T);

        StabilityRecord rec;
        rec.item = static_cast<std::size_t>(item);
        rec.eps = eps;
        rec.phi = cfg.phi;
        rec.D = D;
        rec.D2 = D * D;

        const std::uint64_t cseed =
            CounterRng(cfg.seed).substream(0xc10d + static_cast<std::uint64_t>(item)).next_u64();
        if (cfg.generator.kind == GeneratorSpec::Kind::NearKernel) {
            // paired against the matched kernel: E[S_mc(K)] is exactly the
            // extremal entropy, so the difference estimator is unbiased and
            // its variance scales with the perturbation
            std::vector<double> U, V;
            paired_kernel_samples(Q, sup.argmax, cfg.samples, cseed, U, V);
            std::vector<double> diff(U.size());
            for (std::size_t i = 0; i < U.size(); ++i)
                diff[i] = phi(std::min(1.0, V[i])) - phi(std::min(1.0, U[i]));
            MeanStderr ms = mc_mean(diff);
            // S(Q) - S(K) = binom * mean(Phi(V) - Phi(U))
            rec.deficit = binom * ms.mean;
            rec.deficit_stderr = binom * ms.stderr_;
        } else {
            McValue S = wehrl_entropy(Q, phi, {cfg.samples, cseed, false});
            rec.deficit = S.value - Sstar;
            rec.deficit_stderr = S.stderr_;
        }

        if (D < 1e-6)
            rec.status = "extremal";
        else if (rec.deficit < -4.0 * rec.deficit_stderr)
            rec.status = "violation";
        else if (rec.deficit < 4.0 * rec.deficit_stderr)
            rec.status = "below_noise";
        else
            rec.status = "ok";
        if (D > 1e-6) rec.ratio = rec.deficit / rec.D2;
        if (rec.status == "violation") ++local.violations;
        if (rec.status == "ok") {
            significant_ratios.push_back(rec.ratio);
            if (std::isnan(local.min_ratio) || rec.ratio < local.min_ratio)
                local.min_ratio = rec.ratio;
            if (std::isnan(local.max_ratio) || rec.ratio > local.max_ratio)
                local.max_ratio = rec.ratio;
        }
        records.push_back(std::move(rec));
    }

    if (significant_ratios.size() >= 4) {
        std::vector<double> s(significant_ratios);
        std::sort(s.begin(), s.end());
        const double median = s[s.size() / 2];
        // ratios collapsing toward zero hint at the N < N_Phi regime
        local.possible_subthreshold = s.front() < 0.01 * median;
    }
    local.records = records.size();
    local.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (summary) *summary = local;
    return records;
}

HomPoly sharpness_polynomial(int d, int N, double eps) {
    std::vector<int> a0(static_cast<std::size_t>(d) + 1, 0);
    a0[0] = N;
    std::vector<int> a1(static_cast<std::size_t>(d) + 1, 0);
    a1[0] = N - 1;
    a1[1] = 1;
    const double nrm = std::sqrt(1.0 + eps * eps / N);
    return HomPoly::from_terms(d, N,
                               {{a0, cplx{1.0 / nrm, 0.0}}, {a1, cplx{eps / nrm, 0.0}}});
}

SharpnessReport sharpness_family(int d, int N, const std::vector<double>& eps_list,
                                 const ConvexFn& phi, std::size_t samples, std::uint64_t seed) {
    SharpnessReport rep;
    const double binom = binomial(N + d, d);
    std::size_t k = 0;
    for (double eps : eps_list) {
        if (!(eps > 0.0 && eps <= 1.0))
            throw std::invalid_argument("sharpness_family: eps must lie in (0, 1]");
        HomPoly Q = sharpness_polynomial(d, N, eps);
        SupOptions sopt;
        sopt.seed = seed + 17 * k;
        SupResult sup = sup_modulus(Q, sopt);

        SharpnessPoint pt;
        pt.eps = eps;
        pt.T = sup.T;
        pt.D = distance_from_T(sup.T);

        std::vector<double> U, V;
        paired_kernel_samples(Q, sup.argmax, samples, CounterRng(seed).substream(k).next_u64(), U,
                              V);
        std::vector<double> diff(U.size());
        for (std::size_t i = 0; i < U.size(); ++i)
            diff[i] = phi(std::min(1.0, V[i])) - phi(std::min(1.0, U[i]));
        MeanStderr ms = mc_mean(diff);
        pt.deficit = binom * ms.mean;  // S(Q) - S(K)
        pt.deficit_stderr = binom * ms.stderr_;
        pt.significant = pt.deficit > 4.0 * pt.deficit_stderr;
        rep.points.push_back(pt);
        ++k;
    }

    std::vector<std::pair<double, double>> dxy, fxy;
    for (const auto& p : rep.points) {
        dxy.emplace_back(p.eps, p.D);
        if (p.significant) {
            fxy.emplace_back(p.eps, p.deficit);
            const double r = p.deficit / (p.D * p.D);
            if (std::isnan(rep.ratio_min) || r < rep.ratio_min) rep.ratio_min = r;
            if (std::isnan(rep.ratio_max) || r > rep.ratio_max) rep.ratio_max = r;
            ++rep.significant_points;
        }
    }
    rep.slope_D = loglog_fit(dxy).slope;
    rep.slope_deficit = loglog_fit(fxy).slope;
    return rep;
}

FockReport fock_limit_check(const AffinePoly& f, const std::vector<int>& degrees, double area,
                            const ConvexFn& phi, std::size_t samples, std::uint64_t seed) {
    const int d = f.dim();
    // ball of Lebesgue volume `area` in C^d: vol = pi^d r^{2d} / d!
    const double r2 = std::pow(area * std::tgamma(d + 1.0) / std::pow(M_PI, d), 1.0 / d);

    // exact Fock norm: ||z^beta||^2 = beta! / pi^{|beta|}
    const auto& idx = enumerate_multiindices(d, f.degree_bound());
    auto fc = f.coeffs();
    double fock_norm2 = 0.0;
    for (std::size_t i = 0; i < fc.size(); ++i) {
        if (fc[i] == cplx{0.0, 0.0}) continue;
        double beta_fact = 1.0;
        int beta_deg = 0;
        for (int j = 1; j <= d; ++j) {
            beta_fact *= std::tgamma(idx[i][j] + 1.0);
            beta_deg += idx[i][j];
        }
        fock_norm2 += std::norm(fc[i]) * beta_fact / std::pow(M_PI, beta_deg);
    }

    FockReport rep;

    // Gaussian-weight oracle: samples with density e^{-pi |w|^2}
    {
        const double sigma = 1.0 / std::sqrt(2.0 * M_PI);
        std::vector<double> conc_vals(samples), ent_vals(samples);
        CounterRng base(seed ^ 0xf0c4ULL);
        const HomPoly fh = f.homogenize();
        parallel_chunks(samples, 1 << 16, [&](std::size_t c, std::size_t begin, std::size_t end) {
            CounterRng rng = base.substream(c);
            DenseEvaluator ev(fh);
            std::vector<cplx> zeta(static_cast<std::size_t>(d) + 1);
            zeta[0] = 1.0;
            // wide proposal for the entropy integral (variance sigma2 per
            // real coordinate), importance-corrected below
            const double sigma2 = 1.0 / std::sqrt(M_PI);
            for (std::size_t i = begin; i < end; ++i) {
                double w2 = 0.0;
                for (int j = 0; j < d; ++j) {
                    zeta[static_cast<std::size_t>(j + 1)] = cplx{sigma * rng.next_normal(), sigma * rng.next_normal()};
                    w2 += std::norm(zeta[static_cast<std::size_t>(j + 1)]);
                }
                const double f2 = std::norm(ev(zeta));
                conc_vals[i] = (w2 < r2) ? f2 : 0.0;

                // independent draw for the entropy estimator
                double w2b = 0.0;
                for (int j = 0; j < d; ++j) {
                    zeta[static_cast<std::size_t>(j + 1)] = cplx{sigma2 * rng.next_normal(), sigma2 * rng.next_normal()};
                    w2b += std::norm(zeta[static_cast<std::size_t>(j + 1)]);
                }
                const double u = std::min(1.0, std::norm(ev(zeta)) * std::exp(-M_PI * w2b) / fock_norm2);
                const double density = std::pow(0.5, d) * std::exp(-0.5 * M_PI * w2b);
                ent_vals[i] = phi(u) / density;
            }
        });
        MeanStderr cm = mc_mean(conc_vals);
        rep.oracle_concentration = cm.mean / fock_norm2;
        rep.oracle_concentration_stderr = cm.stderr_ / fock_norm2;
        MeanStderr em = mc_mean(ent_vals);
        rep.oracle_entropy = -em.mean;
        rep.oracle_entropy_stderr = em.stderr_;
    }

    for (int N : degrees) {
        if (N < f.degree_bound())
            throw std::invalid_argument("fock_limit_check: N below the degree of f");
        AffinePoly qN = f.rescale_argument(std::sqrt(N / M_PI), N);
        const HomPoly qNh = qN.homogenize();
        const double norm2 = qNh.norm_sq();
        const double binom = binomial(N + d, d);
        const double rN2 = r2 * M_PI / N;

        std::vector<double> conc_vals(samples), ent_vals(samples);
        stream_fs_samples(d, samples, seed + static_cast<std::uint64_t>(N),
                          [&](std::size_t begin, std::span<const cplx> pts) {
                              DenseEvaluator ev(qNh);
                              std::vector<cplx> zeta(static_cast<std::size_t>(d) + 1);
                              zeta[0] = 1.0;
                              const std::size_t m = pts.size() / static_cast<std::size_t>(d);
                              for (std::size_t i = 0; i < m; ++i) {
                                  auto z = pts.subspan(i * static_cast<std::size_t>(d), static_cast<std::size_t>(d));
                                  double z2 = 0.0;
                                  for (int j = 0; j < d; ++j) {
                                      zeta[static_cast<std::size_t>(j + 1)] = z[static_cast<std::size_t>(j)];
                                      z2 += std::norm(z[static_cast<std::size_t>(j)]);
                                  }
                                  const double q2 = std::norm(ev(zeta));
                                  const double v = q2 / (norm2 * std::pow(1.0 + z2, N));
                                  conc_vals[begin + i] = (z2 < rN2) ? binom * v : 0.0;
                                  ent_vals[begin + i] = phi(std::min(1.0, v));
                              }
                          });
        FockPoint pt;
        pt.N = N;
        MeanStderr cm = mc_mean(conc_vals);
        pt.concentration = cm.mean;
        pt.concentration_stderr = cm.stderr_;
        MeanStderr em = mc_mean(ent_vals);
        pt.entropy = -binom * em.mean;
        pt.entropy_stderr = binom * em.stderr_;
        rep.points.push_back(pt);
    }
    return rep;
}

AuditReport differential_inequality_audit(const AuditConfig& cfg) {
    AuditReport rep;
    const double omega_tilde = cfg.omega_tilde > 0.0 ? cfg.omega_tilde : default_omega_tilde(cfg.d);
    const ExtremalProfile ex{cfg.d, cfg.N};

    for (int item = 0; item < cfg.polynomials; ++item) {
        CounterRng rng = CounterRng(cfg.seed).substream(static_cast<std::uint64_t>(item));
        HomPoly Q = HomPoly::random_unit(cfg.d, cfg.N, rng);
        SupOptions sopt;
        sopt.seed = cfg.seed + static_cast<std::uint64_t>(item);
        SupResult sup = sup_modulus(Q, sopt);
        LevelProfile profile = LevelProfile::build(
            Q, cfg.samples, CounterRng(cfg.seed).substream(0xbeef + static_cast<std::uint64_t>(item)).next_u64(),
            sup.T);

        AuditPolyResult pr;
        pr.item = static_cast<std::size_t>(item);
        pr.T = sup.T;
        auto diffrep = profile.check_differential_inequality(omega_tilde, cfg.grid_points);
        pr.violations = diffrep.violations;
        pr.inconclusive = diffrep.inconclusive;

        // monotonicity of (mu^{1/d} - mu0^{1/d}) / t^{1/N} on (t^omega~, T)
        const double t_lo = omega_tilde < 1.0 ? profile.mu_inverse(omega_tilde) : 1e-6;
        const double t_hi = sup.T;
        const std::size_t n = profile.sample_count();
        double prev_r = 0.0, prev_noise = 0.0;
        bool have_prev = false;
        for (int g = 0; g < cfg.grid_points; ++g) {
            const double t = t_lo + (g + 0.5) * (t_hi - t_lo) / cfg.grid_points;
            const double m = profile.mu(t);
            const double m0 = ex.mu0(t);
            const double tp = std::pow(t, 1.0 / cfg.N);
            const double r = (std::pow(m, 1.0 / cfg.d) - std::pow(m0, 1.0 / cfg.d)) / tp;
            const double sd_mu = std::sqrt(m * (1.0 - m) / static_cast<double>(n));
            const double noise =
                (m > 0.0 ? (1.0 / cfg.d) * std::pow(m, 1.0 / cfg.d - 1.0) * sd_mu : 0.0) / tp;
            if (have_prev && r > prev_r + 3.0 * std::sqrt(noise * noise + prev_noise * prev_noise) &&
                m * static_cast<double>(n) > 100.0)
                ++pr.monotonicity_violations;
            prev_r = r;
            prev_noise = noise;
            have_prev = true;
        }

        pr.status = (pr.violations == 0 && pr.monotonicity_violations == 0)
                        ? diffrep.status
                        : "violations";
        rep.total_violations += pr.violations;
        rep.total_monotonicity_violations += pr.monotonicity_violations;
        rep.polys.push_back(std::move(pr));
    }
    bool any_inconclusive = false;
    for (const auto& pr : rep.polys)
        if (pr.status == "inconclusive") any_inconclusive = true;
    if (rep.total_violations > 0 || rep.total_monotonicity_violations > 0)
        rep.status = "violations";
    else
        rep.status = any_inconclusive ? "inconclusive" : "ok";
    return rep;
}

std::string records_to_csv(const std::vector<StabilityRecord>& records) {
    std::string out =
        "item,eps,omega,phi,D,D2,asym2,deficit,deficit_stderr,coeff,alpha,ratio,status\n";
    char buf[512];
    auto num = [](double v, char* b, std::size_t cap) {
        if (std::isnan(v)) {
            b[0] = '\0';
            return b;
        }
        std::snprintf(b, cap, "%.12g", v);
        return b;
    };
    for (const auto& r : records) {
        char e[32], w[32], dv[32], d2[32], a2[32], df[32], ds[32], co[32], al[32], ra[32];
        std::snprintf(buf, sizeof(buf), "%zu,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n", r.item,
                      num(r.eps, e, 32), num(r.omega, w, 32), r.phi.c_str(), num(r.D, dv, 32),
                      num(r.D2, d2, 32), num(r.asym2, a2, 32), num(r.deficit, df, 32),
                      num(r.deficit_stderr, ds, 32), num(r.coeff, co, 32), num(r.alpha, al, 32),
                      num(r.ratio, ra, 32), r.status.c_str());
        out += buf;
    }
    return out;
}

nlohmann::json summary_to_json(const SweepSummary& s, const nlohmann::json& config_echo) {
    nlohmann::json j;
    j["min_ratio"] = std::isnan(s.min_ratio) ? nlohmann::json(nullptr) : nlohmann::json(s.min_ratio);
    j["max_ratio"] = std::isnan(s.max_ratio) ? nlohmann::json(nullptr) : nlohmann::json(s.max_ratio);
    j["violations"] = s.violations;
    j["records"] = s.records;
    j["runtime_seconds"] = s.runtime_seconds;
    j["possible_subthreshold"] = s.possible_subthreshold;
    j["config"] = config_echo;
    return j;
}

}  // namespace wehrl
