#include "quadrature.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace wehrl {

namespace {

constexpr std::size_t kChunk = 1 << 16;

double jacobi_p(int n, int a, int b, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * ((a + b + 2) * x + a - b);
    for (int m = 2; m <= n; ++m) {
        double t = 2.0 * m + a + b;
        double c1 = 2.0 * m * (m + a + b) * (t - 2.0);
        double c2 = (t - 1.0) * (t * (t - 2.0) * x + static_cast<double>(a) * a - static_cast<double>(b) * b);
        double c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * t;
        double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double jacobi_dp(int n, int a, int b, double x) {
    if (n == 0) return 0.0;
    return 0.5 * (n + a + b + 1) * jacobi_p(n - 1, a + 1, b + 1, x);
}

double range_product(int lo, int hi) {
    double r = 1.0;
    for (int i = lo; i <= hi; ++i) r *= static_cast<double>(i);
    return r;
}

}  // namespace

Axis1D gauss_jacobi_01(int n, int b) {
    if (n < 1 || b < 0) throw std::invalid_argument("gauss_jacobi_01: need n >= 1, b >= 0");
    const int a = 0;
    //                -(2n + a + b + 2) (n + a)! (n + b)! 2^(a+b)
    // weightFactor = -------------------------------------------
    //                   (n + a + b + 1) (n + a + b)! (n + 1)!
    const double wf = -(2.0 * n + a + b + 2) * range_product(n + 1, n + b) *
                      std::pow(2.0, a + b) /
                      ((n + a + b + 1.0) * range_product(n + a + 1, n + a + b) * (n + 1.0));
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        double t = std::cos(M_PI * (0.5 * a + i - 0.25) / (0.5 * (1.0 + a + b) + n));
        double pn = 0.0, dpn = 1.0;
        for (int it = 0; it < 200; ++it) {
            pn = jacobi_p(n, a, b, t);
            dpn = jacobi_dp(n, a, b, t);
            double step = pn / dpn;
            t -= step;
            if (std::abs(pn) < 1e-14 && std::abs(step) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i - 1)] = t;
        w[static_cast<std::size_t>(i - 1)] = wf / (jacobi_p(n + 1, a, b, t) * jacobi_dp(n, a, b, t));
    }
    // map [-1,1] with weight ((1+x)/2)^b to [0,1] with weight rho^b
    Axis1D axis;
    axis.nodes.resize(static_cast<std::size_t>(n));
    axis.weights.resize(static_cast<std::size_t>(n));
    const double scale = std::pow(2.0, -b - 1);
    for (int i = 0; i < n; ++i) {
        axis.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 + x[static_cast<std::size_t>(n - 1 - i)]);
        axis.weights[static_cast<std::size_t>(i)] = scale * w[static_cast<std::size_t>(n - 1 - i)];
    }
    double total = 0.0;
    for (double wi : axis.weights) {
        if (!(wi > 0.0)) throw std::runtime_error("gauss_jacobi_01: non-positive weight");
        total += wi;
    }
    if (std::abs(total - 1.0 / (b + 1)) > 1e-13)
        throw std::runtime_error("gauss_jacobi_01: weights do not sum to 1/(b+1)");
    for (std::size_t i = 1; i < axis.nodes.size(); ++i)
        if (!(axis.nodes[i] > axis.nodes[i - 1]))
            throw std::runtime_error("gauss_jacobi_01: Newton produced degenerate nodes");
    return axis;
}

SphereRule::SphereRule(int d, int max_degree) : d_(d), max_degree_(max_degree) {
    if (d < 1 || max_degree < 1) throw std::invalid_argument("SphereRule: need d >= 1, N >= 1");
    radial_.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) radial_.push_back(gauss_jacobi_01(max_degree + 1, d - 1 - j));
    angular_.assign(static_cast<std::size_t>(d) + 1, 2 * max_degree + 1);
}

std::size_t SphereRule::node_count() const {
    std::size_t n = 1;
    for (const auto& ax : radial_) n *= ax.nodes.size();
    for (int m : angular_) n *= static_cast<std::size_t>(m);
    return n;
}

void SphereRule::for_each_node(
    const std::function<void(std::span<const cplx>, double)>& fn) const {
    const int d = d_;
    const double dfact = std::tgamma(d + 1.0);
    std::vector<std::size_t> ridx(static_cast<std::size_t>(d), 0);
    std::vector<int> aidx(static_cast<std::size_t>(d) + 1, 0);
    std::vector<double> rho(static_cast<std::size_t>(d));
    std::vector<double> theta(static_cast<std::size_t>(d) + 1);
    std::vector<cplx> zeta(static_cast<std::size_t>(d) + 1);

    double ang_w = 1.0;
    for (int m : angular_) ang_w /= static_cast<double>(m);

    bool done = false;
    while (!done) {
        double w = dfact * ang_w;
        for (int j = 0; j < d; ++j) {
            rho[static_cast<std::size_t>(j)] = radial_[static_cast<std::size_t>(j)].nodes[ridx[static_cast<std::size_t>(j)]];
            w *= radial_[static_cast<std::size_t>(j)].weights[ridx[static_cast<std::size_t>(j)]];
        }
        for (int k = 0; k <= d; ++k)
            theta[static_cast<std::size_t>(k)] =
                2.0 * M_PI * aidx[static_cast<std::size_t>(k)] / angular_[static_cast<std::size_t>(k)];
        sphere_coords_to_ambient(rho, theta, zeta);
        fn(zeta, w);

        // odometer: angular digits first, then radial
        int k = 0;
        for (; k <= d; ++k) {
            if (++aidx[static_cast<std::size_t>(k)] < angular_[static_cast<std::size_t>(k)]) break;
            aidx[static_cast<std::size_t>(k)] = 0;
        }
        if (k <= d) continue;
        int j = 0;
        for (; j < d; ++j) {
            if (++ridx[static_cast<std::size_t>(j)] < radial_[static_cast<std::size_t>(j)].nodes.size()) break;
            ridx[static_cast<std::size_t>(j)] = 0;
        }
        if (j == d) done = true;
    }
}

cplx integrate_sphere(const std::function<cplx(std::span<const cplx>)>& f,
                      const SphereRule& rule) {
    cplx acc = 0.0;
    std::size_t node = 0;
    rule.for_each_node([&](std::span<const cplx> zeta, double w) {
        cplx v = f(zeta);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("integrate_sphere: non-finite integrand at node " +
                                     std::to_string(node));
        acc += w * v;
        ++node;
    });
    return acc;
}

double integrate_sphere_real(const std::function<double(std::span<const cplx>)>& f,
                             const SphereRule& rule) {
    return integrate_sphere([&f](std::span<const cplx> z) { return cplx{f(z), 0.0}; }, rule)
        .real();
}

cplx integrate_sphere_product(const HomPoly& P, const HomPoly& Q, const SphereRule& rule) {
    if (P.dim() != rule.dim() || Q.dim() != rule.dim())
        throw std::invalid_argument("integrate_sphere_product: dimension mismatch");
    const int d = rule.dim();
    const int NP = P.degree(), NQ = Q.degree();
    const int maxm = NP + NQ;

    // Angular partial sums (1/M) sum_j e^{i l theta_j}; exactly the discrete
    // grid sums used by the node loop.
    const auto& ang = rule.angular_sizes();
    std::vector<std::vector<cplx>> A(ang.size());
    for (std::size_t k = 0; k < ang.size(); ++k) {
        A[k].resize(static_cast<std::size_t>(2 * maxm + 1));
        for (int l = -maxm; l <= maxm; ++l) {
            cplx s = 0.0;
            for (int j = 0; j < ang[k]; ++j)
                s += std::polar(1.0, 2.0 * M_PI * l * j / ang[k]);
            A[k][static_cast<std::size_t>(l + maxm)] = s / static_cast<double>(ang[k]);
        }
    }

    // Radial partial sums R_j[p][q] = sum_i w_i rho_i^{p/2} (1-rho_i)^{q/2}.
    const auto& rad = rule.radial_axes();
    std::vector<std::vector<double>> R(rad.size());
    for (std::size_t j = 0; j < rad.size(); ++j) {
        R[j].assign(static_cast<std::size_t>(maxm + 1) * static_cast<std::size_t>(maxm + 1), 0.0);
        for (std::size_t i = 0; i < rad[j].nodes.size(); ++i) {
            const double rho = rad[j].nodes[i];
            const double w = rad[j].weights[i];
            const double sr = std::sqrt(rho), so = std::sqrt(1.0 - rho);
            double rp = 1.0;
            for (int p = 0; p <= maxm; ++p) {
                double oq = 1.0;
                for (int q = 0; q <= maxm; ++q) {
                    R[j][static_cast<std::size_t>(p) * static_cast<std::size_t>(maxm + 1) + static_cast<std::size_t>(q)] += w * rp * oq;
                    oq *= so;
                }
                rp *= sr;
            }
        }
    }

    const double dfact = std::tgamma(d + 1.0);
    const auto& ip = enumerate_multiindices(d, NP);
    const auto& iq = enumerate_multiindices(d, NQ);
    auto pc = P.coeffs();
    auto qc = Q.coeffs();

    cplx total = 0.0;
    for (std::size_t i = 0; i < ip.size(); ++i) {
        if (pc[i] == cplx{0.0, 0.0}) continue;
        const auto& a = ip[i].entries;
        for (std::size_t l = 0; l < iq.size(); ++l) {
            if (qc[l] == cplx{0.0, 0.0}) continue;
            const auto& b = iq[l].entries;
            cplx factor = pc[i] * std::conj(qc[l]) * dfact;
            // angular factors
            for (int k = 0; k <= d; ++k)
                factor *= A[static_cast<std::size_t>(k)][static_cast<std::size_t>(a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)] + maxm)];
            // radial factors: sqrt(rho_j) carries s_j = sum of m_k for
            // coordinates k > j, sqrt(1-rho_j) carries m_j
            int sj = 0;
            for (int k = 1; k <= d; ++k) sj += a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(k)];
            double radf = 1.0;
            for (int j = 0; j < d; ++j) {
                const int mj = a[static_cast<std::size_t>(j)] + b[static_cast<std::size_t>(j)];
                if (j > 0) sj -= a[static_cast<std::size_t>(j)] + b[static_cast<std::size_t>(j)];
                radf *= R[static_cast<std::size_t>(j)][static_cast<std::size_t>(sj) * static_cast<std::size_t>(maxm + 1) + static_cast<std::size_t>(mj)];
            }
            total += factor * radf;
        }
    }
    return total;
}

void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t nchunks = (n + chunk_size - 1) / chunk_size;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, nchunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr eptr;
    std::mutex emu;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= nchunks || failed.load()) return;
                try {
                    fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
                } catch (...) {
                    std::scoped_lock lk(emu);
                    if (!failed.exchange(true)) eptr = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && eptr) std::rethrow_exception(eptr);
}

namespace {

// One uniform sphere point from 2(d+1) normals.
void gaussian_sphere_point(CounterRng& rng, int d, cplx* out) {
    double n2 = 0.0;
    for (int k = 0; k <= d; ++k) {
        double re = rng.next_normal();
        double im = rng.next_normal();
        out[k] = cplx{re, im};
        n2 += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (int k = 0; k <= d; ++k) out[k] *= inv;
}

}  // namespace

void stream_sphere_samples(int d, std::size_t n, std::uint64_t seed,
                           const std::function<void(std::size_t, std::span<const cplx>)>& fn) {
    CounterRng base(seed);
    const std::size_t stride = static_cast<std::size_t>(d) + 1;
    parallel_chunks(n, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
        CounterRng rng = base.substream(c);
        std::vector<cplx> buf((end - begin) * stride);
        for (std::size_t i = 0; i < end - begin; ++i)
            gaussian_sphere_point(rng, d, buf.data() + i * stride);
        fn(begin, buf);
    });
}

void stream_fs_samples(int d, std::size_t n, std::uint64_t seed,
                       const std::function<void(std::size_t, std::span<const cplx>)>& fn) {
    CounterRng base(seed);
    const std::size_t sstride = static_cast<std::size_t>(d) + 1;
    parallel_chunks(n, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
        CounterRng rng = base.substream(c);
        std::vector<cplx> pt(sstride);
        std::vector<cplx> buf((end - begin) * static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < end - begin; ++i) {
            do {
                gaussian_sphere_point(rng, d, pt.data());
            } while (pt[0] == cplx{0.0, 0.0});
            for (int j = 0; j < d; ++j)
                buf[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] = pt[static_cast<std::size_t>(j + 1)] / pt[0];
        }
        fn(begin, buf);
    });
}

SampleCloud sample_sphere(int d, std::size_t n, std::uint64_t seed) {
    SampleCloud cloud;
    cloud.d = d;
    cloud.seed = seed;
    cloud.count = n;
    cloud.stride = static_cast<std::size_t>(d) + 1;
    cloud.points.resize(n * cloud.stride);
    stream_sphere_samples(d, n, seed, [&](std::size_t begin, std::span<const cplx> pts) {
        std::copy(pts.begin(), pts.end(), cloud.points.begin() + static_cast<std::ptrdiff_t>(begin * cloud.stride));
    });
    return cloud;
}

SampleCloud sample_fubini_study(int d, std::size_t n, std::uint64_t seed) {
    SampleCloud cloud;
    cloud.d = d;
    cloud.seed = seed;
    cloud.count = n;
    cloud.stride = static_cast<std::size_t>(d);
    cloud.points.resize(n * cloud.stride);
    stream_fs_samples(d, n, seed, [&](std::size_t begin, std::span<const cplx> pts) {
        std::copy(pts.begin(), pts.end(), cloud.points.begin() + static_cast<std::ptrdiff_t>(begin * cloud.stride));
    });
    return cloud;
}

std::vector<double> abs2_samples(const HomPoly& Q, std::size_t n, std::uint64_t seed) {
    std::vector<double> values(n);
    const std::size_t stride = static_cast<std::size_t>(Q.dim()) + 1;
    stream_sphere_samples(Q.dim(), n, seed, [&](std::size_t begin, std::span<const cplx> pts) {
        DenseEvaluator ev(Q);
        const std::size_t m = pts.size() / stride;
        for (std::size_t i = 0; i < m; ++i)
            values[begin + i] = std::norm(ev(pts.subspan(i * stride, stride)));
    });
    return values;
}

MeanStderr mc_mean(std::span<const double> values) {
    MeanStderr r;
    r.n = values.size();
    if (r.n == 0) return r;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(r.n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(r.n > 1 ? r.n - 1 : 1);
    r.mean = mean;
    r.stderr_ = std::sqrt(var / static_cast<double>(r.n));
    return r;
}

}  // namespace wehrl
