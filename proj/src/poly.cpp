#include "poly.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "rng.hpp"

namespace wehrl {

namespace {

// Power table pow[k][e] = zeta_k^e for e = 0..N.
std::vector<std::vector<cplx>> power_table(std::span<const cplx> zeta, int N) {
    std::vector<std::vector<cplx>> pw(zeta.size());
    for (std::size_t k = 0; k < zeta.size(); ++k) {
        pw[k].resize(static_cast<std::size_t>(N) + 1);
        pw[k][0] = 1.0;
        for (int e = 1; e <= N; ++e) pw[k][static_cast<std::size_t>(e)] = pw[k][static_cast<std::size_t>(e - 1)] * zeta[k];
    }
    return pw;
}

cplx eval_dense(int d, int N, std::span<const cplx> coeffs, std::span<const cplx> zeta) {
    const auto& idx = enumerate_multiindices(d, N);
    auto pw = power_table(zeta, N);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == cplx{0.0, 0.0}) continue;
        cplx term = coeffs[i];
        const auto& a = idx[i].entries;
        for (std::size_t k = 0; k < a.size(); ++k) term *= pw[k][static_cast<std::size_t>(a[k])];
        acc += term;
    }
    return acc;
}

// (c . zeta)^m expanded over multi-indices of degree m in d+1 variables.
std::vector<cplx> linear_form_power(int d, std::span<const cplx> c, int m) {
    const auto& idx = enumerate_multiindices(d, m);
    auto pw = power_table(c, m);
    std::vector<cplx> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& a = idx[i].entries;
        cplx term = multinomial(m, a);
        for (std::size_t k = 0; k < a.size(); ++k) term *= pw[k][static_cast<std::size_t>(a[k])];
        out[i] = term;
    }
    return out;
}

// Dense graded convolution: (degA) * (degB) -> degA+degB.
std::vector<cplx> convolve(int d, int degA, std::span<const cplx> A, int degB,
                           std::span<const cplx> B) {
    const auto& ia = enumerate_multiindices(d, degA);
    const auto& ib = enumerate_multiindices(d, degB);
    std::vector<cplx> out(multiindex_count(d, degA + degB), cplx{0.0, 0.0});
    std::vector<int> sum(static_cast<std::size_t>(d) + 1);
    for (std::size_t i = 0; i < ia.size(); ++i) {
        if (A[i] == cplx{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < ib.size(); ++j) {
            if (B[j] == cplx{0.0, 0.0}) continue;
            for (int k = 0; k <= d; ++k)
                sum[static_cast<std::size_t>(k)] = ia[i][k] + ib[j][k];
            out[multiindex_rank(d, degA + degB, sum)] += A[i] * B[j];
        }
    }
    return out;
}

}  // namespace

HomPoly::HomPoly(int d, int N) : d_(d), N_(N), coeffs_(multiindex_count(d, N), cplx{0.0, 0.0}) {
    if (d < 1 || N < 0) throw std::invalid_argument("HomPoly: need d >= 1, N >= 0");
}

HomPoly::HomPoly(int d, int N, std::vector<cplx> coeffs) : d_(d), N_(N), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != multiindex_count(d, N))
        throw std::invalid_argument("HomPoly: coefficient vector has wrong length");
}

HomPoly HomPoly::from_terms(int d, int N,
                            const std::vector<std::pair<std::vector<int>, cplx>>& terms) {
    HomPoly Q(d, N);
    for (const auto& [alpha, value] : terms) {
        if (static_cast<int>(alpha.size()) != d + 1)
            throw std::invalid_argument("HomPoly term: alpha must have d+1 entries");
        int deg = 0;
        for (int a : alpha) {
            if (a < 0) throw std::invalid_argument("HomPoly term: negative exponent");
            deg += a;
        }
        if (deg != N) throw std::invalid_argument("HomPoly term: |alpha| != N");
        std::size_t r = multiindex_rank(d, N, alpha);
        if (Q.coeffs_[r] != cplx{0.0, 0.0})
            throw std::invalid_argument("HomPoly term: duplicate multi-index");
        Q.coeffs_[r] = value;
    }
    return Q;
}

HomPoly HomPoly::reproducing_kernel(int N, std::span<const cplx> eta) {
    const int d = static_cast<int>(eta.size()) - 1;
    double n2 = 0.0;
    for (const cplx& e : eta) n2 += std::norm(e);
    if (std::abs(n2 - 1.0) > 1e-10)
        throw std::domain_error("reproducing_kernel: eta must lie on the unit sphere");
    const auto& idx = enumerate_multiindices(d, N);
    std::vector<cplx> etabar(eta.size());
    for (std::size_t k = 0; k < eta.size(); ++k) etabar[k] = std::conj(eta[k]);
    auto pw = power_table(etabar, N);
    std::vector<cplx> coeffs(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& a = idx[i].entries;
        cplx c = multinomial(N, a);
        for (std::size_t k = 0; k < a.size(); ++k) c *= pw[k][static_cast<std::size_t>(a[k])];
        coeffs[i] = c;
    }
    return HomPoly(d, N, std::move(coeffs));
}

HomPoly HomPoly::random_unit(int d, int N, CounterRng& rng) {
    const auto& w = bombieri_weights(d, N);
    std::vector<cplx> coeffs(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        // unit-variance Gaussian coordinate in the ONB; monomial coefficient
        // a_alpha = g / sqrt(alpha!/N!)
        cplx g{rng.next_normal(), rng.next_normal()};
        coeffs[i] = g / std::sqrt(2.0 * w[i]);
    }
    return HomPoly(d, N, std::move(coeffs)).normalized();
}

cplx HomPoly::eval(std::span<const cplx> zeta) const {
    if (static_cast<int>(zeta.size()) != d_ + 1)
        throw std::invalid_argument("HomPoly::eval: point has wrong dimension");
    return eval_dense(d_, N_, coeffs_, zeta);
}

cplx HomPoly::bombieri_inner(const HomPoly& other) const {
    if (other.d_ != d_ || other.N_ != N_)
        throw std::invalid_argument("bombieri_inner: mismatched (d, N)");
    const auto& w = bombieri_weights(d_, N_);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        acc += w[i] * coeffs_[i] * std::conj(other.coeffs_[i]);
    return acc;
}

double HomPoly::norm_sq() const {
    const auto& w = bombieri_weights(d_, N_);
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += w[i] * std::norm(coeffs_[i]);
    return acc;
}

double HomPoly::norm() const { return std::sqrt(norm_sq()); }

HomPoly HomPoly::normalized() const {
    double n = norm();
    if (n == 0.0) throw std::domain_error("normalized: zero polynomial");
    return *this * cplx{1.0 / n, 0.0};
}

HomPoly HomPoly::operator+(const HomPoly& o) const {
    if (o.d_ != d_ || o.N_ != N_) throw std::invalid_argument("HomPoly+: mismatched (d, N)");
    std::vector<cplx> c(coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
    return HomPoly(d_, N_, std::move(c));
}

HomPoly HomPoly::operator-(const HomPoly& o) const {
    if (o.d_ != d_ || o.N_ != N_) throw std::invalid_argument("HomPoly-: mismatched (d, N)");
    std::vector<cplx> c(coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
    return HomPoly(d_, N_, std::move(c));
}

HomPoly HomPoly::operator*(cplx s) const {
    std::vector<cplx> c(coeffs_);
    for (auto& x : c) x *= s;
    return HomPoly(d_, N_, std::move(c));
}

HomPoly HomPoly::multiply(const HomPoly& o) const {
    if (o.d_ != d_) throw std::invalid_argument("multiply: mismatched dimension");
    return HomPoly(d_, N_ + o.N_, convolve(d_, N_, coeffs_, o.N_, o.coeffs_));
}

HomPoly HomPoly::rotate(std::span<const cplx> R) const {
    const int n = d_ + 1;
    if (static_cast<int>(R.size()) != n * n)
        throw std::invalid_argument("rotate: matrix has wrong size");
    if (unitarity_defect(R, n) > 1e-12)
        throw std::domain_error("rotate: matrix is not unitary within 1e-12");

    // (R^{-1} zeta)_k = sum_j conj(R_{jk}) zeta_j; precompute powers of each
    // substituted linear form up to degree N.
    const auto& idx = enumerate_multiindices(d_, N_);
    std::vector<std::vector<std::vector<cplx>>> form_pow(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> c(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = std::conj(R[static_cast<std::size_t>(j * n + k)]);
        auto& pows = form_pow[static_cast<std::size_t>(k)];
        pows.resize(static_cast<std::size_t>(N_) + 1);
        pows[0] = {cplx{1.0, 0.0}};
        for (int m = 1; m <= N_; ++m) pows[static_cast<std::size_t>(m)] = linear_form_power(d_, c, m);
    }

    std::vector<cplx> out(coeffs_.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == cplx{0.0, 0.0}) continue;
        const auto& a = idx[i].entries;
        // product over k of L_k^{a_k}
        int deg = 0;
        std::vector<cplx> acc = {coeffs_[i]};
        for (int k = 0; k < n; ++k) {
            int e = a[static_cast<std::size_t>(k)];
            if (e == 0) continue;
            acc = convolve(d_, deg, acc, e, form_pow[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)]);
            deg += e;
        }
        for (std::size_t r = 0; r < out.size(); ++r) out[r] += acc[r];
    }
    return HomPoly(d_, N_, std::move(out));
}

HomPoly HomPoly::partial(int k) const {
    if (k < 0 || k > d_) throw std::invalid_argument("partial: variable out of range");
    if (N_ == 0) return HomPoly(d_, 0);
    const auto& idx = enumerate_multiindices(d_, N_);
    HomPoly out(d_, N_ - 1);
    std::vector<int> b(static_cast<std::size_t>(d_) + 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const auto& a = idx[i].entries;
        int e = a[static_cast<std::size_t>(k)];
        if (e == 0 || coeffs_[i] == cplx{0.0, 0.0}) continue;
        b = a;
        b[static_cast<std::size_t>(k)] = e - 1;
        out.coeff(multiindex_rank(d_, N_ - 1, b)) += static_cast<double>(e) * coeffs_[i];
    }
    return out;
}

std::vector<cplx> HomPoly::onb_coords() const {
    const auto& w = bombieri_weights(d_, N_);
    std::vector<cplx> c(coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeffs_[i] * std::sqrt(w[i]);
    return c;
}

HomPoly HomPoly::from_onb_coords(int d, int N, std::span<const cplx> coords) {
    const auto& w = bombieri_weights(d, N);
    if (coords.size() != w.size())
        throw std::invalid_argument("from_onb_coords: wrong length");
    std::vector<cplx> c(coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords[i] / std::sqrt(w[i]);
    return HomPoly(d, N, std::move(c));
}

AffinePoly HomPoly::to_affine() const { return AffinePoly(d_, N_, coeffs_); }

AffinePoly::AffinePoly(int d, int N)
    : d_(d), N_(N), coeffs_(multiindex_count(d, N), cplx{0.0, 0.0}) {}

AffinePoly::AffinePoly(int d, int N, std::vector<cplx> coeffs)
    : d_(d), N_(N), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != multiindex_count(d, N))
        throw std::invalid_argument("AffinePoly: coefficient vector has wrong length");
}

AffinePoly AffinePoly::normalized_kernel(int d, int N, std::span<const cplx> w) {
    if (static_cast<int>(w.size()) != d) throw std::invalid_argument("normalized_kernel: w in C^d");
    double w2 = 0.0;
    for (const cplx& x : w) w2 += std::norm(x);
    // homogenization of (1+z.conj(w))^N is (zeta_1 + zeta'.conj(w))^N, a
    // scaled kernel; dividing by (1+|w|^2)^{N/2} makes the norm 1.
    std::vector<cplx> eta(static_cast<std::size_t>(d) + 1);
    const double s = std::sqrt(1.0 + w2);
    eta[0] = 1.0 / s;
    for (int j = 0; j < d; ++j) eta[static_cast<std::size_t>(j + 1)] = w[static_cast<std::size_t>(j)] / s;
    return HomPoly::reproducing_kernel(N, eta).to_affine();
}

cplx AffinePoly::eval(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != d_)
        throw std::invalid_argument("AffinePoly::eval: point has wrong dimension");
    std::vector<cplx> zeta(static_cast<std::size_t>(d_) + 1);
    zeta[0] = 1.0;
    for (int j = 0; j < d_; ++j) zeta[static_cast<std::size_t>(j + 1)] = z[static_cast<std::size_t>(j)];
    return eval_dense(d_, N_, coeffs_, zeta);
}

double AffinePoly::weighted_abs2(std::span<const cplx> z) const {
    double z2 = 0.0;
    for (const cplx& x : z) z2 += std::norm(x);
    return std::norm(eval(z)) / std::pow(1.0 + z2, N_);
}

double AffinePoly::norm() const { return homogenize().norm(); }

HomPoly AffinePoly::homogenize() const { return HomPoly(d_, N_, coeffs_); }

AffinePoly AffinePoly::rescale_argument(double c, int new_degree_bound) const {
    if (new_degree_bound < N_)
        throw std::invalid_argument("rescale_argument: degree bound cannot shrink");
    const auto& idx = enumerate_multiindices(d_, N_);
    AffinePoly out(d_, new_degree_bound);
    std::vector<int> b(static_cast<std::size_t>(d_) + 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == cplx{0.0, 0.0}) continue;
        const auto& a = idx[i].entries;
        int beta_deg = N_ - a[0];  // |beta| of the affine monomial
        b[0] = new_degree_bound - beta_deg;
        for (int j = 1; j <= d_; ++j) b[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)];
        out.coeffs_[multiindex_rank(d_, new_degree_bound, b)] =
            coeffs_[i] * std::pow(c, beta_deg);
    }
    return out;
}

SpherePoint SpherePoint::from_ambient(std::vector<cplx> zeta) {
    const int d = static_cast<int>(zeta.size()) - 1;
    double n2 = 0.0;
    for (const cplx& z : zeta) n2 += std::norm(z);
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::domain_error("SpherePoint: ambient vector is not unit within 1e-12");
    SpherePoint p;
    p.ambient = std::move(zeta);
    p.rho.resize(static_cast<std::size_t>(d));
    p.theta.resize(static_cast<std::size_t>(d) + 1);
    double prefix = 1.0;  // rho_1 ... rho_{j-1}
    for (int j = 0; j < d; ++j) {
        double m2 = std::norm(p.ambient[static_cast<std::size_t>(j)]);
        double r = (prefix > 0.0) ? 1.0 - m2 / prefix : 0.0;
        p.rho[static_cast<std::size_t>(j)] = std::min(1.0, std::max(0.0, r));
        prefix *= p.rho[static_cast<std::size_t>(j)];
    }
    for (int k = 0; k <= d; ++k) {
        double a = std::arg(p.ambient[static_cast<std::size_t>(k)]);
        p.theta[static_cast<std::size_t>(k)] = a < 0 ? a + 2.0 * M_PI : a;
    }
    return p;
}

SpherePoint SpherePoint::from_coords(std::vector<double> rho, std::vector<double> theta) {
    if (theta.size() != rho.size() + 1)
        throw std::invalid_argument("SpherePoint: need d rho and d+1 theta values");
    SpherePoint p;
    p.ambient.resize(theta.size());
    sphere_coords_to_ambient(rho, theta, p.ambient);
    p.rho = std::move(rho);
    p.theta = std::move(theta);
    return p;
}

void sphere_coords_to_ambient(std::span<const double> rho, std::span<const double> theta,
                              std::span<cplx> out) {
    const std::size_t d = rho.size();
    double prefix = 1.0;
    for (std::size_t k = 0; k <= d; ++k) {
        double m2 = (k < d) ? prefix * (1.0 - rho[k]) : prefix;
        out[k] = std::polar(std::sqrt(std::max(0.0, m2)), theta[k]);
        if (k < d) prefix *= rho[k];
    }
}

std::vector<cplx> unitary_from_first_column(std::span<const cplx> eta) {
    const int n = static_cast<int>(eta.size());
    // Gram-Schmidt starting from eta, completing with the standard basis.
    std::vector<std::vector<cplx>> cols;
    std::vector<cplx> first(eta.begin(), eta.end());
    double nrm = 0.0;
    for (const cplx& x : first) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (cplx& x : first) x /= nrm;
    cols.push_back(first);
    for (int j = 0; j < n && static_cast<int>(cols.size()) < n; ++j) {
        std::vector<cplx> v(static_cast<std::size_t>(n), cplx{0.0, 0.0});
        v[static_cast<std::size_t>(j)] = 1.0;
        for (const auto& c : cols) {
            cplx proj = 0.0;
            for (int i = 0; i < n; ++i) proj += std::conj(c[static_cast<std::size_t>(i)]) * v[static_cast<std::size_t>(i)];
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= proj * c[static_cast<std::size_t>(i)];
        }
        double vn = 0.0;
        for (const cplx& x : v) vn += std::norm(x);
        if (vn < 1e-12) continue;  // basis vector nearly parallel; skip
        vn = std::sqrt(vn);
        for (cplx& x : v) x /= vn;
        cols.push_back(std::move(v));
    }
    if (static_cast<int>(cols.size()) != n)
        throw std::runtime_error("unitary_from_first_column: completion failed");
    std::vector<cplx> R(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R[static_cast<std::size_t>(i * n + j)] = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return R;
}

std::vector<cplx> random_unitary(int n, CounterRng& rng) {
    std::vector<std::vector<cplx>> cols;
    for (int c = 0; c < n; ++c) {
        std::vector<cplx> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = cplx{rng.next_normal(), rng.next_normal()};
        for (const auto& u : cols) {
            cplx proj = 0.0;
            for (int i = 0; i < n; ++i) proj += std::conj(u[static_cast<std::size_t>(i)]) * v[static_cast<std::size_t>(i)];
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= proj * u[static_cast<std::size_t>(i)];
        }
        double vn = 0.0;
        for (const cplx& x : v) vn += std::norm(x);
        vn = std::sqrt(vn);
        for (cplx& x : v) x /= vn;
        cols.push_back(std::move(v));
    }
    std::vector<cplx> R(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R[static_cast<std::size_t>(i * n + j)] = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return R;
}

DenseEvaluator::DenseEvaluator(const HomPoly& Q) : d_(Q.dim()), N_(Q.degree()) {
    const auto& idx = enumerate_multiindices(d_, N_);
    auto c = Q.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == cplx{0.0, 0.0}) continue;
        coeffs_.push_back(c[i]);
        for (int k = 0; k <= d_; ++k) exps_.push_back(idx[i][k]);
    }
    pow_.resize(static_cast<std::size_t>(d_ + 1) * static_cast<std::size_t>(N_ + 1));
}

cplx DenseEvaluator::operator()(std::span<const cplx> zeta) {
    const std::size_t np = static_cast<std::size_t>(N_ + 1);
    for (int k = 0; k <= d_; ++k) {
        cplx* row = pow_.data() + static_cast<std::size_t>(k) * np;
        row[0] = 1.0;
        for (int e = 1; e <= N_; ++e) row[e] = row[e - 1] * zeta[static_cast<std::size_t>(k)];
    }
    cplx acc = 0.0;
    const int* e = exps_.data();
    for (const cplx& c : coeffs_) {
        cplx term = c;
        for (int k = 0; k <= d_; ++k) term *= pow_[static_cast<std::size_t>(k) * np + static_cast<std::size_t>(*e++)];
        acc += term;
    }
    return acc;
}

double unitarity_defect(std::span<const cplx> R, int n) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += std::conj(R[static_cast<std::size_t>(k * n + i)]) * R[static_cast<std::size_t>(k * n + j)];
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

}  // namespace wehrl
