#include "states.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace wehrl {

namespace {

// Coordinates of K_N(., zeta) in the orthonormal basis: conj(e_alpha(zeta)).
void coherent_vector(int d, int N, std::span<const cplx> zeta, Eigen::VectorXcd& out) {
    const auto& idx = enumerate_multiindices(d, N);
    const auto& w = bombieri_weights(d, N);
    out.resize(static_cast<Eigen::Index>(idx.size()));
    std::vector<std::vector<cplx>> pw(zeta.size());
    for (std::size_t k = 0; k < zeta.size(); ++k) {
        pw[k].resize(static_cast<std::size_t>(N) + 1);
        pw[k][0] = 1.0;
        for (int e = 1; e <= N; ++e) pw[k][static_cast<std::size_t>(e)] = pw[k][static_cast<std::size_t>(e - 1)] * zeta[k];
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
        cplx m = 1.0;
        for (std::size_t k = 0; k < zeta.size(); ++k)
            m *= pw[k][static_cast<std::size_t>(idx[i][static_cast<int>(k)])];
        // e_alpha(zeta) = sqrt(N!/alpha!) zeta^alpha = m / sqrt(w_alpha)
        out[static_cast<Eigen::Index>(i)] = std::conj(m) / std::sqrt(w[i]);
    }
}

}  // namespace

DensityState::DensityState(int d, int N, Eigen::MatrixXcd m)
    : d_(d), N_(N), mat_(std::move(m)) {}

DensityState DensityState::from_matrix(int d, int N, Eigen::MatrixXcd m, Diagnostics* diag) {
    const std::size_t dim = multiindex_count(d, N);
    if (m.rows() != static_cast<Eigen::Index>(dim) || m.cols() != static_cast<Eigen::Index>(dim))
        throw std::invalid_argument("DensityState: matrix size does not match binom(N+d,d)");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DensityState: matrix is not Hermitian within 1e-12");
    if (std::abs(m.trace().real() - 1.0) > 1e-12 || std::abs(m.trace().imag()) > 1e-12)
        throw std::invalid_argument("DensityState: trace must equal 1 within 1e-12");

    m = 0.5 * (m + m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("DensityState: eigendecomposition failed");

    DensityState st(d, N, std::move(m));
    st.evals_ = es.eigenvalues();
    Diagnostics local{};
    for (Eigen::Index j = 0; j < st.evals_.size(); ++j) {
        double& l = st.evals_[j];
        if (l < 0.0) {
            if (l < -1e-12)
                throw std::invalid_argument("DensityState: eigenvalue below -1e-12, not PSD");
            local.most_negative = std::min(local.most_negative, l);
            ++local.clipped_eigenvalues;
            l = 0.0;
        }
    }
    if (diag) *diag = local;
    for (Eigen::Index j = 0; j < st.evals_.size(); ++j) {
        if (st.evals_[j] <= 0.0) continue;
        Eigen::VectorXcd v = es.eigenvectors().col(j);
        std::vector<cplx> coords(v.data(), v.data() + v.size());
        st.eigpolys_.push_back(HomPoly::from_onb_coords(d, N, coords));
        st.eigweights_.push_back(st.evals_[j]);
    }
    return st;
}

DensityState DensityState::pure(const HomPoly& Q) {
    const HomPoly Qn = Q.normalized();
    auto coords = Qn.onb_coords();
    Eigen::VectorXcd v(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<Eigen::Index>(i)] = coords[i];
    Eigen::MatrixXcd m = v * v.adjoint();
    return from_matrix(Q.dim(), Q.degree(), std::move(m));
}

DensityState DensityState::coherent(int d, int N, std::span<const cplx> eta) {
    return pure(HomPoly::reproducing_kernel(N, eta));
}

DensityState DensityState::maximally_mixed(int d, int N) {
    const std::size_t dim = multiindex_count(d, N);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) /
                         static_cast<double>(dim);
    return from_matrix(d, N, std::move(m));
}

double DensityState::husimi(std::span<const cplx> zeta) const {
    Eigen::VectorXcd c;
    coherent_vector(d_, N_, zeta, c);
    const double v = (c.adjoint() * mat_ * c).value().real();
    return std::max(0.0, v);
}

std::vector<double> DensityState::husimi_samples(std::size_t n, std::uint64_t seed) const {
    std::vector<double> values(n);
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    // u_rho = sum_j lambda_j |Q_j|^2 over the spectral components
    stream_sphere_samples(d_, n, seed, [&](std::size_t begin, std::span<const cplx> pts) {
        std::vector<DenseEvaluator> evs;
        evs.reserve(eigpolys_.size());
        for (const auto& Qj : eigpolys_) evs.emplace_back(Qj);
        const std::size_t m = pts.size() / stride;
        for (std::size_t i = 0; i < m; ++i) {
            auto z = pts.subspan(i * stride, stride);
            double acc = 0.0;
            for (std::size_t j = 0; j < evs.size(); ++j)
                acc += eigweights_[j] * std::norm(evs[j](z));
            values[begin + i] = acc;
        }
    });
    return values;
}

McValue DensityState::entropy(const ConvexFn& phi, const EntropyOptions& opts) const {
    if (phi.is_linear()) {
        // -binom int u dsigma = -trace = -1
        return {-1.0, 0.0, true};
    }
    std::vector<double> u = husimi_samples(opts.samples, opts.seed);
    return entropy_from_values(u, N_, d_, phi, opts.strict);
}

McValue DensityState::concentration(const Region& region, const ConcOptions& opts) const {
    const double binom = binomial(N_ + d_, d_);
    const double meas = region.measure(N_, d_);
    if (!(meas > 0.0 && meas < 1.0))
        throw std::domain_error("DensityState::concentration: region measure must lie in (0,1)");
    switch (region.kind()) {
        case Region::Kind::Cap:
        case Region::Kind::CapComplement: {
            // int_Omega u = sum_j lambda_j ||Q_j||^2 C_cap(Q_j) / binom
            double acc = 0.0;
            for (std::size_t j = 0; j < eigpolys_.size(); ++j)
                acc += eigweights_[j] *
                       cap_concentration_exact(eigpolys_[j], region.center(), region.level());
            if (region.kind() == Region::Kind::CapComplement) acc = 1.0 - acc;
            return {acc, 0.0, true};
        }
        case Region::Kind::Superlevel: {
            // superlevel set of the Husimi function itself
            std::vector<double> u = husimi_samples(opts.samples, opts.seed);
            std::vector<double> sorted(u);
            const double omega = region.omega();
            std::size_t keep = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(omega * static_cast<double>(u.size()))));
            std::nth_element(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(keep),
                             sorted.end());
            const double thr = sorted[sorted.size() - keep];
            double total = 0.0;
            for (double v : u)
                if (v > thr) total += v;
            std::vector<double> vals(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) vals[i] = u[i] > thr ? binom * u[i] : 0.0;
            MeanStderr ms = mc_mean(vals);
            return {binom * total / static_cast<double>(u.size()), ms.stderr_, false};
        }
        case Region::Kind::Indicator: {
            std::vector<double> vals(opts.samples);
            const std::size_t stride = static_cast<std::size_t>(d_) + 1;
            stream_sphere_samples(d_, opts.samples, opts.seed,
                                  [&](std::size_t begin, std::span<const cplx> pts) {
                                      std::vector<DenseEvaluator> evs;
                                      for (const auto& Qj : eigpolys_) evs.emplace_back(Qj);
                                      const std::size_t m = pts.size() / stride;
                                      for (std::size_t i = 0; i < m; ++i) {
                                          auto z = pts.subspan(i * stride, stride);
                                          double v = 0.0;
                                          if (region.contains(N_, z)) {
                                              for (std::size_t j = 0; j < evs.size(); ++j)
                                                  v += eigweights_[j] * std::norm(evs[j](z));
                                              v *= binom;
                                          }
                                          vals[begin + i] = v;
                                      }
                                  });
            MeanStderr ms = mc_mean(vals);
            return {ms.mean, ms.stderr_, false};
        }
    }
    throw std::logic_error("DensityState::concentration: unreachable");
}

double DensityState::trace_distance_to(std::span<const cplx> eta) const {
    Eigen::VectorXcd c;
    coherent_vector(d_, N_, eta, c);
    Eigen::MatrixXcd diff = mat_ - c * c.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

DensityState::TraceDistance DensityState::trace_distance_to_coherent(std::size_t screen_samples,
                                                                     std::uint64_t seed,
                                                                     int starts,
                                                                     int nm_max_iter) const {
    // seed the local searches at the top Husimi values of a screening cloud
    SampleCloud cloud = sample_sphere(d_, screen_samples, seed);
    std::vector<std::pair<double, std::size_t>> scored(cloud.count);
    {
        std::vector<DenseEvaluator> evs;
        for (const auto& Qj : eigpolys_) evs.emplace_back(Qj);
        for (std::size_t i = 0; i < cloud.count; ++i) {
            auto z = cloud.point(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < evs.size(); ++j)
                acc += eigweights_[j] * std::norm(evs[j](z));
            scored[i] = {acc, i};
        }
    }
    std::partial_sort(scored.begin(),
                      scored.begin() + std::min<std::size_t>(static_cast<std::size_t>(starts), scored.size()),
                      scored.end(), std::greater<>());

    auto objective = [&](std::span<const double> x) {
        std::vector<cplx> eta(static_cast<std::size_t>(d_) + 1);
        double n2 = 0.0;
        for (int k = 0; k <= d_; ++k) {
            eta[static_cast<std::size_t>(k)] = cplx{x[static_cast<std::size_t>(2 * k)], x[static_cast<std::size_t>(2 * k + 1)]};
            n2 += std::norm(eta[static_cast<std::size_t>(k)]);
        }
        if (n2 < 1e-14) return 2.0;
        const double inv = 1.0 / std::sqrt(n2);
        for (cplx& e : eta) e *= inv;
        return trace_distance_to(eta);
    };

    TraceDistance out;
    out.value = 2.0;
    for (int s = 0; s < starts && static_cast<std::size_t>(s) < scored.size(); ++s) {
        auto z = cloud.point(scored[static_cast<std::size_t>(s)].second);
        std::vector<double> x0(2 * static_cast<std::size_t>(d_ + 1));
        for (int k = 0; k <= d_; ++k) {
            x0[static_cast<std::size_t>(2 * k)] = z[static_cast<std::size_t>(k)].real();
            x0[static_cast<std::size_t>(2 * k + 1)] = z[static_cast<std::size_t>(k)].imag();
        }
        auto [x, fx] = nelder_mead_min(objective, std::move(x0), 0.2, nm_max_iter);
        if (fx < out.value) {
            out.value = fx;
            out.argmin.assign(static_cast<std::size_t>(d_) + 1, cplx{});
            double n2 = 0.0;
            for (int k = 0; k <= d_; ++k) {
                out.argmin[static_cast<std::size_t>(k)] = cplx{x[static_cast<std::size_t>(2 * k)], x[static_cast<std::size_t>(2 * k + 1)]};
                n2 += std::norm(out.argmin[static_cast<std::size_t>(k)]);
            }
            for (cplx& e : out.argmin) e /= std::sqrt(n2);
        }
    }
    out.converged = !out.argmin.empty();
    return out;
}

Eigen::MatrixXcd coherent_projector(int d, int N, std::span<const cplx> eta) {
    double n2 = 0.0;
    for (const cplx& e : eta) n2 += std::norm(e);
    if (std::abs(n2 - 1.0) > 1e-10)
        throw std::domain_error("coherent_projector: eta must lie on the unit sphere");
    Eigen::VectorXcd c;
    coherent_vector(d, N, eta, c);
    return c * c.adjoint();
}

Eigen::MatrixXcd rotation_matrix_onb(int d, int N, std::span<const cplx> R) {
    const auto& idx = enumerate_multiindices(d, N);
    const std::size_t dim = idx.size();
    Eigen::MatrixXcd U(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        // rotate the j-th orthonormal basis polynomial and read coordinates
        HomPoly ej(d, N);
        const auto& w = bombieri_weights(d, N);
        ej.coeff(j) = 1.0 / std::sqrt(w[j]);
        HomPoly rotated = ej.rotate(R);
        auto coords = rotated.onb_coords();
        for (std::size_t i = 0; i < dim; ++i) U(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = coords[i];
    }
    return U;
}

}  // namespace wehrl
