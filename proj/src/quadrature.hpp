#pragma once

#include <functional>
#include <span>
#include <vector>

#include "poly.hpp"
#include "rng.hpp"

namespace wehrl {

// One-dimensional Gauss-Jacobi rule on [0,1] for the weight rho^b, exact for
// polynomials of degree <= 2n-1. Nodes found by Newton iteration on the
// recurrence (residual < 1e-14); weights sum to 1/(b+1).
struct Axis1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Axis1D gauss_jacobi_01(int n, int b);

// Product rule for the probability measure sigma on the sphere in C^{d+1},
// using the (rho, theta) parametrization: uniform grids of M >= 2*N_max+1
// points per angle and Gauss-Jacobi rules with N_max+1 nodes per rho_j.
// Exact for all integrands zeta^a conj(zeta)^b with |a|, |b| <= N_max.
class SphereRule {
  public:
    SphereRule(int d, int max_degree);

    int dim() const { return d_; }
    int max_degree() const { return max_degree_; }
    std::size_t node_count() const;

    // Visit every node; fn(ambient point, weight). Single-threaded order.
    void for_each_node(const std::function<void(std::span<const cplx>, double)>& fn) const;

    const std::vector<Axis1D>& radial_axes() const { return radial_; }
    const std::vector<int>& angular_sizes() const { return angular_; }

  private:
    int d_;
    int max_degree_;
    std::vector<Axis1D> radial_;  // axis j has weight rho^{d-1-j}, j = 0..d-1
    std::vector<int> angular_;    // points per theta_k, k = 0..d
};

// Integral of f over the sphere against sigma. Throws std::runtime_error
// naming the node if f returns a non-finite value.
cplx integrate_sphere(const std::function<cplx(std::span<const cplx>)>& f, const SphereRule& rule);
double integrate_sphere_real(const std::function<double(std::span<const cplx>)>& f,
                             const SphereRule& rule);

// integral of P * conj(Q) d sigma on the same rule, evaluated through the
// product structure of the grid (per-axis partial sums) instead of a node
// loop. Identical to integrate_sphere up to floating-point reassociation;
// usable when the node count makes the generic loop impractical.
cplx integrate_sphere_product(const HomPoly& P, const HomPoly& Q, const SphereRule& rule);

// i.i.d. samples, uniform w.r.t. sigma on the sphere (points of C^{d+1}) or
// w.r.t. the Fubini-Study probability measure m on C^d. Deterministic under
// (seed, chunk) addressing regardless of thread count.
struct SampleCloud {
    int d = 0;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t stride = 0;    // complex entries per point
    std::vector<cplx> points;  // interleaved

    std::span<const cplx> point(std::size_t i) const {
        return {points.data() + i * stride, stride};
    }
};
SampleCloud sample_sphere(int d, std::size_t n, std::uint64_t seed);
SampleCloud sample_fubini_study(int d, std::size_t n, std::uint64_t seed);

// Streaming generation for sample counts too large to materialize. fn is
// called concurrently for distinct chunks: (global offset, points).
void stream_sphere_samples(int d, std::size_t n, std::uint64_t seed,
                           const std::function<void(std::size_t, std::span<const cplx>)>& fn);
void stream_fs_samples(int d, std::size_t n, std::uint64_t seed,
                       const std::function<void(std::size_t, std::span<const cplx>)>& fn);

// |Q(zeta_i)|^2 over a fresh sphere cloud, evaluated in parallel chunks.
std::vector<double> abs2_samples(const HomPoly& Q, std::size_t n, std::uint64_t seed);

// Parallel loop over [0, n) in fixed chunks; fn(chunk_index, begin, end).
// Chunk decomposition is independent of the worker count.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};
MeanStderr mc_mean(std::span<const double> values);

}  // namespace wehrl
