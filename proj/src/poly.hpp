#pragma once

#include <complex>
#include <span>
#include <vector>

#include "multiindex.hpp"

namespace wehrl {

class AffinePoly;

// Homogeneous polynomial of degree N in d+1 complex variables, stored as a
// dense coefficient vector in the descending-lex multi-index order. The
// inner product is the Bombieri one, <zeta^a, zeta^a> = a!/N!.
class HomPoly {
  public:
    HomPoly(int d, int N);  // zero polynomial
    HomPoly(int d, int N, std::vector<cplx> coeffs);

    // Sparse constructor for I/O: terms (alpha, value). Duplicate indices
    // and |alpha| != N are rejected.
    static HomPoly from_terms(int d, int N,
                              const std::vector<std::pair<std::vector<int>, cplx>>& terms);

    // K_N(., eta) = (zeta . conj(eta))^N; requires |eta| = 1.
    static HomPoly reproducing_kernel(int N, std::span<const cplx> eta);

    // Coefficients i.i.d. complex Gaussian in the orthonormal monomial
    // basis, then normalized. Invariant in law under the unitary action.
    static HomPoly random_unit(int d, int N, class CounterRng& rng);

    int dim() const { return d_; }
    int degree() const { return N_; }
    std::size_t basis_size() const { return coeffs_.size(); }
    std::span<const cplx> coeffs() const { return coeffs_; }
    cplx& coeff(std::size_t i) { return coeffs_[i]; }
    const cplx& coeff(std::size_t i) const { return coeffs_[i]; }

    cplx eval(std::span<const cplx> zeta) const;

    cplx bombieri_inner(const HomPoly& other) const;
    double norm_sq() const;
    double norm() const;
    HomPoly normalized() const;

    HomPoly operator+(const HomPoly&) const;
    HomPoly operator-(const HomPoly&) const;
    HomPoly operator*(cplx s) const;

    // Product as a polynomial of degree N1 + N2 (multi-index convolution).
    HomPoly multiply(const HomPoly& other) const;

    // pi(R) Q (zeta) = Q(R^{-1} zeta) for unitary R ((d+1)x(d+1), row-major).
    // Exact re-expansion through multinomial convolution.
    HomPoly rotate(std::span<const cplx> R) const;

    // Partial derivative d/d zeta_k, a polynomial of degree N-1.
    HomPoly partial(int k) const;

    // Coordinates in the orthonormal basis {sqrt(N!/alpha!) zeta^alpha}.
    std::vector<cplx> onb_coords() const;
    static HomPoly from_onb_coords(int d, int N, std::span<const cplx> coords);

    AffinePoly to_affine() const;

  private:
    int d_;
    int N_;
    std::vector<cplx> coeffs_;
};

// Polynomial of degree <= N in d complex variables, identified with its
// homogenization in P^d_N; shares the dense homogeneous layout, so the
// coefficient of z^beta sits at the rank of (N-|beta|, beta).
class AffinePoly {
  public:
    AffinePoly(int d, int N);
    AffinePoly(int d, int N, std::vector<cplx> coeffs);

    // Normalized kernel kappa_N(., w) = (1+z.conj(w))^N / (1+|w|^2)^{N/2},
    // unit norm in P^d_N (the weighted evaluation at w then equals 1).
    static AffinePoly normalized_kernel(int d, int N, std::span<const cplx> w);

    int dim() const { return d_; }
    int degree_bound() const { return N_; }
    std::span<const cplx> coeffs() const { return coeffs_; }

    cplx eval(std::span<const cplx> z) const;

    // Weighted modulus |q(z)|^2 / (1+|z|^2)^N; the Husimi density of the
    // section when the polynomial has unit norm.
    double weighted_abs2(std::span<const cplx> z) const;

    double norm() const;  // equals the norm of the homogenization

    HomPoly homogenize() const;

    // Rescaled embedding q(z) -> q(c z), used for the Bargmann-Fock limit.
    AffinePoly rescale_argument(double c, int new_degree_bound) const;

  private:
    int d_;
    int N_;
    std::vector<cplx> coeffs_;  // homogeneous layout of P^{d}_N
};

// Point of the unit sphere in C^{d+1} carrying both the ambient vector and
// the (rho, theta) coordinates.
struct SpherePoint {
    std::vector<cplx> ambient;  // d+1 entries, |.| = 1
    std::vector<double> rho;    // d entries in [0,1]
    std::vector<double> theta;  // d+1 entries in [0,2pi)

    static SpherePoint from_ambient(std::vector<cplx> zeta);
    static SpherePoint from_coords(std::vector<double> rho, std::vector<double> theta);

    int dim() const { return static_cast<int>(ambient.size()) - 1; }
};

// Ambient coordinates for given (rho, theta) without building a SpherePoint.
void sphere_coords_to_ambient(std::span<const double> rho, std::span<const double> theta,
                              std::span<cplx> out);

// Unitary (d+1)x(d+1) matrix (row-major) whose first column is eta.
std::vector<cplx> unitary_from_first_column(std::span<const cplx> eta);

// Haar-ish random unitary via Gram-Schmidt on Gaussian columns.
std::vector<cplx> random_unitary(int n, class CounterRng& rng);

// Max-norm deviation of R*R from the identity.
double unitarity_defect(std::span<const cplx> R, int n);

// Repeated-evaluation helper with preallocated power tables; copy one per
// thread (operator() reuses internal scratch).
class DenseEvaluator {
  public:
    explicit DenseEvaluator(const HomPoly& Q);
    cplx operator()(std::span<const cplx> zeta);

  private:
    int d_;
    int N_;
    std::vector<int> exps_;     // flattened, (d+1) per term
    std::vector<cplx> coeffs_;  // nonzero terms only
    std::vector<cplx> pow_;     // scratch, (d+1) x (N+1)
};

}  // namespace wehrl
