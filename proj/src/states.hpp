#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "convexfn.hpp"
#include "functionals.hpp"
#include "poly.hpp"

namespace wehrl {

// Positive-semidefinite, unit-trace operator on P^d_N in the orthonormal
// monomial basis {sqrt(N!/alpha!) zeta^alpha} with the descending-lex
// ordering. The eigendecomposition is computed once and cached.
class DensityState {
  public:
    struct Diagnostics {
        int clipped_eigenvalues = 0;
        double most_negative = 0.0;
    };

    static DensityState from_matrix(int d, int N, Eigen::MatrixXcd m,
                                    Diagnostics* diag = nullptr);
    static DensityState pure(const HomPoly& Q);                     // rank one
    static DensityState coherent(int d, int N, std::span<const cplx> eta);
    static DensityState maximally_mixed(int d, int N);

    int dim() const { return d_; }
    int degree() const { return N_; }
    std::size_t basis_size() const { return static_cast<std::size_t>(mat_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const Eigen::VectorXd& eigenvalues() const { return evals_; }

    // u_rho(zeta) = sum_j lambda_j |Q_j(zeta)|^2 = <K(.,zeta), rho K(.,zeta)>.
    double husimi(std::span<const cplx> zeta) const;

    // Husimi values over a sphere sample cloud (chunked, deterministic).
    std::vector<double> husimi_samples(std::size_t n, std::uint64_t seed) const;

    // S_{N,Phi}(rho) = -binom(N+d,d) int Phi(u_rho) dsigma; the sigma
    // integral realizes the Haar average of eq-independent Husimi values.
    McValue entropy(const ConvexFn& phi, const EntropyOptions& opts = {}) const;

    // C_{N,Omega}(rho) = int_Omega u dsigma / int u dsigma; exact for caps.
    McValue concentration(const Region& region, const ConcOptions& opts = {}) const;

    struct TraceDistance {
        double value = 0.0;
        std::vector<cplx> argmin;
        bool converged = false;
    };
    // min_eta ||rho - pi_eta||_1 over coherent projectors, multistart
    // Nelder-Mead seeded at Husimi maximizers.
    TraceDistance trace_distance_to_coherent(std::size_t screen_samples = 1 << 14,
                                             std::uint64_t seed = 5, int starts = 8,
                                             int nm_max_iter = 400) const;

    // ||rho - pi_eta||_1 for a fixed center.
    double trace_distance_to(std::span<const cplx> eta) const;

    // Nonzero-eigenvalue spectral components as polynomials.
    const std::vector<HomPoly>& eigen_polys() const { return eigpolys_; }
    const std::vector<double>& eigen_weights() const { return eigweights_; }

  private:
    DensityState(int d, int N, Eigen::MatrixXcd m);

    int d_;
    int N_;
    Eigen::MatrixXcd mat_;
    Eigen::VectorXd evals_;
    std::vector<HomPoly> eigpolys_;
    std::vector<double> eigweights_;
};

// Matrix elements of the coherent projector pi_eta in the orthonormal basis.
Eigen::MatrixXcd coherent_projector(int d, int N, std::span<const cplx> eta);

// Matrix of the unitary action pi(R) in the orthonormal basis (conjugating a
// state by it realizes the rotation of the underlying polynomials).
Eigen::MatrixXcd rotation_matrix_onb(int d, int N, std::span<const cplx> R);

}  // namespace wehrl
