#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "convexfn.hpp"
#include "levelset.hpp"
#include "poly.hpp"

namespace wehrl {

// Scalar produced either by a closed form / exact rule (stderr absent) or by
// Monte Carlo (stderr attached).
struct McValue {
    double value = 0.0;
    double stderr_ = 0.0;
    bool exact = false;
};

struct SupOptions {
    int starts = 64;                   // 32 quasi-random + 32 screened MC starts
    std::size_t screen_samples = 1 << 15;
    std::uint64_t seed = 1;
    double grad_tol = 1e-10;
    int max_iter = 500;
};

struct SupResult {
    double T = 0.0;
    std::vector<cplx> argmax;
    bool converged = false;
};

// T = sup |Q|^2 on the sphere by multistart projected gradient ascent with
// backtracking; Q is normalized internally. T <= 1 + 1e-9 is enforced.
SupResult sup_modulus(const HomPoly& Q, const SupOptions& opts = {});

// D_N(Q) = sqrt(2 (1 - sqrt(T))).
double distance_from_T(double T);

struct DistanceResult {
    double value = 0.0;
    double T = 0.0;
    std::vector<cplx> argmax;
    bool converged = false;
};
DistanceResult distance_to_kernels(const HomPoly& Q, const SupOptions& opts = {});

// Independent route: minimizes ||Q - K_N(., eta)||^2 directly (ascent on
// Re Q(eta)); used to cross-validate the distance identity.
struct DirectKernelFit {
    double min_dist_sq = 0.0;
    std::vector<cplx> argmin;
    bool converged = false;
};
DirectKernelFit distance_direct(const HomPoly& Q, const SupOptions& opts = {});

// sigma(Delta_t(eta)) = (1 - t^{1/N})^d, independent of the center.
double cap_measure(int N, int d, double t);

// Membership threshold on |<zeta, eta>|^2 for a cap of level t.
inline double cap_inner_threshold(int N, double t) { return std::pow(t, 1.0 / N); }

// Measurable region of the sphere.
class Region {
  public:
    enum class Kind { Cap, CapComplement, Indicator, Superlevel };

    static Region cap(std::vector<cplx> eta, double t);
    static Region cap_complement(std::vector<cplx> eta, double t);
    static Region indicator(std::function<bool(std::span<const cplx>)> member,
                            double declared_measure);
    // Superlevel set of |Q|^2 of prescribed measure omega; the threshold is
    // resolved against the polynomial when the region is used.
    static Region superlevel(double omega);

    Kind kind() const { return kind_; }
    double level() const { return t_; }
    double omega() const { return omega_; }
    std::span<const cplx> center() const { return eta_; }

    // sigma-measure (exact for caps, declared for indicators).
    double measure(int N, int d) const;
    bool contains(int N, std::span<const cplx> zeta) const;  // caps / indicators only

  private:
    Region() = default;
    Kind kind_ = Kind::Cap;
    std::vector<cplx> eta_;
    double t_ = 0.0;
    double omega_ = 0.0;
    std::function<bool(std::span<const cplx>)> member_;
    double declared_measure_ = 0.0;
};

struct ConcOptions {
    std::size_t samples = 200000;
    std::uint64_t seed = 2;
    int blocks = 32;  // batch-means stderr
};

// C_{N,Omega}(Q) = binom(N+d,d) int_Omega |Q|^2 dsigma for unit-norm Q.
// Caps are evaluated exactly through the one-dimensional reduction;
// indicator and superlevel regions by Monte Carlo.
McValue concentration(const HomPoly& Q, const Region& region, const ConcOptions& opts = {});

// Exact cap concentration after rotating the cap center to the pole.
double cap_concentration_exact(const HomPoly& Q, std::span<const cplx> eta, double t);

struct OptimalConcentration {
    McValue C;
    double threshold = 0.0;  // empirical mu^{-1}(omega)
};
OptimalConcentration optimal_concentration(const HomPoly& Q, double omega,
                                           const ConcOptions& opts = {});

struct EntropyOptions {
    std::size_t samples = 200000;
    std::uint64_t seed = 3;
    bool strict = false;   // abort if |Q|^2 exceeds 1 by more than 1e-9
    int rule_degree = 0;   // > 0: evaluate on the exact product rule of this
                           // degree budget (polynomial Phi only)
};

// S_{N,Phi}(Q) = -binom(N+d,d) int Phi(|Q|^2) dsigma; exact for linear Phi
// and integer powers, Monte Carlo (with stderr) otherwise.
McValue wehrl_entropy(const HomPoly& Q, const ConvexFn& phi, const EntropyOptions& opts = {});

// Entropy estimate from precomputed |Q|^2 samples (shared with the states
// module, which passes Husimi values).
McValue entropy_from_values(std::span<const double> u, int N, int d, const ConvexFn& phi,
                            bool strict);

// S_{N,Phi}(zeta_1^N) via the distribution-function substitution; exact for
// linear/hinge/integer powers, adaptive quadrature (1e-10) otherwise.
double extremal_entropy(int N, int d, const ConvexFn& phi);

// C_{N,Omega*}(zeta_1^N) for the optimal region of measure omega.
double extremal_concentration(int N, int d, double omega);

// alpha(omega) = N^d omega^2 (1-omega^{1/d})^{N-1} int_omega^{omega~} (1-s^{1/d})^N ds.
double alpha_coefficient(double omega, int N, int d, double omega_tilde);

// N^d int_omega^{omega~} (1-s^{1/d})^N ds, the coefficient of the stability bound.
double stability_coefficient(int N, int d, double omega, double omega_tilde);

struct AsymOptions {
    std::size_t samples = 20000;
    std::uint64_t seed = 4;
    int starts = 16;
    int nm_max_iter = 300;
};

struct AsymResult {
    double value = 0.0;
    double stderr_ = 0.0;
    std::vector<cplx> center;
};

// Fraenkel asymmetry: infimum over cap centers of the normalized symmetric
// difference with the equal-measure cap, Nelder-Mead on a common sample
// cloud. Optional hint seeds one start (e.g. the argmax of |Q|^2).
AsymResult fraenkel_asymmetry(int N, int d,
                              const std::function<bool(std::span<const cplx>)>& member,
                              double region_measure, const AsymOptions& opts = {},
                              std::span<const cplx> hint = {});

// Low-discrepancy point of the unit sphere (Weyl sequence + Box-Muller).
std::vector<cplx> quasi_random_sphere_point(std::size_t index, int d);

// Compact Nelder-Mead minimizer on R^m; returns (argmin, value).
std::pair<std::vector<double>, double> nelder_mead_min(
    const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
    double scale, int max_iter);

}  // namespace wehrl
