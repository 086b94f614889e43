#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poly.hpp"

namespace wehrl {

// Closed forms for the extremal profile mu0(t) = (1 - t^{1/N})^d of a
// reproducing kernel, and exact integrals of it (Gauss-Legendre on the
// polynomial substitution, stable for large N where the binomial expansion
// cancels catastrophically).
struct ExtremalProfile {
    int d;
    int N;

    double mu0(double t) const;
    double mu0_inv(double s) const;
    double integral_mu0(double t_hat) const;      // int_0^t (1-x^{1/N})^d dx
    double integral_mu0_inv(double s_hat) const;  // int_0^s (1-x^{1/d})^N dx
};

// Empirical distribution function mu(t) = sigma({U > t}) of U = |Q|^2,
// represented by the sorted Monte Carlo sample of U (no binning).
class LevelProfile {
  public:
    // Q must have unit norm; T is the sup of U (from the functionals module).
    static LevelProfile build(const HomPoly& Q_unit, std::size_t n, std::uint64_t seed, double T);
    static LevelProfile from_values(int d, int N, std::vector<double> values, std::uint64_t seed,
                                    double T);

    int dim() const { return d_; }
    int degree() const { return N_; }
    double sup() const { return T_; }
    std::size_t sample_count() const { return u_.size(); }
    std::uint64_t seed() const { return seed_; }
    const std::vector<double>& sorted_values() const { return u_; }

    double mu(double t) const;          // fraction of samples > t
    double mu_inverse(double s) const;  // order statistic at rank ceil(s n)

    double integral_mu(double t_hat) const;          // int_0^t mu = mean(min(U, t))
    double integral_mu_inverse(double s_hat) const;  // trapezoid on order statistics
    double mean() const;                             // int_0^1 mu^{-1}(s) ds

    struct Crossing {
        bool degenerate = false;  // mu == mu0 within noise (kernel input)
        double t_star = 0.0;      // sup{t : mu(t) >= mu0(t)}
        double s_star = 0.0;      // mu0^{-1}(t_star)
        double sup_deviation = 0.0;
    };
    Crossing crossing_points() const;

    struct Deficits {
        double inverse_integral;  // int_0^s (mu0^{-1} - mu^{-1})
        double direct_integral;   // int_0^t (mu - mu0)
    };
    // s_hat in (0,1); accompanying t_hat defaults to mu_inverse(s_hat).
    Deficits deficit_integrals(double s_hat, std::optional<double> t_hat = std::nullopt) const;

    struct DiffIneqPoint {
        double t;
        double slope;      // centred finite difference of mu
        double bound;      // -(d/(Nt)) mu^{1-1/d} (1 - mu^{1/d})
        double noise;      // combined 1-sigma uncertainty
        bool violation;    // slope > bound + 3*noise
        bool inconclusive; // too few samples in the stencil window
    };
    struct DiffIneqReport {
        std::vector<DiffIneqPoint> points;
        int violations = 0;
        int inconclusive = 0;
        std::string status;  // "ok" | "violations" | "inconclusive"
    };
    // Checks mu'(t) <= -(d/(Nt)) mu^{1-1/d}(1-mu^{1/d}) on a grid inside
    // (mu^{-1}(omega_tilde), T).
    DiffIneqReport check_differential_inequality(double omega_tilde, int grid_points) const;

    // CSV export: t, mu_empirical, mu0, diff on a uniform 1000-point grid.
    void export_csv(const std::string& path) const;

  private:
    LevelProfile(int d, int N, std::vector<double> sorted, std::uint64_t seed, double T);

    int d_;
    int N_;
    std::uint64_t seed_;
    double T_;
    std::vector<double> u_;  // ascending
};

// Default isoperimetric threshold: 1 for d = 1, 0.3 otherwise (the paper
// proves a threshold exists for d >= 2 but gives no value).
double default_omega_tilde(int d);

}  // namespace wehrl
