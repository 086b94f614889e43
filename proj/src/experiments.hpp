#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "convexfn.hpp"
#include "functionals.hpp"
#include "levelset.hpp"
#include "poly.hpp"

namespace wehrl {

struct GeneratorSpec {
    enum class Kind { Gaussian, NearKernel, File };
    Kind kind = Kind::Gaussian;
    double eps_min = 0.01;  // near-kernel amplitudes, log-spaced across items
    double eps_max = 0.5;
    std::string path;  // file generator
};

struct SweepConfig {
    int d = 1;
    int N = 4;
    std::string phi = "xlogx";
    std::vector<double> omega_grid;  // concentration sweeps
    GeneratorSpec generator;
    int polynomials = 50;
    std::size_t samples = 200000;
    std::uint64_t seed = 1;
    double omega_tilde = -1.0;  // < 0: dimension default (1 for d=1, 0.3 else)
    bool compute_asymmetry = false;
    std::size_t asym_samples = 20000;

    double resolved_omega_tilde() const;
    static SweepConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct StabilityRecord {
    std::size_t item = 0;
    double eps = std::nan("");    // generator amplitude when applicable
    double omega = std::nan("");  // concentration sweeps only
    std::string phi;
    double D = 0.0;
    double D2 = 0.0;
    double asym2 = std::nan("");
    double deficit = 0.0;
    double deficit_stderr = 0.0;
    double coeff = std::nan("");  // N^d int_omega^{omega~} (1-s^{1/d})^N ds
    double alpha = std::nan("");  // alpha(omega)
    double ratio = std::nan("");  // deficit / D^2
    std::string status;           // ok | extremal | below_noise | violation | excluded: linear
};

struct SweepSummary {
    double min_ratio = std::nan("");
    double max_ratio = std::nan("");
    int violations = 0;
    double runtime_seconds = 0.0;
    std::size_t records = 0;
    bool possible_subthreshold = false;  // Wehrl sweeps: ratio degenerating toward 0
};

// Theorem 1.6-style empirical stability: concentration deficits on optimal
// superlevel sets against D_N(Q)^2, with the paired-kernel variance
// reduction for near-kernel inputs.
std::vector<StabilityRecord> sweep_concentration_stability(const SweepConfig& cfg,
                                                           SweepSummary* summary = nullptr);

// Theorem 1.7-style empirical stability: entropy deficits against D_N(Q)^2.
// Linear Phi yields "excluded: linear" records.
std::vector<StabilityRecord> sweep_wehrl_stability(const SweepConfig& cfg,
                                                   SweepSummary* summary = nullptr);

struct SharpnessPoint {
    double eps = 0.0;
    double T = 0.0;
    double D = 0.0;
    double deficit = 0.0;
    double deficit_stderr = 0.0;
    bool significant = false;  // deficit > 4 stderr
};

struct SharpnessReport {
    std::vector<SharpnessPoint> points;
    double slope_D = std::nan("");        // log-log fit of D(eps)
    double slope_deficit = std::nan("");  // log-log fit over significant points
    double ratio_min = std::nan("");      // deficit / D^2 over significant points
    double ratio_max = std::nan("");
    int significant_points = 0;
};

// Family (zeta_1^N + eps zeta_1^{N-1} zeta_2)/sqrt(1+eps^2/N); reports
// distances, entropy deficits and fitted log-log exponents.
SharpnessReport sharpness_family(int d, int N, const std::vector<double>& eps_list,
                                 const ConvexFn& phi, std::size_t samples, std::uint64_t seed);

// The member of the sharpness family at amplitude eps.
HomPoly sharpness_polynomial(int d, int N, double eps);

struct FockPoint {
    int N = 0;
    double concentration = 0.0;
    double concentration_stderr = 0.0;
    double entropy = 0.0;
    double entropy_stderr = 0.0;
};

struct FockReport {
    double oracle_concentration = 0.0;
    double oracle_concentration_stderr = 0.0;
    double oracle_entropy = 0.0;
    double oracle_entropy_stderr = 0.0;
    std::vector<FockPoint> points;
};

// Bargmann-Fock limit: embeds f via q^N(z) = f(sqrt(N/pi) z) and the region
// W^N = sqrt(pi/N) W (W a ball of prescribed Lebesgue volume), comparing the
// projective concentration/entropy against a Gaussian-weight Monte Carlo
// oracle evaluated directly in the Fock space.
FockReport fock_limit_check(const AffinePoly& f, const std::vector<int>& degrees, double area,
                            const ConvexFn& phi, std::size_t samples, std::uint64_t seed);

struct AuditConfig {
    int d = 2;
    int N = 5;
    int polynomials = 20;
    std::size_t samples = 10000000;
    std::uint64_t seed = 11;
    double omega_tilde = -1.0;
    int grid_points = 24;
};

struct AuditPolyResult {
    std::size_t item = 0;
    double T = 0.0;
    int violations = 0;
    int inconclusive = 0;
    int monotonicity_violations = 0;
    std::string status;
};

struct AuditReport {
    std::vector<AuditPolyResult> polys;
    int total_violations = 0;
    int total_monotonicity_violations = 0;
    std::string status;  // ok | violations | inconclusive
};

// Lemma 3.3 audit: finite-difference slopes of mu against the differential
// inequality, plus monotonicity of (mu^{1/d} - mu0^{1/d}) / t^{1/N}.
AuditReport differential_inequality_audit(const AuditConfig& cfg);

// CSV / JSON emission for sweep outputs (stable schemas).
std::string records_to_csv(const std::vector<StabilityRecord>& records);
nlohmann::json summary_to_json(const SweepSummary& summary, const nlohmann::json& config_echo);

// Item generator shared by the sweeps: near-kernel items carry eps.
HomPoly generate_polynomial(const SweepConfig& cfg, std::size_t item, double* eps_out);

}  // namespace wehrl
