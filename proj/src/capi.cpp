#include "wehrl.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "convexfn.hpp"
#include "experiments.hpp"
#include "functionals.hpp"
#include "io.hpp"
#include "levelset.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "states.hpp"

using namespace wehrl;

struct wehrl_poly {
    HomPoly value;
};
struct wehrl_state {
    DensityState value;
};
struct wehrl_profile {
    LevelProfile value;
};

namespace {

thread_local std::string g_last_error;

const char* set_error(const std::string& msg) {
    g_last_error = msg;
    return g_last_error.c_str();
}

template <typename Fn>
wehrl_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return WEHRL_ERR_INVALID_ARGUMENT;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return WEHRL_ERR_INVALID_ARGUMENT;
    } catch (const nlohmann::json::exception& e) {
        set_error(e.what());
        return WEHRL_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WEHRL_ERR_NUMERIC;
    }
}

std::vector<cplx> unpack_complex(const double* data, int n) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = cplx{data[2 * k], data[2 * k + 1]};
    return v;
}

void pack_complex(std::span<const cplx> v, double* out) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[2 * k] = v[k].real();
        out[2 * k + 1] = v[k].imag();
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

}  // namespace

extern "C" {

const char* wehrl_last_error(void) { return g_last_error.c_str(); }

const char* wehrl_version(void) { return "0.1.0"; }

wehrl_status wehrl_poly_load(const char* path, wehrl_poly** out) {
    if (!path || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = new wehrl_poly{load_poly(path)};
        return WEHRL_OK;
    });
}

wehrl_status wehrl_poly_from_json(const char* json_text, wehrl_poly** out) {
    if (!json_text || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = new wehrl_poly{parse_poly_json(nlohmann::json::parse(json_text))};
        return WEHRL_OK;
    });
}

wehrl_status wehrl_poly_kernel(int d, int N, const double* eta, wehrl_poly** out) {
    if (!eta || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto e = unpack_complex(eta, d + 1);
        *out = new wehrl_poly{HomPoly::reproducing_kernel(N, e)};
        return WEHRL_OK;
    });
}

wehrl_status wehrl_poly_random(int d, int N, uint64_t seed, wehrl_poly** out) {
    if (!out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        CounterRng rng(seed);
        *out = new wehrl_poly{HomPoly::random_unit(d, N, rng)};
        return WEHRL_OK;
    });
}

void wehrl_poly_free(wehrl_poly* p) { delete p; }

int wehrl_poly_dim(const wehrl_poly* p) { return p ? p->value.dim() : -1; }

int wehrl_poly_degree(const wehrl_poly* p) { return p ? p->value.degree() : -1; }

wehrl_status wehrl_poly_norm(const wehrl_poly* p, double* out) {
    if (!p || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = p->value.norm();
        return WEHRL_OK;
    });
}

wehrl_status wehrl_poly_eval(const wehrl_poly* p, const double* zeta, double* re, double* im) {
    if (!p || !zeta || !re || !im) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto z = unpack_complex(zeta, p->value.dim() + 1);
        cplx v = p->value.eval(z);
        *re = v.real();
        *im = v.imag();
        return WEHRL_OK;
    });
}

wehrl_status wehrl_poly_to_json(const wehrl_poly* p, char** out_json) {
    if (!p || !out_json) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out_json = dup_string(poly_to_json(p->value).dump());
        return WEHRL_OK;
    });
}

void wehrl_string_free(char* s) { std::free(s); }

wehrl_status wehrl_sup_modulus(const wehrl_poly* p, uint64_t seed, double* T, double* argmax) {
    if (!p || !T) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        SupOptions opts;
        opts.seed = seed;
        SupResult r = sup_modulus(p->value, opts);
        if (!r.converged) {
            set_error("sup_modulus: no start reached the gradient tolerance");
            *T = r.T;
            return WEHRL_ERR_NUMERIC;
        }
        *T = r.T;
        if (argmax) pack_complex(r.argmax, argmax);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_distance_to_kernels(const wehrl_poly* p, uint64_t seed, double* D,
                                       double* argmax) {
    if (!p || !D) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        SupOptions opts;
        opts.seed = seed;
        DistanceResult r = distance_to_kernels(p->value, opts);
        *D = r.value;
        if (argmax) pack_complex(r.argmax, argmax);
        return r.converged ? WEHRL_OK
                           : (set_error("distance: optimizer did not converge"), WEHRL_ERR_NUMERIC);
    });
}

wehrl_status wehrl_entropy(const wehrl_poly* p, const char* phi, uint64_t seed, size_t samples,
                           int rule_degree, double* value, double* stderr_out) {
    if (!p || !phi || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        EntropyOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        opts.rule_degree = rule_degree;
        McValue v = wehrl::wehrl_entropy(p->value, ConvexFn::parse(phi), opts);
        *value = v.value;
        if (stderr_out) *stderr_out = v.exact ? -1.0 : v.stderr_;
        return WEHRL_OK;
    });
}

wehrl_status wehrl_concentration_cap(const wehrl_poly* p, const double* eta, double t,
                                     double* value) {
    if (!p || !eta || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto e = unpack_complex(eta, p->value.dim() + 1);
        McValue v = concentration(p->value, Region::cap(std::move(e), t));
        *value = v.value;
        return WEHRL_OK;
    });
}

wehrl_status wehrl_concentration_superlevel(const wehrl_poly* p, double omega, uint64_t seed,
                                            size_t samples, double* value, double* stderr_out,
                                            double* threshold_out) {
    if (!p || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        ConcOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        OptimalConcentration oc = optimal_concentration(p->value, omega, opts);
        *value = oc.C.value;
        if (stderr_out) *stderr_out = oc.C.stderr_;
        if (threshold_out) *threshold_out = oc.threshold;
        return WEHRL_OK;
    });
}

wehrl_status wehrl_extremal_entropy(int d, int N, const char* phi, double* value) {
    if (!phi || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *value = extremal_entropy(N, d, ConvexFn::parse(phi));
        return WEHRL_OK;
    });
}

wehrl_status wehrl_extremal_concentration(int d, int N, double omega, double* value) {
    if (!value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *value = extremal_concentration(N, d, omega);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_cap_measure(int d, int N, double t, double* value) {
    if (!value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *value = cap_measure(N, d, t);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_alpha_coefficient(int d, int N, double omega, double omega_tilde,
                                     double* value) {
    if (!value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *value = alpha_coefficient(omega, N, d, omega_tilde);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_profile_build(const wehrl_poly* p, uint64_t seed, size_t samples,
                                 wehrl_profile** out) {
    if (!p || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        SupOptions opts;
        opts.seed = seed;
        SupResult sup = sup_modulus(p->value, opts);
        *out = new wehrl_profile{
            LevelProfile::build(p->value.normalized(), samples, seed, sup.T)};
        return WEHRL_OK;
    });
}

void wehrl_profile_free(wehrl_profile* pr) { delete pr; }

wehrl_status wehrl_profile_mu(const wehrl_profile* pr, double t, double* out) {
    if (!pr || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = pr->value.mu(t);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_profile_quantile(const wehrl_profile* pr, double s, double* out) {
    if (!pr || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = pr->value.mu_inverse(s);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_profile_export_csv(const wehrl_profile* pr, const char* path) {
    if (!pr || !path) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        pr->value.export_csv(path);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_state_load(const char* path, wehrl_state** out) {
    if (!path || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = new wehrl_state{load_state(path)};
        return WEHRL_OK;
    });
}

wehrl_status wehrl_state_from_json(const char* json_text, wehrl_state** out) {
    if (!json_text || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *out = new wehrl_state{parse_state_json(nlohmann::json::parse(json_text))};
        return WEHRL_OK;
    });
}

void wehrl_state_free(wehrl_state* st) { delete st; }

wehrl_status wehrl_state_husimi(const wehrl_state* st, const double* zeta, double* out) {
    if (!st || !zeta || !out) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto z = unpack_complex(zeta, st->value.dim() + 1);
        *out = st->value.husimi(z);
        return WEHRL_OK;
    });
}

wehrl_status wehrl_state_entropy(const wehrl_state* st, const char* phi, uint64_t seed,
                                 size_t samples, double* value, double* stderr_out) {
    if (!st || !phi || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        EntropyOptions opts;
        opts.samples = samples;
        opts.seed = seed;
        McValue v = st->value.entropy(ConvexFn::parse(phi), opts);
        *value = v.value;
        if (stderr_out) *stderr_out = v.exact ? -1.0 : v.stderr_;
        return WEHRL_OK;
    });
}

wehrl_status wehrl_state_concentration_cap(const wehrl_state* st, const double* eta, double t,
                                           double* value) {
    if (!st || !eta || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto e = unpack_complex(eta, st->value.dim() + 1);
        McValue v = st->value.concentration(Region::cap(std::move(e), t));
        *value = v.value;
        return WEHRL_OK;
    });
}

wehrl_status wehrl_state_trace_distance(const wehrl_state* st, uint64_t seed, double* value,
                                        double* argmin) {
    if (!st || !value) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto r = st->value.trace_distance_to_coherent(1 << 14, seed);
        *value = r.value;
        if (argmin && !r.argmin.empty()) pack_complex(r.argmin, argmin);
        return r.converged
                   ? WEHRL_OK
                   : (set_error("trace distance: optimizer returned no center"), WEHRL_ERR_NUMERIC);
    });
}

wehrl_status wehrl_run_sweep_concentration(const char* config_json, const char* out_csv,
                                           const char* out_json) {
    if (!config_json || !out_csv || !out_json) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        SweepConfig cfg = SweepConfig::from_json(nlohmann::json::parse(config_json));
        SweepSummary summary;
        auto records = sweep_concentration_stability(cfg, &summary);
        write_text_file(out_csv, records_to_csv(records));
        write_text_file(out_json, summary_to_json(summary, cfg.to_json()).dump(2) + "\n");
        return WEHRL_OK;
    });
}

wehrl_status wehrl_run_sweep_wehrl(const char* config_json, const char* out_csv,
                                   const char* out_json) {
    if (!config_json || !out_csv || !out_json) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        SweepConfig cfg = SweepConfig::from_json(nlohmann::json::parse(config_json));
        SweepSummary summary;
        auto records = sweep_wehrl_stability(cfg, &summary);
        write_text_file(out_csv, records_to_csv(records));
        write_text_file(out_json, summary_to_json(summary, cfg.to_json()).dump(2) + "\n");
        return WEHRL_OK;
    });
}

wehrl_status wehrl_run_sharpness(int d, int N, const char* eps_csv, const char* phi,
                                 size_t samples, uint64_t seed, char** out_json) {
    if (!eps_csv || !phi || !out_json) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto eps = parse_csv_doubles(eps_csv);
        SharpnessReport rep = sharpness_family(d, N, eps, ConvexFn::parse(phi), samples, seed);
        nlohmann::json j;
        j["slope_D"] = rep.slope_D;
        j["slope_deficit"] = rep.slope_deficit;
        j["ratio_min"] = rep.ratio_min;
        j["ratio_max"] = rep.ratio_max;
        j["significant_points"] = rep.significant_points;
        j["points"] = nlohmann::json::array();
        for (const auto& p : rep.points)
            j["points"].push_back({{"eps", p.eps},
                                   {"T", p.T},
                                   {"D", p.D},
                                   {"deficit", p.deficit},
                                   {"deficit_stderr", p.deficit_stderr},
                                   {"significant", p.significant}});
        *out_json = dup_string(j.dump(2));
        return WEHRL_OK;
    });
}

wehrl_status wehrl_run_fock_limit(const char* poly_json, const char* degrees_csv, double area,
                                  const char* phi, size_t samples, uint64_t seed,
                                  char** out_json) {
    if (!degrees_csv || !phi || !out_json) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        std::vector<int> degrees;
        for (double v : parse_csv_doubles(degrees_csv)) degrees.push_back(static_cast<int>(v));
        AffinePoly f = poly_json
                           ? parse_poly_json(nlohmann::json::parse(poly_json)).to_affine()
                           : AffinePoly(1, 0, {cplx{1.0, 0.0}});
        FockReport rep = fock_limit_check(f, degrees, area, ConvexFn::parse(phi), samples, seed);
        nlohmann::json j;
        j["oracle_concentration"] = rep.oracle_concentration;
        j["oracle_concentration_stderr"] = rep.oracle_concentration_stderr;
        j["oracle_entropy"] = rep.oracle_entropy;
        j["oracle_entropy_stderr"] = rep.oracle_entropy_stderr;
        j["points"] = nlohmann::json::array();
        for (const auto& p : rep.points)
            j["points"].push_back({{"N", p.N},
                                   {"concentration", p.concentration},
                                   {"concentration_stderr", p.concentration_stderr},
                                   {"entropy", p.entropy},
                                   {"entropy_stderr", p.entropy_stderr}});
        *out_json = dup_string(j.dump(2));
        return WEHRL_OK;
    });
}

wehrl_status wehrl_run_diff_audit(const char* config_json, char** out_json) {
    if (!config_json || !out_json) return WEHRL_ERR_NULL_ARGUMENT;
    return guarded([&] {
        auto j = nlohmann::json::parse(config_json);
        AuditConfig cfg;
        if (j.contains("d")) cfg.d = j["d"].get<int>();
        if (j.contains("N")) cfg.N = j["N"].get<int>();
        if (j.contains("polynomials")) cfg.polynomials = j["polynomials"].get<int>();
        if (j.contains("samples")) cfg.samples = j["samples"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("omega_tilde")) cfg.omega_tilde = j["omega_tilde"].get<double>();
        if (j.contains("grid_points")) cfg.grid_points = j["grid_points"].get<int>();
        AuditReport rep = differential_inequality_audit(cfg);
        nlohmann::json out;
        out["status"] = rep.status;
        out["total_violations"] = rep.total_violations;
        out["total_monotonicity_violations"] = rep.total_monotonicity_violations;
        out["polys"] = nlohmann::json::array();
        for (const auto& pr : rep.polys)
            out["polys"].push_back({{"item", pr.item},
                                    {"T", pr.T},
                                    {"violations", pr.violations},
                                    {"inconclusive", pr.inconclusive},
                                    {"monotonicity_violations", pr.monotonicity_violations},
                                    {"status", pr.status}});
        *out_json = dup_string(out.dump(2));
        return WEHRL_OK;
    });
}

}  // extern "C"
