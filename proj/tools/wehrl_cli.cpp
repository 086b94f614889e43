// Command-line front end over the wehrl shared library (C API only).
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wehrl.h"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int status_to_exit(wehrl_status st) {
    switch (st) {
        case WEHRL_OK: return 0;
        case WEHRL_ERR_NUMERIC: return kExitNumeric;
        default: return kExitConfig;
    }
}

[[noreturn]] void fail(wehrl_status st) {
    std::cerr << "error: " << wehrl_last_error() << "\n";
    std::exit(status_to_exit(st));
}

[[noreturn]] void fail_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitConfig);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail_config("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) fail_config("cannot write: " + out_path);
        f << text;
    }
}

json record(const std::string& functional, double value, std::optional<double> se,
            const json& config) {
    json j;
    j["functional"] = functional;
    j["value"] = value;
    if (se)
        j["stderr"] = *se;
    else
        j["stderr"] = nullptr;
    j["method"] = se ? "mc" : "exact";
    j["argmax"] = nullptr;
    j["config"] = config;
    return j;
}

struct PolyHandle {
    wehrl_poly* p = nullptr;
    ~PolyHandle() { wehrl_poly_free(p); }
};

struct StateHandle {
    wehrl_state* s = nullptr;
    ~StateHandle() { wehrl_state_free(s); }
};

void load_poly(const std::string& path, PolyHandle& h) {
    if (path.empty()) fail_config("--poly FILE is required");
    wehrl_status st = wehrl_poly_load(path.c_str(), &h.p);
    if (st != WEHRL_OK) fail(st);
}

void load_state(const std::string& path, StateHandle& h) {
    if (path.empty()) fail_config("--state FILE is required");
    wehrl_status st = wehrl_state_load(path.c_str(), &h.s);
    if (st != WEHRL_OK) fail(st);
}

// --region cap:T | superlevel:OMEGA | file:PATH
struct RegionArg {
    std::string kind;  // cap | cap_complement | superlevel
    double t = 0.0;
    double omega = 0.0;
    std::vector<double> center;  // interleaved, empty = pole
};

RegionArg parse_region(const std::string& spec, int d) {
    RegionArg r;
    if (spec.rfind("cap:", 0) == 0) {
        r.kind = "cap";
        r.t = std::stod(spec.substr(4));
    } else if (spec.rfind("superlevel:", 0) == 0) {
        r.kind = "superlevel";
        r.omega = std::stod(spec.substr(11));
    } else if (spec.rfind("file:", 0) == 0) {
        json j;
        try {
            j = json::parse(read_file(spec.substr(5)));
        } catch (const std::exception& e) {
            fail_config(std::string("region file: ") + e.what());
        }
        const std::string type = j.value("type", "");
        if (type != "cap" && type != "cap_complement")
            fail_config("region file: field 'type' must be cap or cap_complement");
        r.kind = type;
        if (!j.contains("t") || !j["t"].is_number())
            fail_config("region file: field 't' must be a number");
        r.t = j["t"].get<double>();
        if (j.contains("center")) {
            r.center = j["center"].get<std::vector<double>>();
            if (static_cast<int>(r.center.size()) != 2 * (d + 1))
                fail_config("region file: field 'center' needs 2(d+1) entries");
        }
    } else {
        fail_config("--region must be cap:T, superlevel:OMEGA or file:PATH");
    }
    if (r.kind != "superlevel" && r.center.empty()) {
        r.center.assign(static_cast<std::size_t>(2 * (d + 1)), 0.0);
        r.center[0] = 1.0;  // pole
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wehrl: concentration and generalized Wehrl entropy of homogeneous polynomials"};
    app.require_subcommand(1);

    std::string poly_path, state_path, out_path, config_path, region_spec;
    std::string phi = "xlogx", format = "json";
    std::uint64_t seed = 1;
    std::size_t samples = 200000;
    int rule_degree = 0;  // reserved for quadrature-backed evaluations
    double omega = 0.25, omega_tilde = -1.0, area = 1.0;
    int dim = 1, degree = 4;
    std::string eps_csv = "0.025,0.05,0.1,0.2";
    std::string n_list = "64,256";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--samples", samples, "Monte Carlo sample count");
        cmd->add_option("--rule-degree", rule_degree, "exact-rule degree budget");
        cmd->add_option("--out", out_path, "output path (stdout if omitted)");
        cmd->add_option("--format", format, "csv|json (single evaluations are json)");
    };

    auto* c_entropy = app.add_subcommand("entropy", "generalized Wehrl entropy of a polynomial");
    c_entropy->add_option("--poly", poly_path, "polynomial JSON file")->required();
    c_entropy->add_option("--phi", phi, "linear|xlogx|power:P|hinge:T0");
    add_common(c_entropy);

    auto* c_conc = app.add_subcommand("concentration", "concentration on a region");
    c_conc->add_option("--poly", poly_path)->required();
    c_conc->add_option("--region", region_spec, "cap:T|superlevel:OMEGA|file:PATH")->required();
    add_common(c_conc);

    auto* c_dist = app.add_subcommand("distance", "distance to the reproducing kernels");
    c_dist->add_option("--poly", poly_path)->required();
    add_common(c_dist);

    auto* c_profile = app.add_subcommand("profile", "level profile mu(t) export");
    c_profile->add_option("--poly", poly_path)->required();
    add_common(c_profile);

    auto* c_sconc = app.add_subcommand("sweep-conc", "concentration stability sweep");
    c_sconc->add_option("--config", config_path, "sweep config JSON")->required();
    add_common(c_sconc);

    auto* c_swehrl = app.add_subcommand("sweep-wehrl", "Wehrl entropy stability sweep");
    c_swehrl->add_option("--config", config_path, "sweep config JSON")->required();
    add_common(c_swehrl);

    auto* c_sharp = app.add_subcommand("sharpness", "sharpness family scaling report");
    c_sharp->add_option("--d", dim, "complex dimension d");
    c_sharp->add_option("--N", degree, "polynomial degree N");
    c_sharp->add_option("--eps", eps_csv, "comma-separated amplitudes");
    c_sharp->add_option("--phi", phi);
    add_common(c_sharp);

    auto* c_fock = app.add_subcommand("fock-limit", "Bargmann-Fock limit check");
    c_fock->add_option("--poly", poly_path, "embedded polynomial (affine); default f = 1");
    c_fock->add_option("--N-list", n_list, "comma-separated degrees");
    c_fock->add_option("--area", area, "Lebesgue volume of the Fock-side ball");
    c_fock->add_option("--phi", phi);
    add_common(c_fock);

    auto* c_audit = app.add_subcommand("diff-audit", "differential inequality audit");
    c_audit->add_option("--config", config_path, "audit config JSON");
    c_audit->add_option("--d", dim);
    c_audit->add_option("--N", degree);
    c_audit->add_option("--omega-tilde", omega_tilde);
    add_common(c_audit);

    auto* c_sentropy = app.add_subcommand("state-entropy", "entropy of a density state");
    c_sentropy->add_option("--state", state_path, "state JSON file")->required();
    c_sentropy->add_option("--phi", phi);
    add_common(c_sentropy);

    auto* c_sconc2 = app.add_subcommand("state-concentration", "concentration of a density state");
    c_sconc2->add_option("--state", state_path)->required();
    c_sconc2->add_option("--region", region_spec, "cap:T|file:PATH")->required();
    add_common(c_sconc2);

    auto* c_sdist = app.add_subcommand("state-distance", "trace distance to coherent states");
    c_sdist->add_option("--state", state_path)->required();
    add_common(c_sdist);

    c_conc->add_option("--omega", omega, "measure for superlevel regions");
    c_conc->add_option("--omega-tilde", omega_tilde, "isoperimetric threshold");

    CLI11_PARSE(app, argc, argv);

    json config;
    config["seed"] = seed;
    config["samples"] = samples;

    if (app.got_subcommand(c_entropy)) {
        PolyHandle h;
        load_poly(poly_path, h);
        double value = 0.0, se = -1.0;
        wehrl_status st = wehrl_entropy(h.p, phi.c_str(), seed, samples, rule_degree, &value, &se);
        if (st != WEHRL_OK) fail(st);
        config["poly"] = poly_path;
        config["phi"] = phi;
        emit(record("entropy", value, se < 0.0 ? std::nullopt : std::optional<double>(se), config),
             out_path);
        return 0;
    }

    if (app.got_subcommand(c_conc)) {
        PolyHandle h;
        load_poly(poly_path, h);
        RegionArg r = parse_region(region_spec, wehrl_poly_dim(h.p));
        config["poly"] = poly_path;
        config["region"] = region_spec;
        if (r.kind == "superlevel") {
            double value = 0.0, se = 0.0, thr = 0.0;
            wehrl_status st = wehrl_concentration_superlevel(h.p, r.omega, seed, samples, &value,
                                                             &se, &thr);
            if (st != WEHRL_OK) fail(st);
            json j = record("concentration", value, se, config);
            j["threshold"] = thr;
            emit(j, out_path);
        } else {
            double value = 0.0;
            wehrl_status st = wehrl_concentration_cap(h.p, r.center.data(), r.t, &value);
            if (st != WEHRL_OK) fail(st);
            if (r.kind == "cap_complement") value = 1.0 - value;
            emit(record("concentration", value, std::nullopt, config), out_path);
        }
        return 0;
    }

    if (app.got_subcommand(c_dist)) {
        PolyHandle h;
        load_poly(poly_path, h);
        double D = 0.0;
        std::vector<double> argmax(2 * static_cast<std::size_t>(wehrl_poly_dim(h.p) + 1));
        wehrl_status st = wehrl_distance_to_kernels(h.p, seed, &D, argmax.data());
        if (st != WEHRL_OK) fail(st);
        config["poly"] = poly_path;
        json j = record("distance", D, std::nullopt, config);
        j["argmax"] = argmax;
        emit(j, out_path);
        return 0;
    }

    if (app.got_subcommand(c_profile)) {
        PolyHandle h;
        load_poly(poly_path, h);
        wehrl_profile* pr = nullptr;
        wehrl_status st = wehrl_profile_build(h.p, seed, samples, &pr);
        if (st != WEHRL_OK) fail(st);
        const std::string csv_path = out_path.empty() ? "profile.csv" : out_path;
        st = wehrl_profile_export_csv(pr, csv_path.c_str());
        wehrl_profile_free(pr);
        if (st != WEHRL_OK) fail(st);
        std::cerr << "profile written to " << csv_path << "\n";
        return 0;
    }

    if (app.got_subcommand(c_sconc) || app.got_subcommand(c_swehrl)) {
        if (out_path.empty()) fail_config("--out PATH is required for sweeps");
        json cfg;
        try {
            cfg = json::parse(read_file(config_path));
        } catch (const std::exception& e) {
            fail_config(std::string("config: ") + e.what());
        }
        // explicit flags override the config file
        for (auto* cmd : {c_sconc, c_swehrl}) {
            if (!app.got_subcommand(cmd)) continue;
            if (cmd->count("--seed")) cfg["seed"] = seed;
            if (cmd->count("--samples")) cfg["samples"] = samples;
        }
        const std::string summary_path = out_path + ".summary.json";
        wehrl_status st =
            app.got_subcommand(c_sconc)
                ? wehrl_run_sweep_concentration(cfg.dump().c_str(), out_path.c_str(),
                                                summary_path.c_str())
                : wehrl_run_sweep_wehrl(cfg.dump().c_str(), out_path.c_str(),
                                        summary_path.c_str());
        if (st != WEHRL_OK) fail(st);
        std::cerr << "records: " << out_path << "\nsummary: " << summary_path << "\n";
        return 0;
    }

    if (app.got_subcommand(c_sharp)) {
        char* out_json = nullptr;
        wehrl_status st = wehrl_run_sharpness(dim, degree, eps_csv.c_str(), phi.c_str(), samples,
                                              seed, &out_json);
        if (st != WEHRL_OK) fail(st);
        json j = json::parse(out_json);
        wehrl_string_free(out_json);
        config["d"] = dim;
        config["N"] = degree;
        config["eps"] = eps_csv;
        config["phi"] = phi;
        j["config"] = config;
        emit(j, out_path);
        return 0;
    }

    if (app.got_subcommand(c_fock)) {
        std::string poly_json;
        if (!poly_path.empty()) poly_json = read_file(poly_path);
        char* out_json = nullptr;
        wehrl_status st =
            wehrl_run_fock_limit(poly_json.empty() ? nullptr : poly_json.c_str(), n_list.c_str(),
                                 area, phi.c_str(), samples, seed, &out_json);
        if (st != WEHRL_OK) fail(st);
        json j = json::parse(out_json);
        wehrl_string_free(out_json);
        config["N_list"] = n_list;
        config["area"] = area;
        config["phi"] = phi;
        j["config"] = config;
        emit(j, out_path);
        return 0;
    }

    if (app.got_subcommand(c_audit)) {
        json cfg;
        if (!config_path.empty()) {
            try {
                cfg = json::parse(read_file(config_path));
            } catch (const std::exception& e) {
                fail_config(std::string("config: ") + e.what());
            }
        } else {
            cfg["d"] = dim;
            cfg["N"] = degree;
            cfg["samples"] = samples;
            cfg["seed"] = seed;
            if (omega_tilde > 0.0) cfg["omega_tilde"] = omega_tilde;
        }
        char* out_json = nullptr;
        wehrl_status st = wehrl_run_diff_audit(cfg.dump().c_str(), &out_json);
        if (st != WEHRL_OK) fail(st);
        json j = json::parse(out_json);
        wehrl_string_free(out_json);
        j["config"] = cfg;
        emit(j, out_path);
        return 0;
    }

    if (app.got_subcommand(c_sentropy)) {
        StateHandle h;
        load_state(state_path, h);
        double value = 0.0, se = -1.0;
        wehrl_status st = wehrl_state_entropy(h.s, phi.c_str(), seed, samples, &value, &se);
        if (st != WEHRL_OK) fail(st);
        config["state"] = state_path;
        config["phi"] = phi;
        emit(record("state-entropy", value, se < 0.0 ? std::nullopt : std::optional<double>(se),
                    config),
             out_path);
        return 0;
    }

    if (app.got_subcommand(c_sconc2)) {
        StateHandle h;
        load_state(state_path, h);
        // dimension for the region parse comes from the state file itself
        json sj = json::parse(read_file(state_path));
        RegionArg r = parse_region(region_spec, sj.value("d", 1));
        if (r.kind == "superlevel") fail_config("state-concentration supports cap regions");
        double value = 0.0;
        wehrl_status st = wehrl_state_concentration_cap(h.s, r.center.data(), r.t, &value);
        if (st != WEHRL_OK) fail(st);
        if (r.kind == "cap_complement") value = 1.0 - value;
        config["state"] = state_path;
        config["region"] = region_spec;
        emit(record("state-concentration", value, std::nullopt, config), out_path);
        return 0;
    }

    if (app.got_subcommand(c_sdist)) {
        StateHandle h;
        load_state(state_path, h);
        double value = 0.0;
        wehrl_status st = wehrl_state_trace_distance(h.s, seed, &value, nullptr);
        if (st != WEHRL_OK) fail(st);
        config["state"] = state_path;
        emit(record("state-distance", value, std::nullopt, config), out_path);
        return 0;
    }

    fail_config("no subcommand selected");
}
