#include "io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wehrl {

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument(where + ": unknown field '" + it.key() + "'");
    }
}

int require_int(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing field '" + key + "'");
    if (!j[key].is_number_integer())
        throw std::invalid_argument(where + ": field '" + key + "' must be an integer");
    return j[key].get<int>();
}

}  // namespace

HomPoly parse_poly_json(const nlohmann::json& j) {
    require_keys(j, {"d", "N", "terms"}, "polynomial");
    const int d = require_int(j, "d", "polynomial");
    const int N = require_int(j, "N", "polynomial");
    if (!j.contains("terms") || !j["terms"].is_array())
        throw std::invalid_argument("polynomial: field 'terms' must be an array");
    std::vector<std::pair<std::vector<int>, cplx>> terms;
    std::size_t k = 0;
    for (const auto& t : j["terms"]) {
        const std::string where = "polynomial.terms[" + std::to_string(k++) + "]";
        require_keys(t, {"alpha", "re", "im"}, where);
        if (!t.contains("alpha") || !t["alpha"].is_array())
            throw std::invalid_argument(where + ": field 'alpha' must be an array");
        std::vector<int> alpha;
        for (const auto& a : t["alpha"]) {
            if (!a.is_number_integer())
                throw std::invalid_argument(where + ": 'alpha' entries must be integers");
            alpha.push_back(a.get<int>());
        }
        if (!t.contains("re") || !t["re"].is_number())
            throw std::invalid_argument(where + ": field 're' must be a number");
        if (!t.contains("im") || !t["im"].is_number())
            throw std::invalid_argument(where + ": field 'im' must be a number");
        terms.emplace_back(std::move(alpha), cplx{t["re"].get<double>(), t["im"].get<double>()});
    }
    try {
        return HomPoly::from_terms(d, N, terms);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("polynomial.terms: ") + e.what());
    }
}

HomPoly load_poly(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return parse_poly_json(j);
}

nlohmann::json poly_to_json(const HomPoly& Q) {
    nlohmann::json j;
    j["d"] = Q.dim();
    j["N"] = Q.degree();
    j["terms"] = nlohmann::json::array();
    const auto& idx = enumerate_multiindices(Q.dim(), Q.degree());
    auto c = Q.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == cplx{0.0, 0.0}) continue;
        nlohmann::json t;
        t["alpha"] = idx[i].entries;
        t["re"] = c[i].real();
        t["im"] = c[i].imag();
        j["terms"].push_back(std::move(t));
    }
    return j;
}

DensityState parse_state_json(const nlohmann::json& j) {
    require_keys(j, {"d", "N", "matrix"}, "state");
    const int d = require_int(j, "d", "state");
    const int N = require_int(j, "N", "state");
    if (!j.contains("matrix") || !j["matrix"].is_array())
        throw std::invalid_argument("state: field 'matrix' must be an array of rows");
    const std::size_t dim = multiindex_count(d, N);
    if (j["matrix"].size() != dim)
        throw std::invalid_argument("state.matrix: expected " + std::to_string(dim) + " rows");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        const auto& row = j["matrix"][r];
        if (!row.is_array() || row.size() != dim)
            throw std::invalid_argument("state.matrix[" + std::to_string(r) + "]: expected " +
                                        std::to_string(dim) + " entries");
        for (std::size_t c = 0; c < dim; ++c) {
            const auto& e = row[c];
            const std::string where =
                "state.matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]";
            require_keys(e, {"re", "im"}, where);
            if (!e.contains("re") || !e["re"].is_number() || !e.contains("im") ||
                !e["im"].is_number())
                throw std::invalid_argument(where + ": needs numeric 're' and 'im'");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                cplx{e["re"].get<double>(), e["im"].get<double>()};
        }
    }
    try {
        return DensityState::from_matrix(d, N, std::move(m));
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("state.matrix: ") + e.what());
    }
}

DensityState load_state(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return parse_state_json(j);
}

nlohmann::json state_to_json(const DensityState& st) {
    nlohmann::json j;
    j["d"] = st.dim();
    j["N"] = st.degree();
    auto rows = nlohmann::json::array();
    const auto& m = st.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({{"re", m(r, c).real()}, {"im", m(r, c).imag()}});
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

nlohmann::json result_record(const std::string& functional, double value,
                             std::optional<double> stderr_, const std::vector<cplx>* argmax,
                             nlohmann::json config) {
    nlohmann::json j;
    j["functional"] = functional;
    j["value"] = value;
    if (stderr_)
        j["stderr"] = *stderr_;
    else
        j["stderr"] = nullptr;
    if (argmax) {
        auto arr = nlohmann::json::array();
        for (const cplx& z : *argmax) {
            arr.push_back(z.real());
            arr.push_back(z.imag());
        }
        j["argmax"] = std::move(arr);
    } else {
        j["argmax"] = nullptr;
    }
    j["config"] = std::move(config);
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace wehrl
