#include "levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "quadrature.hpp"

namespace wehrl {

namespace {

// int_0^u f(x) dx for smooth f, 64-node Gauss-Legendre (exact for the
// polynomial substitutions used below up to degree 127).
double gl_integral(double u, const std::function<double(double)>& f) {
    static const Axis1D gl = gauss_jacobi_01(64, 0);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * f(u * gl.nodes[i]);
    return u * acc;
}

}  // namespace

double ExtremalProfile::mu0(double t) const {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return std::pow(1.0 - std::pow(t, 1.0 / N), d);
}

double ExtremalProfile::mu0_inv(double s) const {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return std::pow(1.0 - std::pow(s, 1.0 / d), N);
}

double ExtremalProfile::integral_mu0(double t_hat) const {
    if (t_hat <= 0.0) return 0.0;
    t_hat = std::min(t_hat, 1.0);
    // substitute t = x^N: N int_0^{t^{1/N}} (1-x)^d x^{N-1} dx
    const double xhi = std::pow(t_hat, 1.0 / N);
    return N * gl_integral(xhi, [this](double x) {
        return std::pow(1.0 - x, d) * std::pow(x, N - 1);
    });
}

double ExtremalProfile::integral_mu0_inv(double s_hat) const {
    if (s_hat <= 0.0) return 0.0;
    s_hat = std::min(s_hat, 1.0);
    const double xhi = std::pow(s_hat, 1.0 / d);
    return d * gl_integral(xhi, [this](double x) {
        return std::pow(1.0 - x, N) * std::pow(x, d - 1);
    });
}

LevelProfile::LevelProfile(int d, int N, std::vector<double> sorted, std::uint64_t seed, double T)
    : d_(d), N_(N), seed_(seed), T_(T), u_(std::move(sorted)) {}

LevelProfile LevelProfile::build(const HomPoly& Q_unit, std::size_t n, std::uint64_t seed,
                                 double T) {
    if (std::abs(Q_unit.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("LevelProfile: polynomial must have unit norm");
    std::vector<double> u = abs2_samples(Q_unit, n, seed);
    std::sort(u.begin(), u.end());
    return LevelProfile(Q_unit.dim(), Q_unit.degree(), std::move(u), seed, T);
}

LevelProfile LevelProfile::from_values(int d, int N, std::vector<double> values,
                                       std::uint64_t seed, double T) {
    std::sort(values.begin(), values.end());
    return LevelProfile(d, N, std::move(values), seed, T);
}

double LevelProfile::mu(double t) const {
    if (t < 0.0) return 1.0;
    auto it = std::upper_bound(u_.begin(), u_.end(), t);
    return static_cast<double>(u_.end() - it) / static_cast<double>(u_.size());
}

double LevelProfile::mu_inverse(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("mu_inverse: s must lie in (0,1)");
    const std::size_t n = u_.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(s * static_cast<double>(n)));
    k = std::min(std::max<std::size_t>(k, 1), n);
    return u_[n - k];
}

double LevelProfile::integral_mu(double t_hat) const {
    double acc = 0.0;
    for (double v : u_) acc += std::min(v, t_hat);
    return acc / static_cast<double>(u_.size());
}

double LevelProfile::integral_mu_inverse(double s_hat) const {
    if (s_hat <= 0.0) return 0.0;
    const std::size_t n = u_.size();
    s_hat = std::min(s_hat, 1.0);
    // trapezoid over the empirical inverse: value at s_k = k/n is the k-th
    // largest sample; at s = 0 the inverse approaches T.
    const double ds = 1.0 / static_cast<double>(n);
    const std::size_t full = static_cast<std::size_t>(std::floor(s_hat * static_cast<double>(n)));
    double prev = T_;
    double acc = 0.0;
    for (std::size_t k = 1; k <= full; ++k) {
        double cur = u_[n - k];
        acc += 0.5 * (prev + cur) * ds;
        prev = cur;
    }
    double rest = s_hat - static_cast<double>(full) * ds;
    if (rest > 0.0 && full < n) {
        double cur = u_[n - full - 1];
        acc += 0.5 * (prev + cur) * rest;
    }
    return acc;
}

double LevelProfile::mean() const {
    double acc = 0.0;
    for (double v : u_) acc += v;
    return acc / static_cast<double>(u_.size());
}

LevelProfile::Crossing LevelProfile::crossing_points() const {
    const ExtremalProfile ex{d_, N_};
    const std::size_t n = u_.size();
    const std::size_t grid = std::min<std::size_t>(n, 1 << 16);

    Crossing out;
    double sup_dev = 0.0;
    double found_t = -1.0;  // largest grid t with mu >= mu0
    double above_t = T_;    // smallest grid t above it
    for (std::size_t g = 0; g < grid; ++g) {
        // quantile-spaced grid, scanned from the top
        std::size_t k = 1 + (g * n) / grid;  // rank from the top
        double t = u_[n - k];
        double m = static_cast<double>(k - 1) / static_cast<double>(n);
        double diff = m - ex.mu0(t);
        sup_dev = std::max(sup_dev, std::abs(diff));
        if (found_t < 0.0 && diff >= 0.0) found_t = t;
        if (found_t < 0.0) above_t = t;
    }
    out.sup_deviation = sup_dev;
    if (sup_dev <= 4.0 / std::sqrt(static_cast<double>(n)) || found_t < 0.0) {
        out.degenerate = true;
        return out;
    }
    // bisect the sign change of mu - mu0 inside (found_t, above_t)
    double lo = found_t, hi = above_t;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mu(mid) >= ex.mu0(mid))
            lo = mid;
        else
            hi = mid;
    }
    out.t_star = lo;
    out.s_star = ex.mu0(lo);  // the common measure mu(t*) = mu0(t*)
    return out;
}

LevelProfile::Deficits LevelProfile::deficit_integrals(double s_hat,
                                                       std::optional<double> t_hat) const {
    if (!(s_hat > 0.0 && s_hat <= 1.0))
        throw std::domain_error("deficit_integrals: s_hat must lie in (0,1]");
    const ExtremalProfile ex{d_, N_};
    Deficits out{};
    out.inverse_integral = ex.integral_mu0_inv(s_hat) - integral_mu_inverse(s_hat);
    const double th = t_hat.value_or(s_hat < 1.0 ? mu_inverse(s_hat) : 0.0);
    out.direct_integral = integral_mu(th) - ex.integral_mu0(th);
    return out;
}

LevelProfile::DiffIneqReport LevelProfile::check_differential_inequality(double omega_tilde,
                                                                         int grid_points) const {
    const ExtremalProfile ex{d_, N_};
    const std::size_t n = u_.size();
    DiffIneqReport rep;
    const double t_lo = omega_tilde < 1.0 ? mu_inverse(omega_tilde) : 0.0;
    const double t_hi = T_;
    if (!(t_hi > t_lo)) {
        rep.status = "inconclusive";
        return rep;
    }

    auto bound_at = [&](double m, double t) {
        return -(static_cast<double>(d_) / (N_ * t)) * std::pow(m, 1.0 - 1.0 / d_) *
               (1.0 - std::pow(m, 1.0 / d_));
    };

    for (int g = 0; g < grid_points; ++g) {
        DiffIneqPoint pt{};
        pt.t = t_lo + (g + 0.5) * (t_hi - t_lo) / grid_points;

        // bandwidth: 0.01 T or 5 local quantile spacings, whichever is larger
        auto it = std::lower_bound(u_.begin(), u_.end(), pt.t);
        std::size_t k = static_cast<std::size_t>(it - u_.begin());
        std::size_t m = 50;
        std::size_t klo = k > m ? k - m : 0;
        std::size_t khi = std::min(n - 1, k + m);
        double spacing = (khi > klo) ? (u_[khi] - u_[klo]) / static_cast<double>(khi - klo) : 0.0;
        double h = std::max(0.01 * T_, 5.0 * spacing);

        double mu_m = mu(pt.t - h);
        double mu_p = mu(pt.t + h);
        double mu_c = mu(pt.t);
        pt.slope = (mu_p - mu_m) / (2.0 * h);
        pt.bound = bound_at(mu_c, pt.t);

        double p_window = mu_m - mu_p;
        double count_window = p_window * static_cast<double>(n);
        if (count_window < 25.0) {
            pt.inconclusive = true;
            ++rep.inconclusive;
            rep.points.push_back(pt);
            continue;
        }
        double sd_slope = std::sqrt(p_window * (1.0 - p_window) / static_cast<double>(n)) / (2.0 * h);
        // sensitivity of the bound to mu noise, by central difference
        double dm = 1e-6;
        double db = std::abs(bound_at(std::min(1.0, mu_c + dm), pt.t) -
                             bound_at(std::max(0.0, mu_c - dm), pt.t)) /
                    (2.0 * dm);
        double sd_mu = std::sqrt(mu_c * (1.0 - mu_c) / static_cast<double>(n));
        pt.noise = std::sqrt(sd_slope * sd_slope + db * db * sd_mu * sd_mu);
        pt.violation = pt.slope > pt.bound + 3.0 * pt.noise;
        if (pt.violation) ++rep.violations;
        rep.points.push_back(pt);
    }
    if (rep.violations > 0)
        rep.status = "violations";
    else if (rep.inconclusive * 2 > static_cast<int>(rep.points.size()))
        rep.status = "inconclusive";
    else
        rep.status = "ok";
    return rep;
}

void LevelProfile::export_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("export_csv: cannot open " + path);
    const ExtremalProfile ex{d_, N_};
    std::fprintf(f, "t,mu_empirical,mu0,diff\n");
    const int grid = 1000;
    const double tmax = std::min(1.0, T_);
    for (int i = 0; i < grid; ++i) {
        double t = tmax * static_cast<double>(i) / (grid - 1);
        double m = mu(t);
        double m0 = ex.mu0(t);
        std::fprintf(f, "%.12g,%.12g,%.12g,%.12g\n", t, m, m0, m - m0);
    }
    std::fclose(f);
}

double default_omega_tilde(int d) { return d == 1 ? 1.0 : 0.3; }

}  // namespace wehrl
