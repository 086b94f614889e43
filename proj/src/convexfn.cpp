#include "convexfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wehrl {

ConvexFn::ConvexFn(Tag tag, double param, std::function<double(double)> f,
                   std::function<double(double)> fp, std::string name)
    : tag_(tag), param_(param), f_(std::move(f)), fp_(std::move(fp)), name_(std::move(name)) {
    check_convexity();
}

void ConvexFn::check_convexity() const {
    const int n = 1001;
    for (int i = 0; i + 2 < n; i += 2) {
        double a = static_cast<double>(i) / (n - 1);
        double b = static_cast<double>(i + 2) / (n - 1);
        double mid = f_(0.5 * (a + b));
        if (mid > 0.5 * (f_(a) + f_(b)) + 1e-12)
            throw std::domain_error("ConvexFn: midpoint convexity fails near t = " +
                                    std::to_string(0.5 * (a + b)));
    }
}

ConvexFn ConvexFn::linear() {
    return ConvexFn(Tag::Linear, 0.0, [](double t) { return t; }, [](double) { return 1.0; },
                    "linear");
}

ConvexFn ConvexFn::xlogx() {
    return ConvexFn(
        Tag::XLogX, 0.0, [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; },
        [](double t) {
            return t > 0.0 ? std::log(t) + 1.0 : -std::numeric_limits<double>::infinity();
        },
        "xlogx");
}

ConvexFn ConvexFn::power(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("ConvexFn::power: need p > 1");
    return ConvexFn(
        Tag::Power, p, [p](double t) { return std::pow(t, p); },
        [p](double t) { return t > 0.0 ? p * std::pow(t, p - 1.0) : 0.0; },
        "power(" + std::to_string(p) + ")");
}

ConvexFn ConvexFn::hinge(double t0) {
    if (!(t0 > 0.0 && t0 < 1.0)) throw std::invalid_argument("ConvexFn::hinge: need t0 in (0,1)");
    return ConvexFn(
        Tag::Hinge, t0, [t0](double t) { return t > t0 ? t - t0 : 0.0; },
        [t0](double t) { return t > t0 ? 1.0 : 0.0; }, "hinge(" + std::to_string(t0) + ")");
}

ConvexFn ConvexFn::custom(std::function<double(double)> f,
                          std::function<double(double)> left_derivative, std::string name) {
    return ConvexFn(Tag::Custom, 0.0, std::move(f), std::move(left_derivative), std::move(name));
}

ConvexFn ConvexFn::parse(const std::string& spec) {
    if (spec == "linear") return linear();
    if (spec == "xlogx") return xlogx();
    if (spec.rfind("power:", 0) == 0) return power(std::stod(spec.substr(6)));
    if (spec.rfind("hinge:", 0) == 0) return hinge(std::stod(spec.substr(6)));
    throw std::invalid_argument("ConvexFn: unknown spec '" + spec +
                                "' (expected linear|xlogx|power:P|hinge:T0)");
}

}  // namespace wehrl
