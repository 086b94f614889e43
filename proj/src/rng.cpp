#include "rng.hpp"

#include <cmath>

namespace wehrl {

double CounterRng::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

void CounterRng::fill_normals(std::span<double> out) {
    for (double& x : out) x = next_normal();
}

}  // namespace wehrl
