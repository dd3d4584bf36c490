#include "alh/rng.hpp"

#include <cmath>

namespace alh {

double Rng::normal() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    // Box-Muller on (0,1] x [0,1) to avoid log(0).
    double u1 = 1.0 - unit();
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
}

}  // namespace alh
