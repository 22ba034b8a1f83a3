#pragma once

// Helpers shared by the unit suites and the acceptance runner.

#include <cmath>
#include <random>

#include "diqkd/chsh.hpp"
#include "diqkd/quantum.hpp"
#include "diqkd/random.hpp"

namespace diqkd::testsupport {

// A fully symmetric CHSH configuration (all four signed terms equal) for a
// state with w(Phi-) != w(Psi+). Given the ratio r = (w1-w2)/(w0-w3) != 0 and
// the anchor theta1, the equal-terms system solves in closed form:
//   s  = (phi1+phi2)/2   from  tan s = tan(theta1) (1-r)/(1+r)
//   theta2               from  cos(theta2-s) + r cos(theta2+s) = 0
//   phi1                 from  sin(phi1-u) = r sin(phi1+u),  u = (theta1+theta2)/2
// and the extremal feasible state puts w3 = 0, w0 = 1/(1+|r|).
struct SymmetricAsymmetricConfig {
    BasisConfig config;
    BellDiagonalState state;
};

inline SymmetricAsymmetricConfig symmetric_config_with_ratio(double r, double theta1) {
    const double s = std::atan(std::tan(theta1) * (1.0 - r) / (1.0 + r));
    const double theta2 = std::atan2(-(1.0 + r) * std::cos(s), (1.0 - r) * std::sin(s));
    const double u = (theta1 + theta2) / 2.0;
    const double phi1 = std::atan2(std::sin(u) * (1.0 + r), std::cos(u) * (1.0 - r));
    const double phi2 = 2.0 * s - phi1;

    const double c1 = 1.0 / (1.0 + std::abs(r));
    const double c2 = r * c1;
    const double w1 = (1.0 - c1 + c2) / 2.0;
    const double w2 = (1.0 - c1 - c2) / 2.0;

    return {BasisConfig{{MeasurementAngle(theta1), MeasurementAngle(theta2)},
                        {MeasurementAngle(phi1), MeasurementAngle(phi2)}},
            BellDiagonalState(c1, w1, w2, 0.0)};
}

// Random state with w(Phi-) == w(Psi+): q uniform in [0,1), p3 uniform in [0, q/2].
inline BellDiagonalState random_symmetric_state(std::mt19937_64& rng) {
    const double q = 0.999 * uniform_double(rng);
    const double p3 = (q / 2.0) * uniform_double(rng);
    const double p1 = q / 2.0 - p3;
    return BellDiagonalState(1.0 - q + p3, p1, p1, p3);
}

}  // namespace diqkd::testsupport
