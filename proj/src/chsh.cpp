#include "diqkd/chsh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "diqkd/errors.hpp"

namespace diqkd {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PlaneCoefficients {
    double tz;  // <sigma_z (x) sigma_z>
    double tx;  // <sigma_x (x) sigma_x>
};

PlaneCoefficients plane_coefficients(const BellDiagonalState& s) {
    const auto& w = s.weights();
    return {w[0] + w[1] - w[2] - w[3], w[0] - w[1] + w[2] - w[3]};
}

void require_symmetric_weights(const BellDiagonalState& state, const char* op) {
    const double gap = std::abs(state.w_phi_minus() - state.w_psi_plus());
    if (gap > 1e-9)
        throw AsymmetricState(std::string(op) + ": requires w(Phi-) == w(Psi+), |difference| = " +
                              std::to_string(gap));
}

}  // namespace

double correlator_closed_form(const BellDiagonalState& state, MeasurementAngle a,
                              MeasurementAngle b) {
    const auto& w = state.weights();
    return (w[0] - w[3]) * std::cos(a.radians() - b.radians()) +
           (w[1] - w[2]) * std::cos(a.radians() + b.radians());
}

ChshReport chsh_value(const BellDiagonalState& state, const BasisConfig& cfg, double symmetry_tol) {
    ChshReport r{};
    r.tolerance = symmetry_tol;
    r.terms[0] = correlator_closed_form(state, cfg.alice[0], cfg.bob[0]);
    r.terms[1] = correlator_closed_form(state, cfg.alice[0], cfg.bob[1]);
    r.terms[2] = correlator_closed_form(state, cfg.alice[1], cfg.bob[0]);
    r.terms[3] = -correlator_closed_form(state, cfg.alice[1], cfg.bob[1]);
    r.s_value = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
    double spread = 0.0;
    for (double t : r.terms) spread = std::max(spread, std::abs(t - r.s_value / 4.0));
    r.symmetric = spread <= symmetry_tol;
    return r;
}

std::array<double, 4> check_symmetry_equations(const BellDiagonalState& state,
                                               const BasisConfig& cfg) {
    const ChshReport r = chsh_value(state, cfg);
    return {r.terms[0] - r.terms[1], r.terms[1] - r.terms[2], r.terms[2] - r.terms[3],
            r.terms[3] - r.terms[0]};
}

SymmetricAngles solve_symmetric_angles(const BellDiagonalState& state, MeasurementAngle theta1) {
    require_symmetric_weights(state, "solve_symmetric_angles");
    const double t1 = theta1.radians();

    SymmetricAngles out{};
    out.primary = BasisConfig{{theta1, MeasurementAngle(t1 + kPi / 2.0)},
                              {MeasurementAngle(t1 + kPi / 4.0), MeasurementAngle(t1 - kPi / 4.0)}};
    out.mirror = BasisConfig{{theta1, MeasurementAngle(t1 - kPi / 2.0)},
                             {MeasurementAngle(t1 - kPi / 4.0), MeasurementAngle(t1 + kPi / 4.0)}};
    out.s_value = chsh_value(state, out.primary).s_value;
    out.violates_classical_bound = out.s_value > 2.0;
    return out;
}

ChshMaximum maximize_chsh(const BellDiagonalState& state) {
    const auto [tz, tx] = plane_coefficients(state);

    // E(theta, phi) = tz cos(theta)cos(phi) + tx sin(theta)sin(phi), so the
    // CHSH sum is linear in (cos, sin) of each angle separately: a coarse grid
    // locates the basin, then each coordinate is optimized in closed form.
    constexpr int kGrid = 120;  // step pi/60 over (-pi, pi]
    std::array<double, kGrid> ang, ca, sa;
    for (int i = 0; i < kGrid; ++i) {
        ang[i] = -kPi + (i + 1) * (2.0 * kPi / kGrid);
        ca[i] = std::cos(ang[i]);
        sa[i] = std::sin(ang[i]);
    }
    std::vector<double> e(static_cast<std::size_t>(kGrid) * kGrid);
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j)
            e[static_cast<std::size_t>(i) * kGrid + j] = tz * ca[i] * ca[j] + tx * sa[i] * sa[j];

    double best = -1e300;
    int b1 = 0, b2 = 0, bp1 = 0, bp2 = 0;
    for (int i1 = 0; i1 < kGrid; ++i1)
        for (int i2 = 0; i2 < kGrid; ++i2) {
            const double* r1 = &e[static_cast<std::size_t>(i1) * kGrid];
            const double* r2 = &e[static_cast<std::size_t>(i2) * kGrid];
            double m1 = -1e300, m2 = -1e300;
            int j1 = 0, j2 = 0;
            for (int j = 0; j < kGrid; ++j) {
                const double plus = r1[j] + r2[j];
                const double minus = r1[j] - r2[j];
                if (plus > m1) { m1 = plus; j1 = j; }
                if (minus > m2) { m2 = minus; j2 = j; }
            }
            if (m1 + m2 > best) {
                best = m1 + m2;
                b1 = i1; b2 = i2; bp1 = j1; bp2 = j2;
            }
        }

    double th1 = ang[b1], th2 = ang[b2], ph1 = ang[bp1], ph2 = ang[bp2];
    const auto term_sum = [&](double a1, double a2, double f1, double f2) {
        const auto ee = [&](double t, double f) {
            return tz * std::cos(t) * std::cos(f) + tx * std::sin(t) * std::sin(f);
        };
        return ee(a1, f1) + ee(a1, f2) + ee(a2, f1) - ee(a2, f2);
    };
    const auto axis_opt = [&](double a, double b, double fallback) {
        // maximize a cos(x) + b sin(x)
        if (a == 0.0 && b == 0.0) return fallback;
        return std::atan2(b, a);
    };

    double s = term_sum(th1, th2, ph1, ph2);
    for (int iter = 0; iter < 500; ++iter) {
        th1 = axis_opt(tz * (std::cos(ph1) + std::cos(ph2)), tx * (std::sin(ph1) + std::sin(ph2)), th1);
        th2 = axis_opt(tz * (std::cos(ph1) - std::cos(ph2)), tx * (std::sin(ph1) - std::sin(ph2)), th2);
        ph1 = axis_opt(tz * (std::cos(th1) + std::cos(th2)), tx * (std::sin(th1) + std::sin(th2)), ph1);
        ph2 = axis_opt(tz * (std::cos(th1) - std::cos(th2)), tx * (std::sin(th1) - std::sin(th2)), ph2);
        const double s_new = term_sum(th1, th2, ph1, ph2);
        if (s_new - s <= 1e-13) { s = std::max(s, s_new); break; }
        s = s_new;
    }

    ChshMaximum out{};
    out.config = BasisConfig{{MeasurementAngle(th1), MeasurementAngle(th2)},
                             {MeasurementAngle(ph1), MeasurementAngle(ph2)}};
    out.s_max = chsh_value(state, out.config).s_value;
    return out;
}

double qber(const BellDiagonalState& state, MeasurementAngle misalignment) {
    require_symmetric_weights(state, "qber");
    const auto& w = state.weights();
    if (misalignment.radians() == 0.0) return w[1] + w[3];
    return (1.0 - (w[0] - w[3]) * std::cos(misalignment.radians())) / 2.0;
}

}  // namespace diqkd
