#pragma once

#include <array>

#include "diqkd/quantum.hpp"

namespace diqkd {

// Two measurement directions per side: alice = (theta1, theta2), bob = (phi1, phi2).
struct BasisConfig {
    std::array<MeasurementAngle, 2> alice;
    std::array<MeasurementAngle, 2> bob;
};

// The four signed CHSH terms sign(3.5-i-j) E(A_i, B_j), stored row-major
// ((1,1),(1,2),(2,1),(2,2)), their sum, and whether every term equals s/4
// within `tolerance`.
struct ChshReport {
    std::array<double, 4> terms;
    double s_value;
    bool symmetric;
    double tolerance;
};

// (w0 - w3) cos(a - b) + (w1 - w2) cos(a + b); agrees with correlator_trace.
double correlator_closed_form(const BellDiagonalState& state, MeasurementAngle a,
                              MeasurementAngle b);

ChshReport chsh_value(const BellDiagonalState& state, const BasisConfig& cfg,
                      double symmetry_tol = 1e-9);

// Pairwise-difference residuals (t1-t2, t2-t3, t3-t4, t4-t1) of the four
// signed terms; all vanish exactly when the configuration is symmetric.
std::array<double, 4> check_symmetry_equations(const BellDiagonalState& state,
                                               const BasisConfig& cfg);

// The two one-parameter families of fully symmetric configurations anchored
// at theta1:
//   primary: theta2 = theta1 + pi/2, phi1 = theta1 + pi/4, phi2 = theta1 - pi/4
//   mirror:  theta2 = theta1 - pi/2, phi1 = theta1 - pi/4, phi2 = theta1 + pi/4
// Requires w(Phi-) == w(Psi+) within 1e-9; throws AsymmetricState otherwise.
// `violates_classical_bound` reports whether the symmetric value exceeds 2.
struct SymmetricAngles {
    BasisConfig primary;
    BasisConfig mirror;
    double s_value;
    bool violates_classical_bound;
};

SymmetricAngles solve_symmetric_angles(const BellDiagonalState& state, MeasurementAngle theta1);

// Global maximum of the CHSH polynomial over the four in-plane angles: coarse
// pi/60 grid followed by exact coordinate-wise updates.
struct ChshMaximum {
    double s_max;
    BasisConfig config;
};

ChshMaximum maximize_chsh(const BellDiagonalState& state);

// QBER for matched-basis measurement with the given misalignment angle:
// (1 - (w0 - w3) cos(misalignment)) / 2, which at zero misalignment reduces
// to w1 + w3. Requires w(Phi-) == w(Psi+) within 1e-9.
double qber(const BellDiagonalState& state, MeasurementAngle misalignment);

}  // namespace diqkd
