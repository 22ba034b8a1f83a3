#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "diqkd/complex_matrix.hpp"

namespace diqkd {

// Measurement direction in the x-z plane, measured from +z toward +x and
// normalized to (-pi, pi]. theta = 0 is sigma_z, theta = pi/2 is sigma_x.
class MeasurementAngle {
public:
    MeasurementAngle() = default;
    explicit MeasurementAngle(double radians);
    double radians() const { return radians_; }

private:
    double radians_ = 0.0;
};

enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// Two-qubit state diagonal in the Bell basis, described by the four weights
// (w(Phi+), w(Phi-), w(Psi+), w(Psi-)). Weights live in [0,1] and sum to 1
// within 1e-12.
class BellDiagonalState {
public:
    BellDiagonalState(double w_phi_plus, double w_phi_minus, double w_psi_plus,
                      double w_psi_minus);

    double w_phi_plus() const { return w_[0]; }
    double w_phi_minus() const { return w_[1]; }
    double w_psi_plus() const { return w_[2]; }
    double w_psi_minus() const { return w_[3]; }
    const std::array<double, 4>& weights() const { return w_; }

private:
    std::array<double, 4> w_{1.0, 0.0, 0.0, 0.0};
};

// Hermitian, unit-trace matrix. The constructor enforces hermiticity (1e-12)
// and trace (1e-12); positivity (eigenvalues >= -1e-10) is enforced wherever
// a spectrum is actually computed.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }

private:
    ComplexMatrix m_;
};

// Unitary whose columns are the Bell vectors (Phi+, Phi-, Psi+, Psi-) in the
// computational basis |00>,|01>,|10>,|11>.
const ComplexMatrix& bell_basis_matrix();

// Rank-1 projector onto the named Bell vector.
DensityMatrix bell_state(BellLabel label);

// Convex mixture of the four Bell projectors with the state's weights.
DensityMatrix to_density(const BellDiagonalState& state);

// cos(theta) sigma_z + sin(theta) sigma_x; eigenvalues exactly +-1.
ComplexMatrix observable(MeasurementAngle angle);

// Tr[(A(a) (x) B(b)) rho] for a 4x4 density matrix; real, in [-1, 1].
double correlator_trace(const DensityMatrix& rho, MeasurementAngle a, MeasurementAngle b);

// Born-rule probabilities over joint outcomes, ordered (+,+), (+,-), (-,+), (-,-).
struct JointDistribution {
    std::array<double, 4> prob{};
    double pp() const { return prob[0]; }
    double pm() const { return prob[1]; }
    double mp() const { return prob[2]; }
    double mm() const { return prob[3]; }
};

JointDistribution joint_outcome_distribution(const BellDiagonalState& state, MeasurementAngle a,
                                             MeasurementAngle b);

struct OutcomePair {
    int alice;  // +1 or -1
    int bob;
};

// One draw from joint_outcome_distribution; consumes exactly one value from rng.
OutcomePair sample_outcome(const BellDiagonalState& state, MeasurementAngle a, MeasurementAngle b,
                           std::mt19937_64& rng);

// -sum lambda log2 lambda over the spectrum, with 0 log 0 := 0. Eigenvalues in
// (-1e-10, 0) are clamped to zero; anything more negative throws.
double von_neumann_entropy(const DensityMatrix& rho);

// Shannon entropy of the four weights; equals von_neumann_entropy(to_density(s)).
double bell_diagonal_entropy(const BellDiagonalState& state);

// Reduced density matrix over the kept factors. `dims` are the tensor factor
// dimensions (product must equal rho.dim()); `keep` lists factor indices to
// retain, ascending.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// Post-measurement mixture sum_i P_i rho P_i for a complete orthogonal
// projector set (sum P_i = I within 1e-10, P_i P_j = delta_ij P_i).
DensityMatrix project_and_mix(const DensityMatrix& rho, const std::vector<ComplexMatrix>& projectors);

struct BellDiagonalization {
    ComplexMatrix u;         // unitary with U^dag rho U Bell-diagonal
    BellDiagonalState state; // rho's eigenvalues, sorted descending
};

// Finds U such that U^dag rho U is diagonal in the Bell basis; the returned
// weights are rho's eigenvalues in descending order (degenerate ties broken
// deterministically). Entropy is preserved.
BellDiagonalization diagonalize_on_bell_basis(const DensityMatrix& rho);

}  // namespace diqkd
