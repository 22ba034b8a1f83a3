#include "diqkd/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "diqkd/random.hpp"

namespace diqkd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normalize_angle(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("angle must be finite");
    double r = std::fmod(x + kPi, 2.0 * kPi);
    if (r <= 0.0) r += 2.0 * kPi;
    return r - kPi;  // (-pi, pi]
}

double shannon_bits(const double* p, std::size_t n) {
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = p[i];
        if (x < -1e-10) throw std::invalid_argument("negative probability beyond tolerance");
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h < 0.0 ? 0.0 : h;
}

}  // namespace

MeasurementAngle::MeasurementAngle(double radians) : radians_(normalize_angle(radians)) {}

BellDiagonalState::BellDiagonalState(double w_phi_plus, double w_phi_minus, double w_psi_plus,
                                     double w_psi_minus)
    : w_{w_phi_plus, w_phi_minus, w_psi_plus, w_psi_minus} {
    double sum = 0.0;
    for (double& w : w_) {
        if (!(w >= -1e-12 && w <= 1.0 + 1e-12))
            throw std::invalid_argument("Bell-diagonal weight outside [0, 1]");
        if (w < 0.0) w = 0.0;
        if (w > 1.0) w = 1.0;
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("Bell-diagonal weights must sum to 1, got " + std::to_string(sum));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.dim() == 0) throw std::invalid_argument("empty density matrix");
    if (!m_.is_hermitian(1e-12)) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > 1e-12)
        throw std::invalid_argument("density matrix trace is not 1");
}

const ComplexMatrix& bell_basis_matrix() {
    static const ComplexMatrix b = [] {
        const double s = 1.0 / std::sqrt(2.0);
        ComplexMatrix m(4);
        // columns: Phi+, Phi-, Psi+, Psi-
        m.at(0, 0) = s;  m.at(3, 0) = s;
        m.at(0, 1) = s;  m.at(3, 1) = -s;
        m.at(1, 2) = s;  m.at(2, 2) = s;
        m.at(1, 3) = s;  m.at(2, 3) = -s;
        return m;
    }();
    return b;
}

namespace {

const ComplexMatrix& bell_projector(std::size_t k) {
    static const std::array<ComplexMatrix, 4> projs = [] {
        std::array<ComplexMatrix, 4> out{};
        const ComplexMatrix& b = bell_basis_matrix();
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<Complex> v(4);
            for (std::size_t i = 0; i < 4; ++i) v[i] = b.at(i, k);
            out[k] = outer(v);
        }
        return out;
    }();
    return projs[k];
}

}  // namespace

DensityMatrix bell_state(BellLabel label) {
    return DensityMatrix(bell_projector(static_cast<std::size_t>(label)));
}

DensityMatrix to_density(const BellDiagonalState& state) {
    ComplexMatrix m(4);
    for (std::size_t k = 0; k < 4; ++k) {
        const double w = state.weights()[k];
        if (w == 0.0) continue;
        const ComplexMatrix& p = bell_projector(k);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m.at(i, j) += w * p.at(i, j);
    }
    return DensityMatrix(std::move(m));
}

ComplexMatrix observable(MeasurementAngle angle) {
    const double c = std::cos(angle.radians());
    const double s = std::sin(angle.radians());
    ComplexMatrix m(2);
    m.at(0, 0) = c;
    m.at(0, 1) = s;
    m.at(1, 0) = s;
    m.at(1, 1) = -c;
    return m;
}

double correlator_trace(const DensityMatrix& rho, MeasurementAngle a, MeasurementAngle b) {
    if (rho.dim() != 4) throw std::invalid_argument("correlator_trace expects a 4x4 density matrix");
    const ComplexMatrix ab = kron(observable(a), observable(b));
    Complex t = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) t += ab.at(i, j) * rho.matrix().at(j, i);
    return t.real();
}

JointDistribution joint_outcome_distribution(const BellDiagonalState& state, MeasurementAngle a,
                                             MeasurementAngle b) {
    // Expand Pi_a^s (x) Pi_b^t = (I + s A)/2 (x) (I + t B)/2; the trace against
    // rho leaves the two marginals and the correlator.
    const DensityMatrix rho = to_density(state);
    const ComplexMatrix oa = observable(a);
    const ComplexMatrix ob = observable(b);
    const ComplexMatrix i2 = ComplexMatrix::identity(2);

    const auto trace_with = [&rho](const ComplexMatrix& m) {
        Complex t = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) t += m.at(i, j) * rho.matrix().at(j, i);
        return t.real();
    };
    const double ma = trace_with(kron(oa, i2));
    const double mb = trace_with(kron(i2, ob));
    const double e = trace_with(kron(oa, ob));

    JointDistribution d;
    const int signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    for (std::size_t k = 0; k < 4; ++k) {
        const double s = signs[k][0], t = signs[k][1];
        double p = (1.0 + s * ma + t * mb + s * t * e) / 4.0;
        if (p < 0.0) {
            if (p < -1e-12) throw std::runtime_error("negative Born probability");
            p = 0.0;
        }
        d.prob[k] = p;
    }
    return d;
}

OutcomePair sample_outcome(const BellDiagonalState& state, MeasurementAngle a, MeasurementAngle b,
                           std::mt19937_64& rng) {
    const JointDistribution d = joint_outcome_distribution(state, a, b);
    const double u = uniform_double(rng);
    double acc = 0.0;
    std::size_t pick = 3;
    for (std::size_t k = 0; k < 4; ++k) {
        acc += d.prob[k];
        if (u < acc) {
            pick = k;
            break;
        }
    }
    static const OutcomePair outcomes[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    return outcomes[pick];
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const EigenSystem eig = hermitian_eigensystem(rho.matrix());
    return shannon_bits(eig.values.data(), eig.values.size());
}

double bell_diagonal_entropy(const BellDiagonalState& state) {
    return shannon_bits(state.weights().data(), 4);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    const std::size_t m = dims.size();
    std::size_t prod = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw std::invalid_argument("factor dimension must be positive");
        prod *= d;
    }
    if (prod != rho.dim()) throw std::invalid_argument("factor dimensions do not match the matrix");
    if (keep.empty()) throw std::invalid_argument("must keep at least one factor");
    std::vector<bool> kept(m, false);
    for (std::size_t k : keep) {
        if (k >= m) throw std::invalid_argument("keep index out of range");
        if (kept[k]) throw std::invalid_argument("duplicate keep index");
        kept[k] = true;
    }

    std::vector<std::size_t> stride(m, 1);
    for (std::size_t i = m; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    std::vector<std::size_t> keep_idx, trace_idx;
    for (std::size_t i = 0; i < m; ++i) (kept[i] ? keep_idx : trace_idx).push_back(i);

    std::size_t dk = 1, dt = 1;
    for (std::size_t i : keep_idx) dk *= dims[i];
    for (std::size_t i : trace_idx) dt *= dims[i];

    // Offset of a multi-index over the listed factors, decoded from a flat index.
    const auto offset = [&](const std::vector<std::size_t>& factors, std::size_t flat) {
        std::size_t off = 0;
        for (std::size_t i = factors.size(); i-- > 0;) {
            const std::size_t f = factors[i];
            off += (flat % dims[f]) * stride[f];
            flat /= dims[f];
        }
        return off;
    };

    ComplexMatrix out(dk);
    for (std::size_t r = 0; r < dk; ++r) {
        const std::size_t ro = offset(keep_idx, r);
        for (std::size_t c = 0; c < dk; ++c) {
            const std::size_t co = offset(keep_idx, c);
            Complex acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                const std::size_t to = offset(trace_idx, t);
                acc += rho.matrix().at(ro + to, co + to);
            }
            out.at(r, c) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix project_and_mix(const DensityMatrix& rho, const std::vector<ComplexMatrix>& projectors) {
    if (projectors.empty()) throw std::invalid_argument("empty projector set");
    const std::size_t n = rho.dim();
    ComplexMatrix sum(n);
    for (const ComplexMatrix& p : projectors) {
        if (p.dim() != n) throw std::invalid_argument("projector dimension mismatch");
        if (!p.is_hermitian(1e-10)) throw std::invalid_argument("projector is not Hermitian");
        sum += p;
    }
    if ((sum - ComplexMatrix::identity(n)).max_abs() > 1e-10)
        throw std::invalid_argument("projectors do not resolve the identity");
    for (std::size_t i = 0; i < projectors.size(); ++i)
        for (std::size_t j = 0; j < projectors.size(); ++j) {
            const ComplexMatrix pipj = projectors[i] * projectors[j];
            const ComplexMatrix want = (i == j) ? projectors[i] : ComplexMatrix(n);
            if ((pipj - want).max_abs() > 1e-10)
                throw std::invalid_argument("projector set is not orthogonal");
        }

    ComplexMatrix mixed(n);
    for (const ComplexMatrix& p : projectors) mixed += p * rho.matrix() * p;
    return DensityMatrix(std::move(mixed));
}

BellDiagonalization diagonalize_on_bell_basis(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("expected a two-qubit (4x4) density matrix");
    const EigenSystem eig = hermitian_eigensystem(rho.matrix());

    std::array<double, 4> w{};
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        double lam = eig.values[k];
        if (lam < -1e-10) throw std::invalid_argument("density matrix is not positive semidefinite");
        w[k] = lam < 0.0 ? 0.0 : lam;
        sum += w[k];
    }
    for (double& x : w) x /= sum;  // clamping can leave the sum off by ~1e-10

    BellDiagonalization out{eig.vectors * bell_basis_matrix().dagger(),
                            BellDiagonalState(w[0], w[1], w[2], w[3])};
    return out;
}

}  // namespace diqkd
