#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "diqkd/chsh.hpp"
#include "diqkd/quantum.hpp"
#include "diqkd/random.hpp"
#include "diqkd/security.hpp"
#include "diqkd/verify.hpp"
#include "test_support.hpp"

using namespace diqkd;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kRoot2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("measurement angles normalize to (-pi, pi]") {
    CHECK(MeasurementAngle(kPi).radians() == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(MeasurementAngle(-kPi).radians() == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(MeasurementAngle(3.0 * kPi).radians() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(MeasurementAngle(2.0 * kPi).radians() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(MeasurementAngle(std::nan("")), std::invalid_argument);
}

TEST_CASE("bell_state projectors have the expected entries and rank") {
    const DensityMatrix phi_plus = bell_state(BellLabel::PhiPlus);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
            CHECK(std::abs(phi_plus.matrix().at(i, j) - (corner ? 0.5 : 0.0)) <= 1e-15);
        }

    const DensityMatrix psi_minus = bell_state(BellLabel::PsiMinus);
    CHECK(psi_minus.matrix().at(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psi_minus.matrix().at(2, 2).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psi_minus.matrix().at(1, 2).real() == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(psi_minus.matrix().at(2, 1).real() == doctest::Approx(-0.5).epsilon(1e-15));

    for (BellLabel label : {BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus,
                            BellLabel::PsiMinus}) {
        const EigenSystem eig = hermitian_eigensystem(bell_state(label).matrix());
        CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(eig.values[k]) <= 1e-12);
    }
}

TEST_CASE("to_density mixes the Bell projectors") {
    const DensityMatrix pure = to_density(BellDiagonalState(1, 0, 0, 0));
    const DensityMatrix phi_plus = bell_state(BellLabel::PhiPlus);
    CHECK((pure.matrix() - phi_plus.matrix()).max_abs() <= 1e-15);

    const DensityMatrix mixed = to_density(BellDiagonalState(0.25, 0.25, 0.25, 0.25));
    CHECK((mixed.matrix() - Complex(0.25) * ComplexMatrix::identity(4)).max_abs() <= 1e-15);

    const EigenSystem eig =
        hermitian_eigensystem(to_density(BellDiagonalState(0.9, 0.05, 0.03, 0.02)).matrix());
    CHECK(eig.values[0] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(eig.values[2] == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(eig.values[3] == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("bell-diagonal weights are validated") {
    CHECK_THROWS_AS(BellDiagonalState(0.5, 0.5, 0.5, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(BellDiagonalState(0.5, 0.4, 0.2, 0.0), std::invalid_argument);
}

TEST_CASE("observable covers the axis and diagonal cases") {
    const ComplexMatrix z = observable(MeasurementAngle(0.0));
    CHECK(z.at(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z.at(1, 1).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(z.at(0, 1)) <= 1e-15);

    const ComplexMatrix x = observable(MeasurementAngle(kPi / 2.0));
    CHECK(x.at(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(x.at(0, 0)) <= 1e-15);

    const ComplexMatrix diag = observable(MeasurementAngle(kPi / 4.0));
    CHECK(diag.at(0, 0).real() == doctest::Approx(1.0 / kRoot2).epsilon(1e-15));
    CHECK(diag.at(0, 1).real() == doctest::Approx(1.0 / kRoot2).epsilon(1e-15));

    std::mt19937_64 rng(11);
    for (int t = 0; t < 25; ++t) {
        const EigenSystem eig =
            hermitian_eigensystem(observable(MeasurementAngle(uniform_double(rng) * 6.0 - 3.0)));
        CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eig.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("correlator_trace on pure Bell states") {
    CHECK(correlator_trace(bell_state(BellLabel::PhiPlus), MeasurementAngle(0), MeasurementAngle(0)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(correlator_trace(bell_state(BellLabel::PsiMinus), MeasurementAngle(kPi / 3.0),
                           MeasurementAngle(kPi / 3.0)) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(
        correlator_trace(DensityMatrix(Complex(0.5) * ComplexMatrix::identity(2)),
                         MeasurementAngle(0), MeasurementAngle(0)),
        std::invalid_argument);
}

TEST_CASE("correlator_trace agrees with the closed form on the optimal state") {
    const double q = 0.1;
    const BellDiagonalState s(1 - q + q * q / 4, q / 2 - q * q / 4, q / 2 - q * q / 4, q * q / 4);
    const MeasurementAngle a(0.0), b(kPi / 4.0);
    CHECK(std::abs(correlator_trace(to_density(s), a, b) - correlator_closed_form(s, a, b)) <= 1e-12);
    CHECK(correlator_trace(to_density(s), a, b) == doctest::Approx(0.9 / kRoot2).epsilon(1e-12));
}

TEST_CASE("joint_outcome_distribution matches the Born rule structure") {
    const JointDistribution perfect =
        joint_outcome_distribution(BellDiagonalState(1, 0, 0, 0), MeasurementAngle(0), MeasurementAngle(0));
    CHECK(perfect.pp() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(perfect.mm() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(perfect.pm() <= 1e-14);
    CHECK(perfect.mp() <= 1e-14);

    const JointDistribution flat = joint_outcome_distribution(
        BellDiagonalState(0.25, 0.25, 0.25, 0.25), MeasurementAngle(0.3), MeasurementAngle(-1.1));
    for (double p : flat.prob) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));

    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const BellDiagonalState s = random_bell_diagonal(rng);
        const MeasurementAngle a(uniform_double(rng) * 6 - 3), b(uniform_double(rng) * 6 - 3);
        const JointDistribution d = joint_outcome_distribution(s, a, b);
        const double total = d.pp() + d.pm() + d.mp() + d.mm();
        CHECK(std::abs(total - 1.0) <= 1e-12);
        const double corr = d.pp() + d.mm() - d.pm() - d.mp();
        CHECK(std::abs(corr - correlator_trace(to_density(s), a, b)) <= 1e-12);
        // Bell-diagonal marginals are unbiased for any in-plane directions
        CHECK(std::abs(d.pp() + d.pm() - 0.5) <= 1e-12);
        CHECK(std::abs(d.pp() + d.mp() - 0.5) <= 1e-12);
    }
}

TEST_CASE("sample_outcome is deterministic and matches the distribution") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 500; ++t) {
        const OutcomePair o = sample_outcome(BellDiagonalState(1, 0, 0, 0), MeasurementAngle(0),
                                             MeasurementAngle(0), rng);
        CHECK(o.alice == o.bob);
    }
    for (int t = 0; t < 500; ++t) {
        const OutcomePair o = sample_outcome(BellDiagonalState(0, 0, 0, 1), MeasurementAngle(kPi / 3),
                                             MeasurementAngle(kPi / 3), rng);
        CHECK(o.alice == -o.bob);
    }

    std::mt19937_64 r1(7), r2(7);
    for (int t = 0; t < 100; ++t) {
        const OutcomePair a = sample_outcome(BellDiagonalState(0.7, 0.1, 0.1, 0.1),
                                             MeasurementAngle(0.4), MeasurementAngle(-0.2), r1);
        const OutcomePair b = sample_outcome(BellDiagonalState(0.7, 0.1, 0.1, 0.1),
                                             MeasurementAngle(0.4), MeasurementAngle(-0.2), r2);
        CHECK(a.alice == b.alice);
        CHECK(a.bob == b.bob);
    }
}

TEST_CASE("sampled correlator converges to the exact one") {
    const BellDiagonalState s(0.95, 0.02, 0.02, 0.01);
    const MeasurementAngle a(0.0), b(kPi / 4.0);
    const double exact = correlator_trace(to_density(s), a, b);
    const int n = 1000000;
    std::mt19937_64 rng(2024);
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
        const OutcomePair o = sample_outcome(s, a, b, rng);
        sum += o.alice * o.bob;
    }
    CHECK(std::abs(sum / n - exact) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("von Neumann entropy: pure, maximally mixed, and the Shannon oracle") {
    for (BellLabel label : {BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus,
                            BellLabel::PsiMinus})
        CHECK(von_neumann_entropy(bell_state(label)) <= 1e-12);

    CHECK(von_neumann_entropy(DensityMatrix(Complex(0.25) * ComplexMatrix::identity(4))) ==
          doctest::Approx(2.0).epsilon(1e-15));

    const double w[4] = {0.9, 0.05, 0.03, 0.02};
    double shannon = 0.0;
    for (double x : w) shannon -= x * std::log2(x);
    const double got = von_neumann_entropy(to_density(BellDiagonalState(w[0], w[1], w[2], w[3])));
    CHECK(got == doctest::Approx(shannon).epsilon(1e-12));
    CHECK(got == doctest::Approx(0.6175431233120147).epsilon(1e-12));
}

TEST_CASE("density matrices reject invalid input") {
    ComplexMatrix bad = ComplexMatrix::identity(2);
    bad.at(0, 1) = Complex(0.0, 0.3);  // not Hermitian
    CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::identity(4)}, std::invalid_argument);  // trace 4
}

TEST_CASE("bell_diagonal_entropy equals the matrix entropy") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const BellDiagonalState s = random_bell_diagonal(rng);
        CHECK(std::abs(bell_diagonal_entropy(s) - von_neumann_entropy(to_density(s))) <= 1e-10);
    }
}

TEST_CASE("partial_trace reduces correctly") {
    const DensityMatrix half = partial_trace(bell_state(BellLabel::PhiPlus), {2, 2}, {0});
    CHECK((half.matrix() - Complex(0.5) * ComplexMatrix::identity(2)).max_abs() <= 1e-14);

    std::mt19937_64 rng(9);
    const DensityMatrix rho1 = random_density_matrix(2, rng);
    const DensityMatrix rho2 = random_density_matrix(2, rng);
    const DensityMatrix prod(kron(rho1.matrix(), rho2.matrix()));
    CHECK((partial_trace(prod, {2, 2}, {0}).matrix() - rho1.matrix()).max_abs() <= 1e-13);
    CHECK((partial_trace(prod, {2, 2}, {1}).matrix() - rho2.matrix()).max_abs() <= 1e-13);

    // classically correlated mixture: the reduction is the weighted sum
    const double lam[3] = {0.5, 0.3, 0.2};
    ComplexMatrix mix(4), expected(2);
    for (int k = 0; k < 3; ++k) {
        const DensityMatrix a = random_density_matrix(2, rng);
        const DensityMatrix b = random_density_matrix(2, rng);
        mix += Complex(lam[k]) * kron(a.matrix(), b.matrix());
        expected += Complex(lam[k]) * b.matrix();
    }
    const DensityMatrix mixed(mix);
    CHECK((partial_trace(mixed, {2, 2}, {1}).matrix() - expected).max_abs() <= 1e-13);

    CHECK_THROWS_AS(partial_trace(mixed, {3, 2}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(mixed, {2, 2}, {2}), std::invalid_argument);
}

TEST_CASE("project_and_mix: fixed points, computational collapse, Bell weights") {
    std::mt19937_64 rng(17);

    // already diagonal in the projector basis: unchanged
    ComplexMatrix diag(4);
    diag.at(0, 0) = 0.4;
    diag.at(1, 1) = 0.3;
    diag.at(2, 2) = 0.2;
    diag.at(3, 3) = 0.1;
    std::vector<ComplexMatrix> comp;
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<Complex> e(4);
        e[k] = 1.0;
        comp.push_back(outer(e));
    }
    const DensityMatrix rho_diag(diag);
    CHECK((project_and_mix(rho_diag, comp).matrix() - diag).max_abs() <= 1e-14);

    const DensityMatrix collapsed = project_and_mix(bell_state(BellLabel::PhiPlus), comp);
    CHECK(collapsed.matrix().at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(collapsed.matrix().at(3, 3).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(collapsed.matrix().at(0, 3)) <= 1e-14);

    // Bell projectors produce the Bell-diagonal state with weights <beta|rho|beta>
    std::vector<ComplexMatrix> bell;
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<Complex> v(4);
        for (std::size_t i = 0; i < 4; ++i) v[i] = bell_basis_matrix().at(i, k);
        bell.push_back(outer(v));
    }
    const DensityMatrix rho = random_density_matrix(4, rng);
    const DensityMatrix projected = project_and_mix(rho, bell);
    for (std::size_t k = 0; k < 4; ++k) {
        Complex expect = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                expect += std::conj(bell_basis_matrix().at(i, k)) * rho.matrix().at(i, j) *
                          bell_basis_matrix().at(j, k);
        // projected restricted to this Bell direction matches the expectation value
        Complex got = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                got += std::conj(bell_basis_matrix().at(i, k)) * projected.matrix().at(i, j) *
                       bell_basis_matrix().at(j, k);
        CHECK(std::abs(got - expect) <= 1e-13);
    }

    // invalid sets
    std::vector<ComplexMatrix> incomplete{comp[0], comp[1]};
    CHECK_THROWS_AS(project_and_mix(rho, incomplete), std::invalid_argument);
    std::vector<ComplexMatrix> overlapping{comp[0] + comp[1], comp[1] + comp[2], comp[3]};
    CHECK_THROWS_AS(project_and_mix(rho, overlapping), std::invalid_argument);
}

TEST_CASE("projective measurement never decreases entropy") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        const DensityMatrix rho = random_density_matrix(4, rng);
        const std::vector<ComplexMatrix> projs = random_projector_set(4, rng);
        const double gain = von_neumann_entropy(project_and_mix(rho, projs)) - von_neumann_entropy(rho);
        CHECK(gain >= -1e-10);

        // equality holds only when the state commutes with every projector
        double commutator = 0.0;
        for (const ComplexMatrix& p : projs)
            commutator = std::max(commutator, (p * rho.matrix() - rho.matrix() * p).max_abs());
        if (commutator > 0.05) CHECK(gain > 1e-9);
    }
}

TEST_CASE("diagonalize_on_bell_basis") {
    std::mt19937_64 rng(101);

    const BellDiagonalState in(0.1, 0.6, 0.1, 0.2);
    const BellDiagonalization sorted = diagonalize_on_bell_basis(to_density(in));
    CHECK(sorted.state.w_phi_plus() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(sorted.state.w_phi_minus() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sorted.state.w_psi_plus() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sorted.state.w_psi_minus() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sorted.u.is_unitary(1e-10));

    // pure state: rank is preserved
    std::vector<Complex> psi(4);
    double norm = 0.0;
    for (auto& c : psi) {
        c = Complex(random_normal(rng), random_normal(rng));
        norm += std::norm(c);
    }
    for (auto& c : psi) c /= std::sqrt(norm);
    const BellDiagonalization pure = diagonalize_on_bell_basis(DensityMatrix(outer(psi)));
    CHECK(pure.state.w_phi_plus() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pure.state.w_phi_minus() <= 1e-10);

    for (int t = 0; t < 50; ++t) {
        const DensityMatrix rho = random_density_matrix(4, rng);
        const BellDiagonalization d = diagonalize_on_bell_basis(rho);
        CHECK(std::abs(bell_diagonal_entropy(d.state) - von_neumann_entropy(rho)) <= 1e-10);
        const ComplexMatrix rotated = d.u.dagger() * rho.matrix() * d.u;
        const ComplexMatrix in_bell = bell_basis_matrix().dagger() * rotated * bell_basis_matrix();
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != j) CHECK(std::abs(in_bell.at(i, j)) <= 1e-9);
    }
}

TEST_CASE("entropy is invariant under unitary conjugation") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 25; ++t) {
        const DensityMatrix rho = random_density_matrix(4, rng);
        const ComplexMatrix u = random_unitary(4, rng);
        const DensityMatrix rotated(u.dagger() * rho.matrix() * u);
        CHECK(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-10);
    }
}

TEST_CASE("jacobi eigensystem solves random Hermitian matrices") {
    std::mt19937_64 rng(57);
    for (std::size_t dim : {2ul, 4ul, 16ul}) {
        ComplexMatrix g(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                g.at(i, j) = Complex(random_normal(rng), random_normal(rng));
        ComplexMatrix h(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                h.at(i, j) = (g.at(i, j) + std::conj(g.at(j, i))) / 2.0;

        const EigenSystem eig = hermitian_eigensystem(h);
        CHECK(eig.vectors.is_unitary(1e-10));
        for (std::size_t k = 0; k < dim; ++k) {
            // residual of H v = lambda v
            double res = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                Complex hv = 0.0;
                for (std::size_t j = 0; j < dim; ++j) hv += h.at(i, j) * eig.vectors.at(j, k);
                res = std::max(res, std::abs(hv - eig.values[k] * eig.vectors.at(i, k)));
            }
            CHECK(res <= 1e-10);
        }
        for (std::size_t k = 0; k + 1 < dim; ++k) CHECK(eig.values[k] >= eig.values[k + 1]);
    }
    ComplexMatrix skew(2);
    skew.at(0, 1) = Complex(0, 1);
    skew.at(1, 0) = Complex(0, 1);
    CHECK_THROWS_AS(hermitian_eigensystem(skew), std::invalid_argument);
}
