#include "diqkd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "diqkd/chsh.hpp"
#include "diqkd/io.hpp"
#include "diqkd/random.hpp"
#include "diqkd/security.hpp"

namespace diqkd {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string describe_state(const BellDiagonalState& s) {
    std::ostringstream o;
    o << "[" << format_sig(s.w_phi_plus()) << ", " << format_sig(s.w_phi_minus()) << ", "
      << format_sig(s.w_psi_plus()) << ", " << format_sig(s.w_psi_minus()) << "]";
    return o.str();
}

std::string counterexample_json(const std::string& suite, std::uint64_t seed, int trial,
                                double violation, const std::string& detail) {
    std::ostringstream o;
    o << "{\"suite\": \"" << suite << "\", \"seed\": " << seed << ", \"trial\": " << trial
      << ", \"violation\": " << format_sig(violation) << ", \"detail\": " << detail << "}";
    return o.str();
}

}  // namespace

double random_normal(std::mt19937_64& rng) {
    // Box-Muller on portable uniform draws.
    const double u1 = 1.0 - uniform_double(rng);  // (0, 1]
    const double u2 = uniform_double(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

BellDiagonalState random_bell_diagonal(std::mt19937_64& rng) {
    // Exponential draws normalized: uniform on the probability simplex.
    double w[4], sum = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - uniform_double(rng));
        sum += x;
    }
    return BellDiagonalState(w[0] / sum, w[1] / sum, w[2] / sum, w[3] / sum);
}

DensityMatrix random_density_matrix(std::size_t dim, std::mt19937_64& rng) {
    // Wishart construction: G G^dag / tr(G G^dag) for Gaussian G.
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            g.at(i, j) = Complex(random_normal(rng), random_normal(rng));
    ComplexMatrix rho = g * g.dagger();
    // symmetrize away last-ulp asymmetry before the strict Hermitian check
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            const Complex avg = (rho.at(i, j) + std::conj(rho.at(j, i))) / 2.0;
            rho.at(i, j) = avg;
            rho.at(j, i) = std::conj(avg);
        }
    rho *= Complex(1.0 / rho.trace().real());
    double fix = 1.0 - rho.trace().real();
    rho.at(0, 0) += fix;  // pin the trace to 1 exactly
    return DensityMatrix(std::move(rho));
}

ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            g.at(i, j) = Complex(random_normal(rng), random_normal(rng));
    ComplexMatrix h(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            h.at(i, j) = (g.at(i, j) + std::conj(g.at(j, i))) / 2.0;
    return hermitian_eigensystem(h).vectors;
}

std::vector<ComplexMatrix> random_projector_set(std::size_t dim, std::mt19937_64& rng) {
    const ComplexMatrix u = random_unitary(dim, rng);
    // random composition of dim into blocks
    std::vector<std::size_t> sizes;
    std::size_t left = dim;
    while (left > 0) {
        const std::size_t s = 1 + uniform_index(rng, left);
        sizes.push_back(s);
        left -= s;
    }
    std::vector<ComplexMatrix> out;
    std::size_t col = 0;
    for (std::size_t s : sizes) {
        ComplexMatrix p(dim);
        for (std::size_t k = 0; k < s; ++k, ++col)
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    p.at(i, j) += u.at(i, col) * std::conj(u.at(j, col));
        out.push_back(std::move(p));
    }
    return out;
}

SuiteResult run_correlator_suite(int trials, std::uint64_t seed) {
    SuiteResult r{"correlator", trials, 0.0, 1e-12, true, ""};
    std::mt19937_64 rng = derive_stream(seed, 101, 0);
    for (int t = 0; t < trials; ++t) {
        const BellDiagonalState s = random_bell_diagonal(rng);
        const MeasurementAngle a(uniform_double(rng) * 2.0 * kPi - kPi);
        const MeasurementAngle b(uniform_double(rng) * 2.0 * kPi - kPi);
        const double dev = std::abs(correlator_closed_form(s, a, b) - correlator_trace(to_density(s), a, b));
        if (dev > r.max_violation) r.max_violation = dev;
        if (dev > r.tolerance && r.pass) {
            r.pass = false;
            std::ostringstream d;
            d << "{\"state\": " << describe_state(s) << ", \"a\": " << format_sig(a.radians())
              << ", \"b\": " << format_sig(b.radians()) << "}";
            r.counterexample = counterexample_json(r.name, seed, t, dev, d.str());
        }
    }
    return r;
}

SuiteResult run_optimum_suite() {
    SuiteResult r{"optimum", 101, 0.0, 1e-6, true, ""};
    for (int i = 0; i <= 100; ++i) {
        const double q = static_cast<double>(i) / 100.0;
        const EveNumericOptimum num = optimize_eve_numeric(q);
        const double dev = std::abs(num.p3_star - q * q / 4.0);
        if (dev > r.max_violation) r.max_violation = dev;

        const double p3 = q * q / 4.0;
        const double lhs = (q / 2.0 - p3) * (q / 2.0 - p3);
        const double rhs = (1.0 - q + p3) * p3;
        const double stat = std::abs(lhs - rhs);
        const bool ok = dev <= r.tolerance && stat <= 1e-12;
        if (!ok && r.pass) {
            r.pass = false;
            std::ostringstream d;
            d << "{\"q\": " << format_sig(q) << ", \"p3_star\": " << format_sig(num.p3_star)
              << ", \"stationarity_residual\": " << format_sig(stat) << "}";
            r.counterexample = counterexample_json(r.name, 0, i, std::max(dev, stat), d.str());
        }
    }
    return r;
}

SuiteResult run_subadditivity_suite(int trials, std::uint64_t seed) {
    SuiteResult r{"subadditivity", trials, 0.0, 1e-10, true, ""};
    std::mt19937_64 rng = derive_stream(seed, 102, 0);
    const std::vector<std::size_t> dims{4, 4};
    for (int t = 0; t < trials; ++t) {
        const DensityMatrix rho = random_density_matrix(16, rng);
        const SubadditivityReport rep = subadditivity_report(rho, dims);
        const double viol = std::max(0.0, -rep.gap);
        if (viol > r.max_violation) r.max_violation = viol;
        if (viol > r.tolerance && r.pass) {
            r.pass = false;
            r.counterexample = counterexample_json(
                r.name, seed, t, viol, "{\"kind\": \"random 4x4 state, gap < -tolerance\"}");
        }
    }
    // product states: the bound is tight
    const int product_trials = std::max(1, trials / 10);
    for (int t = 0; t < product_trials; ++t) {
        const DensityMatrix a = random_density_matrix(4, rng);
        const DensityMatrix b = random_density_matrix(4, rng);
        const DensityMatrix prod(kron(a.matrix(), b.matrix()));
        const SubadditivityReport rep = subadditivity_report(prod, dims);
        if (std::abs(rep.gap) > 1e-9 && r.pass) {
            r.pass = false;
            r.counterexample = counterexample_json(
                r.name, seed, t, std::abs(rep.gap),
                "{\"kind\": \"product state, |gap| > 1e-9\"}");
        }
    }
    return r;
}

SuiteResult run_projective_suite(int trials, std::uint64_t seed) {
    SuiteResult r{"projective", trials, 0.0, 1e-10, true, ""};
    std::mt19937_64 rng = derive_stream(seed, 103, 0);
    for (int t = 0; t < trials; ++t) {
        const DensityMatrix rho = random_density_matrix(4, rng);
        const double s_before = von_neumann_entropy(rho);

        const std::vector<ComplexMatrix> projs = random_projector_set(4, rng);
        const double s_after = von_neumann_entropy(project_and_mix(rho, projs));
        const double viol = std::max(0.0, s_before - s_after);
        if (viol > r.max_violation) r.max_violation = viol;

        // commuting case: measure in the state's own eigenbasis
        const EigenSystem eig = hermitian_eigensystem(rho.matrix());
        std::vector<ComplexMatrix> own;
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<Complex> v(4);
            for (std::size_t i = 0; i < 4; ++i) v[i] = eig.vectors.at(i, k);
            own.push_back(outer(v));
        }
        const double s_own = von_neumann_entropy(project_and_mix(rho, own));
        const bool equality_ok = std::abs(s_own - s_before) <= 1e-9;

        // Bell-basis diagonalization preserves the spectrum
        const BellDiagonalization diag = diagonalize_on_bell_basis(rho);
        const double s_diag = bell_diagonal_entropy(diag.state);
        const ComplexMatrix rotated =
            diag.u.dagger() * rho.matrix() * diag.u;
        const ComplexMatrix in_bell =
            bell_basis_matrix().dagger() * rotated * bell_basis_matrix();
        double off = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != j) off = std::max(off, std::abs(in_bell.at(i, j)));
        const bool diag_ok = std::abs(s_diag - s_before) <= 1e-10 && off <= 1e-9 &&
                             diag.u.is_unitary(1e-10);

        if ((viol > r.tolerance || !equality_ok || !diag_ok) && r.pass) {
            r.pass = false;
            std::ostringstream d;
            d << "{\"entropy_decrease\": " << format_sig(viol)
              << ", \"equality_ok\": " << (equality_ok ? "true" : "false")
              << ", \"diagonalization_ok\": " << (diag_ok ? "true" : "false") << "}";
            r.counterexample = counterexample_json(r.name, seed, t, viol, d.str());
        }
    }
    return r;
}

SuiteResult run_identical_suite(int trials, std::uint64_t seed) {
    SuiteResult r{"identical", trials, 0.0, 1e-10, true, ""};
    std::mt19937_64 rng = derive_stream(seed, 104, 0);
    for (int t = 0; t < trials; ++t) {
        const std::size_t m = 2 + uniform_index(rng, 4);
        std::vector<BellDiagonalState> states;
        std::vector<double> weights(m);
        double wsum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            states.push_back(random_bell_diagonal(rng));
            weights[i] = -std::log(1.0 - uniform_double(rng));
            wsum += weights[i];
        }
        for (double& w : weights) w /= wsum;
        const ConcavityReport rep = identical_preparation_report(states, weights);
        const double viol = std::max(0.0, rep.mean_entropy - rep.entropy_of_mean);
        if (viol > r.max_violation) r.max_violation = viol;

        // identical states: exact equality
        std::vector<BellDiagonalState> same(m, states[0]);
        const ConcavityReport rep_same = identical_preparation_report(same, weights);
        const bool equal_ok = std::abs(rep_same.entropy_of_mean - rep_same.mean_entropy) <= 1e-9;

        // a 1e-3 perturbation of one copy must break equality by > 1e-8;
        // keep the base state away from the simplex boundary so the shift fits
        const auto& w0 = states[0].weights();
        const BellDiagonalState base(0.9 * w0[0] + 0.025, 0.9 * w0[1] + 0.025, 0.9 * w0[2] + 0.025,
                                     0.9 * w0[3] + 0.025);
        const auto& bw = base.weights();
        const BellDiagonalState shifted(bw[0] + 1e-3, bw[1] - 1e-3, bw[2], bw[3]);
        std::vector<BellDiagonalState> pair{base, shifted};
        const std::vector<double> half{0.5, 0.5};
        const ConcavityReport rep_pert = identical_preparation_report(pair, half);
        const bool pert_ok = (rep_pert.entropy_of_mean - rep_pert.mean_entropy) > 1e-8;

        if ((viol > r.tolerance || !equal_ok || !pert_ok) && r.pass) {
            r.pass = false;
            std::ostringstream d;
            d << "{\"concavity_violation\": " << format_sig(viol)
              << ", \"equality_ok\": " << (equal_ok ? "true" : "false")
              << ", \"perturbation_ok\": " << (pert_ok ? "true" : "false") << "}";
            r.counterexample = counterexample_json(r.name, seed, t, viol, d.str());
        }
    }
    return r;
}

std::vector<SuiteResult> run_verification_suites(const std::string& suite, int trials,
                                                 std::uint64_t seed) {
    std::vector<SuiteResult> out;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "subadditivity") { out.push_back(run_subadditivity_suite(trials, seed)); known = true; }
    if (all || suite == "projective") { out.push_back(run_projective_suite(trials, seed)); known = true; }
    if (all || suite == "identical") { out.push_back(run_identical_suite(trials, seed)); known = true; }
    if (all || suite == "correlator") { out.push_back(run_correlator_suite(trials, seed)); known = true; }
    if (all || suite == "optimum") { out.push_back(run_optimum_suite()); known = true; }
    if (!known)
        throw std::invalid_argument("unknown suite '" + suite +
                                    "' (expected all, subadditivity, projective, identical, "
                                    "correlator or optimum)");
    return out;
}

}  // namespace diqkd
