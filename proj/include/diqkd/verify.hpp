#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "diqkd/quantum.hpp"

namespace diqkd {

// Randomized property suites shared by the verify CLI command, the unit
// tests and the acceptance suite. Each suite is deterministic for a fixed
// (trials, seed) pair; `max_violation` is the suite's primary metric against
// `tolerance`, and `pass` additionally covers the suite's secondary checks.
struct SuiteResult {
    std::string name;
    int trials = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string counterexample;  // JSON for the first failure; empty when passing
};

// Closed-form correlator against the 4x4 trace over random (state, angles).
SuiteResult run_correlator_suite(int trials, std::uint64_t seed);

// Golden-section entropy maximizer against p3 = q^2/4 on a 101-point q grid,
// plus the stationarity identity (q/2 - p3)^2 = (1 - q + p3) p3.
SuiteResult run_optimum_suite();

// Entropy subadditivity on random two-ququart states; near-equality on
// product states (trials/10 of them, at least one).
SuiteResult run_subadditivity_suite(int trials, std::uint64_t seed);

// Projective measurement never decreases entropy; equality when the state
// commutes with the projectors; Bell-basis diagonalization preserves entropy
// and zeroes Bell-basis off-diagonals.
SuiteResult run_projective_suite(int trials, std::uint64_t seed);

// Entropy concavity over random mixtures; equality exactly for identical
// states; a 1e-3 perturbation breaks equality by more than 1e-8.
SuiteResult run_identical_suite(int trials, std::uint64_t seed);

// suite: one of all, subadditivity, projective, identical, correlator, optimum.
// Throws std::invalid_argument for unknown names.
std::vector<SuiteResult> run_verification_suites(const std::string& suite, int trials,
                                                 std::uint64_t seed);

// Random-object generators used by the suites and the tests.
BellDiagonalState random_bell_diagonal(std::mt19937_64& rng);
DensityMatrix random_density_matrix(std::size_t dim, std::mt19937_64& rng);
ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng);
std::vector<ComplexMatrix> random_projector_set(std::size_t dim, std::mt19937_64& rng);
double random_normal(std::mt19937_64& rng);

}  // namespace diqkd
