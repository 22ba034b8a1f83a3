#pragma once

#include <array>
#include <vector>

#include "diqkd/quantum.hpp"

namespace diqkd {

// q = p + p3 parametrizes the disturbance the legitimate users can bound from
// the CHSH value; the optimal eavesdropper splits it as p3 = q^2/4,
// p1 = p2 = q/2 - q^2/4.
struct EveOptimum {
    double q;
    double p1;
    double p3;
    BellDiagonalState state;
    double entropy_bits;
};

struct KeyRateResult {
    double s_value;
    double q;
    double qber;
    double holevo_bound_bits;
    double rate_bits_per_sifted_bit;
};

// 1 - s / (2 sqrt 2), clamped to [0, 1]. Domain: s in [0, 2 sqrt 2].
double q_from_s(double s);

// Shannon entropy (bits) of {1-q+p3, q/2-p3, q/2-p3, p3}. Domain: 0 <= p3 <= q/2 <= 1/2.
double eve_entropy(double q, double p3);

// Closed-form entropy maximizer over p3 for fixed q.
EveOptimum optimal_eve_state(double q);

// Independent verification path: golden-section maximization of
// eve_entropy(q, .) over p3 in [0, q/2] to 1e-10.
struct EveNumericOptimum {
    double p3_star;
    double entropy_bits;
};

EveNumericOptimum optimize_eve_numeric(double q);

// Spectrum of the optimal state as a function of s: with sigma = s/(2 sqrt 2),
// {(1+sigma)^2/4, (1-sigma^2)/4, (1-sigma^2)/4, (1-sigma)^2/4}. Sums to 1.
std::array<double, 4> holevo_spectrum(double s);

// Upper bound on the eavesdropper's information (bits): the von Neumann
// entropy of the optimal state at the given CHSH value. Monotone decreasing;
// E(2 sqrt 2) = 0, E(0) = 2.
double holevo_bound(double s);

// -x log2 x - (1-x) log2 (1-x) with 0 log 0 := 0.
double binary_entropy(double x);

// rate = 1 - H2(1/2 - s/(4 sqrt 2)) - holevo_bound(s).
KeyRateResult key_rate(double s);

// General form rate = 1 - H2(qber) - chi; s and q are filled through the
// symmetric-protocol relations s = 2 sqrt 2 (1 - 2 qber), q = 2 qber.
KeyRateResult key_rate_from_qber(double qber, double holevo_bits);

// Zero-rate threshold found by bisection on [2, 2 sqrt 2] to 1e-8.
struct RateThreshold {
    double s_star;
    double q_star;  // 1/2 - s_star / (4 sqrt 2)
};

RateThreshold zero_rate_threshold();

// lhs = S(rho), rhs = sum of single-factor entropies via partial_trace,
// gap = rhs - lhs (nonnegative; zero exactly for product states).
struct SubadditivityReport {
    double lhs;
    double rhs;
    double gap;
};

SubadditivityReport subadditivity_report(const DensityMatrix& rho,
                                         const std::vector<std::size_t>& dims);

// mean_entropy = sum w_i S(state_i); entropy_of_mean = S(sum w_i state_i).
// Concavity makes entropy_of_mean >= mean_entropy, with equality exactly when
// all states coincide.
struct ConcavityReport {
    double mean_entropy;
    double entropy_of_mean;
};

ConcavityReport identical_preparation_report(const std::vector<BellDiagonalState>& states,
                                             const std::vector<double>& weights);

// Isotropic comparator at the same q: weights (1 - 3q/4, q/4, q/4, q/4).
BellDiagonalState werner_state(double q);

}  // namespace diqkd
