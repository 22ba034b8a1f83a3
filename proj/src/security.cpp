#include "diqkd/security.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diqkd {

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

void require_s_range(double s, const char* op) {
    if (!(s >= 0.0 && s <= kTsirelson + 1e-12))
        throw std::out_of_range(std::string(op) + ": s must lie in [0, 2*sqrt(2)], got " +
                                std::to_string(s));
}

double plog2(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

double q_from_s(double s) {
    require_s_range(s, "q_from_s");
    double q = 1.0 - s / kTsirelson;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return q;
}

double eve_entropy(double q, double p3) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("eve_entropy: q must lie in [0, 1]");
    if (!(p3 >= -1e-12 && p3 <= q / 2.0 + 1e-12))
        throw std::out_of_range("eve_entropy: p3 must lie in [0, q/2]");
    if (p3 < 0.0) p3 = 0.0;
    if (p3 > q / 2.0) p3 = q / 2.0;
    const double p1 = q / 2.0 - p3;
    double h = -plog2(1.0 - q + p3) - 2.0 * plog2(p1) - plog2(p3);
    return h < 0.0 ? 0.0 : h;
}

EveOptimum optimal_eve_state(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("optimal_eve_state: q must lie in [0, 1]");
    const double p3 = q * q / 4.0;
    const double p1 = q / 2.0 - p3;
    EveOptimum out{q, p1, p3, BellDiagonalState(1.0 - q + p3, p1, p1, p3), eve_entropy(q, p3)};
    return out;
}

EveNumericOptimum optimize_eve_numeric(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("optimize_eve_numeric: q must lie in [0, 1]");
    double lo = 0.0, hi = q / 2.0;
    if (hi <= 0.0) return {0.0, 0.0};

    // Golden-section search; eve_entropy is strictly concave along this segment.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = eve_entropy(q, x1);
    double f2 = eve_entropy(q, x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eve_entropy(q, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eve_entropy(q, x1);
        }
    }
    const double p3 = (lo + hi) / 2.0;
    return {p3, eve_entropy(q, p3)};
}

std::array<double, 4> holevo_spectrum(double s) {
    require_s_range(s, "holevo_spectrum");
    const double sigma = s / kTsirelson;
    const double a = 1.0 + sigma, b = 1.0 - sigma;
    return {a * a / 4.0, a * b / 4.0, a * b / 4.0, b * b / 4.0};
}

double holevo_bound(double s) {
    const std::array<double, 4> lam = holevo_spectrum(s);
    double h = 0.0;
    for (double l : lam) h -= plog2(l);
    return h < 0.0 ? 0.0 : h;
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::out_of_range("binary_entropy: argument must lie in [0, 1]");
    const double h = -plog2(x) - plog2(1.0 - x);
    return h < 0.0 ? 0.0 : h;
}

KeyRateResult key_rate(double s) {
    require_s_range(s, "key_rate");
    const double qb = 0.5 - s / (4.0 * std::sqrt(2.0));
    const double chi = holevo_bound(s);
    return {s, q_from_s(s), qb, chi, 1.0 - binary_entropy(qb) - chi};
}

KeyRateResult key_rate_from_qber(double qber, double holevo_bits) {
    if (!(qber >= 0.0 && qber <= 1.0))
        throw std::out_of_range("key_rate_from_qber: qber must lie in [0, 1]");
    return {kTsirelson * (1.0 - 2.0 * qber), 2.0 * qber, qber, holevo_bits,
            1.0 - binary_entropy(qber) - holevo_bits};
}

RateThreshold zero_rate_threshold() {
    double lo = 2.0, hi = kTsirelson;  // rate(2) < 0, rate(2 sqrt 2) = 1
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        const double mid = (lo + hi) / 2.0;
        if (key_rate(mid).rate_bits_per_sifted_bit < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double s_star = (lo + hi) / 2.0;
    return {s_star, 0.5 - s_star / (4.0 * std::sqrt(2.0))};
}

SubadditivityReport subadditivity_report(const DensityMatrix& rho,
                                         const std::vector<std::size_t>& dims) {
    const double lhs = von_neumann_entropy(rho);
    double rhs = 0.0;
    for (std::size_t i = 0; i < dims.size(); ++i)
        rhs += von_neumann_entropy(partial_trace(rho, dims, {i}));
    return {lhs, rhs, rhs - lhs};
}

ConcavityReport identical_preparation_report(const std::vector<BellDiagonalState>& states,
                                             const std::vector<double>& weights) {
    if (states.size() < 2) throw std::invalid_argument("need at least two states");
    if (states.size() != weights.size())
        throw std::invalid_argument("states and weights must have equal length");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");

    double mean_entropy = 0.0;
    std::array<double, 4> mix{};
    for (std::size_t i = 0; i < states.size(); ++i) {
        mean_entropy += weights[i] * bell_diagonal_entropy(states[i]);
        for (std::size_t k = 0; k < 4; ++k) mix[k] += weights[i] * states[i].weights()[k];
    }
    const double norm = mix[0] + mix[1] + mix[2] + mix[3];
    const BellDiagonalState mean_state(mix[0] / norm, mix[1] / norm, mix[2] / norm, mix[3] / norm);
    return {mean_entropy, bell_diagonal_entropy(mean_state)};
}

BellDiagonalState werner_state(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("werner_state: q must lie in [0, 1]");
    return BellDiagonalState(1.0 - 3.0 * q / 4.0, q / 4.0, q / 4.0, q / 4.0);
}

}  // namespace diqkd
