#include "diqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "diqkd/errors.hpp"
#include "diqkd/random.hpp"

namespace diqkd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kRoundTag = 1;
constexpr std::uint64_t kShuffleTag = 2;
constexpr std::uint64_t kQberSampleTag = 3;

void validate_config(const ProtocolConfig& cfg) {
    const double tsirelson = 2.0 * std::sqrt(2.0);
    if (cfg.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (!(cfg.abort_s_min > 2.0 && cfg.abort_s_min <= tsirelson + 1e-12))
        throw std::invalid_argument("abort_s_min must lie in (2, 2*sqrt(2)]");
    if (!(cfg.abort_q_max >= 0.0 && cfg.abort_q_max < 0.5))
        throw std::invalid_argument("abort_q_max must lie in [0, 1/2)");
    if (!(cfg.perturbation.jitter_halfwidth >= 0.0 && cfg.perturbation.jitter_halfwidth <= kPi / 4.0))
        throw std::invalid_argument("jitter_halfwidth must lie in [0, pi/4]");
    if (!(cfg.qber_sample_fraction >= 0.0 && cfg.qber_sample_fraction <= 1.0))
        throw std::invalid_argument("qber_sample_fraction must lie in [0, 1]");
}

double perturbed(double nominal, double offset, const PerturbationModel& p, double jitter_draw) {
    switch (p.kind) {
        case PerturbationKind::None:
            return nominal;
        case PerturbationKind::FixedRotation:
            return nominal + offset;
        case PerturbationKind::PerRoundJitter:
            return nominal + offset + (2.0 * jitter_draw - 1.0) * p.jitter_halfwidth;
    }
    return nominal;
}

bool in_pair(int basis, int a, int b) { return basis == a || basis == b; }

}  // namespace

ProtocolRun run_protocol(const ProtocolConfig& cfg) {
    validate_config(cfg);

    ProtocolRun run;
    run.records.reserve(cfg.rounds);
    run.true_angles.reserve(cfg.rounds);

    const bool jitter = cfg.perturbation.kind == PerturbationKind::PerRoundJitter;
    for (std::uint64_t k = 0; k < cfg.rounds; ++k) {
        std::mt19937_64 rng = derive_stream(cfg.seed, kRoundTag, k);
        const int a_basis = static_cast<int>(uniform_index(rng, 4)) + 1;
        const int b_basis = static_cast<int>(uniform_index(rng, 4)) + 1;
        const double a_jit = jitter ? uniform_double(rng) : 0.0;
        const double b_jit = jitter ? uniform_double(rng) : 0.0;

        const double a_true = perturbed(cfg.alice_angles[a_basis - 1].radians(),
                                        cfg.perturbation.alice_offset, cfg.perturbation, a_jit);
        const double b_true = perturbed(cfg.bob_angles[b_basis - 1].radians(),
                                        cfg.perturbation.bob_offset, cfg.perturbation, b_jit);

        const OutcomePair outcome = sample_outcome(cfg.source_state, MeasurementAngle(a_true),
                                                   MeasurementAngle(b_true), rng);
        run.records.push_back({k, a_basis, b_basis, outcome.alice, outcome.bob});
        run.true_angles.push_back({a_true, b_true});
        ++run.stats.counts_by_basis_pair[a_basis - 1][b_basis - 1];
    }

    std::mt19937_64 shuffle_rng = derive_stream(cfg.seed, kShuffleTag, 0);
    shuffle_records(run.records, shuffle_rng);

    const SiftResult sifted = sift(run.records);

    // Publish a random subsample of the matched-basis rounds for QBER
    // estimation; the rest is key material.
    std::vector<RoundRecord> q_sample;
    {
        const std::uint64_t n = sifted.key.size();
        const std::uint64_t m =
            static_cast<std::uint64_t>(cfg.qber_sample_fraction * static_cast<double>(n));
        std::vector<std::uint64_t> idx(n);
        for (std::uint64_t i = 0; i < n; ++i) idx[i] = i;
        std::mt19937_64 pick_rng = derive_stream(cfg.seed, kQberSampleTag, 0);
        q_sample.reserve(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            const std::uint64_t j = i + uniform_index(pick_rng, n - i);
            std::swap(idx[i], idx[j]);
            q_sample.push_back(sifted.key[idx[i]]);
        }
        run.stats.n_key = n - m;
        run.stats.n_test = sifted.test_s.size() + sifted.test_s_prime.size() + m;
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    run.stats.s = {nan, nan};
    run.stats.s_prime = {nan, nan};
    run.stats.q = {nan, nan};
    bool estimable = true;
    try {
        run.stats.s = estimate_chsh(sifted.test_s, kChshPairingS);
        run.stats.s_prime = estimate_chsh(sifted.test_s_prime, kChshPairingSPrime);
        run.stats.q = estimate_qber(q_sample);
    } catch (const EmptyCell&) {
        estimable = false;
    } catch (const std::invalid_argument&) {
        estimable = false;
    }

    if (!estimable) {
        run.stats.aborted = true;
    } else {
        const bool s_fail = run.stats.s.value + 2.0 * run.stats.s.std_error < cfg.abort_s_min;
        const bool q_fail = run.stats.q.value - 2.0 * run.stats.q.std_error > cfg.abort_q_max;
        run.stats.aborted = s_fail || q_fail;
    }

    if (!run.stats.aborted) {
        double s = std::min(run.stats.s.value, run.stats.s_prime.value);
        s = std::clamp(s, 0.0, 2.0 * std::sqrt(2.0));  // sampling noise can spill past the ends
        run.stats.rate = key_rate(s);
    }
    return run;
}

void shuffle_records(std::vector<RoundRecord>& records, std::mt19937_64& rng) {
    const std::uint64_t n = records.size();
    for (std::uint64_t i = 0; i + 1 < n; ++i) {
        const std::uint64_t j = i + uniform_index(rng, n - i);
        std::swap(records[i], records[j]);
    }
}

SiftResult sift(const std::vector<RoundRecord>& records) {
    SiftResult out;
    for (const RoundRecord& r : records) {
        if (r.alice_basis == r.bob_basis)
            out.key.push_back(r);
        else if (in_pair(r.alice_basis, 1, 3) && in_pair(r.bob_basis, 2, 4))
            out.test_s.push_back(r);
        else if (in_pair(r.alice_basis, 2, 4) && in_pair(r.bob_basis, 1, 3))
            out.test_s_prime.push_back(r);
        else
            out.discard.push_back(r);
    }
    return out;
}

Estimate estimate_chsh(const std::vector<RoundRecord>& test_set, const ChshPairing& pairing) {
    std::array<std::uint64_t, 4> n{};
    std::array<double, 4> sum{};
    for (const RoundRecord& r : test_set) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (r.alice_basis == pairing.cells[c].first && r.bob_basis == pairing.cells[c].second) {
                ++n[c];
                sum[c] += static_cast<double>(r.alice_bit * r.bob_bit);
                break;
            }
        }
    }
    static const double sign[4] = {+1.0, +1.0, +1.0, -1.0};
    double s_hat = 0.0, var = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        if (n[c] == 0)
            throw EmptyCell("no samples for basis pair (" + std::to_string(pairing.cells[c].first) +
                            ", " + std::to_string(pairing.cells[c].second) + ")");
        const double e = sum[c] / static_cast<double>(n[c]);
        s_hat += sign[c] * e;
        var += std::max(0.0, 1.0 - e * e) / static_cast<double>(n[c]);
    }
    return {s_hat, std::sqrt(var)};
}

Estimate estimate_qber(const std::vector<RoundRecord>& key_set) {
    if (key_set.empty()) throw std::invalid_argument("estimate_qber: empty key set");
    std::uint64_t mismatches = 0;
    for (const RoundRecord& r : key_set)
        if (r.alice_bit != r.bob_bit) ++mismatches;
    const double n = static_cast<double>(key_set.size());
    const double q = static_cast<double>(mismatches) / n;
    return {q, std::sqrt(q * (1.0 - q) / n)};
}

EquivalentOps equivalent_operations(const std::vector<RoundRecord>& records,
                                    const std::vector<AnglePair>& true_angles) {
    struct Acc {
        double sin_sum = 0.0, cos_sum = 0.0;
        std::uint64_t n = 0;
    };
    std::array<Acc, 4> alice{}, bob{};
    for (const RoundRecord& r : records) {
        if (r.round_index >= true_angles.size())
            throw std::invalid_argument("round index outside the angle log");
        const AnglePair& ap = true_angles[r.round_index];
        Acc& a = alice[r.alice_basis - 1];
        a.sin_sum += std::sin(ap.alice);
        a.cos_sum += std::cos(ap.alice);
        ++a.n;
        Acc& b = bob[r.bob_basis - 1];
        b.sin_sum += std::sin(ap.bob);
        b.cos_sum += std::cos(ap.bob);
        ++b.n;
    }
    const auto finish = [](const Acc& acc) {
        DirectionEstimate d;
        d.count = acc.n;
        if (acc.n == 0) {
            d.mean_angle = std::numeric_limits<double>::quiet_NaN();
            d.std_error = std::numeric_limits<double>::quiet_NaN();
            return d;
        }
        d.mean_angle = std::atan2(acc.sin_sum, acc.cos_sum);
        const double n = static_cast<double>(acc.n);
        double r = std::sqrt(acc.sin_sum * acc.sin_sum + acc.cos_sum * acc.cos_sum) / n;
        if (r > 1.0) r = 1.0;
        // circular dispersion sqrt(-2 ln R), scaled to a standard error of the mean
        d.std_error = r > 0.0 ? std::sqrt(-2.0 * std::log(r) / n)
                              : std::numeric_limits<double>::infinity();
        return d;
    };
    EquivalentOps out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.alice[i] = finish(alice[i]);
        out.bob[i] = finish(bob[i]);
    }
    return out;
}

}  // namespace diqkd
