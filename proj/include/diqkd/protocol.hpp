#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "diqkd/quantum.hpp"
#include "diqkd/security.hpp"

namespace diqkd {

enum class PerturbationKind { None, FixedRotation, PerRoundJitter };

// How the devices' true per-round directions deviate from the nominal bases:
// fixed_rotation adds the per-side offset; per_round_jitter additionally adds
// an independent uniform draw from [-jitter_halfwidth, +jitter_halfwidth].
struct PerturbationModel {
    PerturbationKind kind = PerturbationKind::None;
    double alice_offset = 0.0;
    double bob_offset = 0.0;
    double jitter_halfwidth = 0.0;  // in [0, pi/4]
};

inline std::array<MeasurementAngle, 4> default_basis_angles() {
    constexpr double kPi = 3.14159265358979323846;
    return {MeasurementAngle(kPi / 2.0), MeasurementAngle(kPi / 4.0), MeasurementAngle(0.0),
            MeasurementAngle(-kPi / 4.0)};
}

struct ProtocolConfig {
    std::uint64_t rounds = 1;
    BellDiagonalState source_state{1.0, 0.0, 0.0, 0.0};
    std::array<MeasurementAngle, 4> alice_angles = default_basis_angles();
    std::array<MeasurementAngle, 4> bob_angles = default_basis_angles();
    PerturbationModel perturbation{};
    double abort_s_min = 2.2;        // in (2, 2 sqrt 2]
    double abort_q_max = 0.11;       // in [0, 1/2)
    double qber_sample_fraction = 0.5;  // fraction of matched rounds published for QBER
    std::uint64_t seed = 1;
};

struct RoundRecord {
    std::uint64_t round_index;
    int alice_basis;  // 1..4
    int bob_basis;    // 1..4
    int alice_bit;    // +1 or -1
    int bob_bit;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct ProtocolStats {
    std::uint64_t n_key = 0;   // matched-basis rounds kept secret
    std::uint64_t n_test = 0;  // rounds published for S, S' and QBER estimation
    Estimate s;
    Estimate s_prime;
    Estimate q;
    bool aborted = false;
    std::optional<KeyRateResult> rate;  // absent when aborted
    std::array<std::array<std::uint64_t, 4>, 4> counts_by_basis_pair{};
};

struct AnglePair {
    double alice;
    double bob;
};

struct ProtocolRun {
    std::vector<RoundRecord> records;
    ProtocolStats stats;
    std::vector<AnglePair> true_angles;  // indexed by round_index (diagnostic)
};

// The four signed CHSH cells as (alice_basis, bob_basis) pairs in term order
// (A1B1, A1B2, A2B1, A2B2); signs are (+, +, +, -).
struct ChshPairing {
    std::array<std::pair<int, int>, 4> cells;
};

// With the default angles these pairings reproduce S = S' = 2 sqrt 2 on Phi+:
// S is estimated from Alice bases {3,1} against Bob bases {2,4}, S' from
// Alice {2,4} against Bob {3,1}.
inline constexpr ChshPairing kChshPairingS{{{{3, 2}, {3, 4}, {1, 2}, {1, 4}}}};
inline constexpr ChshPairing kChshPairingSPrime{{{{2, 3}, {2, 1}, {4, 3}, {4, 1}}}};

// Runs the full protocol: per-round uniform basis choice on both sides,
// Born-rule sampling with perturbed angles, record shuffling, sifting,
// estimation and the abort decision. Deterministic for a fixed config.
ProtocolRun run_protocol(const ProtocolConfig& cfg);

// Unbiased Fisher-Yates shuffle.
void shuffle_records(std::vector<RoundRecord>& records, std::mt19937_64& rng);

struct SiftResult {
    std::vector<RoundRecord> key;           // alice_basis == bob_basis
    std::vector<RoundRecord> test_s;        // alice in {1,3}, bob in {2,4}
    std::vector<RoundRecord> test_s_prime;  // alice in {2,4}, bob in {1,3}
    std::vector<RoundRecord> discard;
};

SiftResult sift(const std::vector<RoundRecord>& records);

// Per-cell empirical correlators combined with the CHSH signs;
// std_error = sqrt(sum (1 - E_cell^2) / n_cell). Throws EmptyCell if a
// required basis pair never occurs.
Estimate estimate_chsh(const std::vector<RoundRecord>& test_set, const ChshPairing& pairing);

// Mismatch fraction with binomial standard error. Throws on an empty set.
Estimate estimate_qber(const std::vector<RoundRecord>& key_set);

// Circular mean (and circular standard error) of the true per-round angles,
// per side and basis index. `true_angles` is indexed by round_index.
struct DirectionEstimate {
    double mean_angle = 0.0;
    double std_error = 0.0;
    std::uint64_t count = 0;
};

struct EquivalentOps {
    std::array<DirectionEstimate, 4> alice;
    std::array<DirectionEstimate, 4> bob;
};

EquivalentOps equivalent_operations(const std::vector<RoundRecord>& records,
                                    const std::vector<AnglePair>& true_angles);

}  // namespace diqkd
