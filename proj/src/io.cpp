#include "diqkd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diqkd/errors.hpp"

namespace diqkd {

using nlohmann::json;

std::string format_sig(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace {

std::string json_number(double x) {
    if (!std::isfinite(x)) return "null";
    return format_sig(x);
}

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

double require_number(const json& j, const std::string& origin, const std::string& field,
                      double lo, double hi) {
    if (!j.is_number())
        throw ConfigError(origin + ": field '" + field + "' must be a number");
    const double v = j.get<double>();
    if (!(v >= lo && v <= hi))
        throw ConfigError(origin + ": field '" + field + "' out of range [" + format_sig(lo) +
                          ", " + format_sig(hi) + "]");
    return v;
}

BellDiagonalState parse_state(const json& j, const std::string& origin) {
    if (!j.is_object()) throw ConfigError(origin + ": field 'source_state' must be an object");
    if (j.contains("optimal_eve_q")) {
        const double q = require_number(j.at("optimal_eve_q"), origin, "source_state.optimal_eve_q",
                                        0.0, 1.0);
        return optimal_eve_state(q).state;
    }
    const char* names[4] = {"w_phi_plus", "w_phi_minus", "w_psi_plus", "w_psi_minus"};
    double w[4];
    for (int i = 0; i < 4; ++i) {
        if (!j.contains(names[i]))
            throw ConfigError(origin + ": field 'source_state." + names[i] +
                              "' is required (or give 'optimal_eve_q')");
        w[i] = require_number(j.at(names[i]), origin, std::string("source_state.") + names[i], 0.0, 1.0);
    }
    try {
        return BellDiagonalState(w[0], w[1], w[2], w[3]);
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": invalid source_state: " + e.what());
    }
}

std::array<MeasurementAngle, 4> parse_angles(const json& j, const std::string& origin,
                                             const std::string& field) {
    if (!j.is_array() || j.size() != 4)
        throw ConfigError(origin + ": field '" + field + "' must be an array of 4 angles (radians)");
    std::array<MeasurementAngle, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = MeasurementAngle(
            require_number(j.at(i), origin, field + "[" + std::to_string(i) + "]", -1e6, 1e6));
    return out;
}

PerturbationModel parse_perturbation(const json& j, const std::string& origin) {
    if (!j.is_object()) throw ConfigError(origin + ": field 'perturbation' must be an object");
    PerturbationModel p;
    const std::string kind = j.value("kind", std::string("none"));
    if (kind == "none")
        p.kind = PerturbationKind::None;
    else if (kind == "fixed_rotation")
        p.kind = PerturbationKind::FixedRotation;
    else if (kind == "per_round_jitter")
        p.kind = PerturbationKind::PerRoundJitter;
    else
        throw ConfigError(origin +
                          ": field 'perturbation.kind' must be one of none, fixed_rotation, "
                          "per_round_jitter");
    if (j.contains("alice_offset"))
        p.alice_offset = require_number(j.at("alice_offset"), origin, "perturbation.alice_offset",
                                        -1e6, 1e6);
    if (j.contains("bob_offset"))
        p.bob_offset = require_number(j.at("bob_offset"), origin, "perturbation.bob_offset", -1e6, 1e6);
    if (j.contains("jitter_halfwidth"))
        p.jitter_halfwidth = require_number(j.at("jitter_halfwidth"), origin,
                                            "perturbation.jitter_halfwidth", 0.0, 0.7853981633974484);
    return p;
}

}  // namespace

ProtocolConfig parse_protocol_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ":" + locate(text, e.byte > 0 ? e.byte - 1 : 0) +
                          ": JSON syntax error: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top-level value must be an object");

    static const char* known[] = {"rounds",      "seed",        "source_state",
                                  "alice_angles", "bob_angles",  "perturbation",
                                  "abort_s_min", "abort_q_max", "qber_sample_fraction"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw ConfigError(origin + ": unknown field '" + item.key() + "'");
    }

    ProtocolConfig cfg;
    if (!j.contains("rounds")) throw ConfigError(origin + ": field 'rounds' is required");
    if (!j.at("rounds").is_number_unsigned() || j.at("rounds").get<std::uint64_t>() < 1)
        throw ConfigError(origin + ": field 'rounds' must be a positive integer");
    cfg.rounds = j.at("rounds").get<std::uint64_t>();

    if (!j.contains("source_state")) throw ConfigError(origin + ": field 'source_state' is required");
    cfg.source_state = parse_state(j.at("source_state"), origin);

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw ConfigError(origin + ": field 'seed' must be an unsigned integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("alice_angles")) cfg.alice_angles = parse_angles(j.at("alice_angles"), origin, "alice_angles");
    if (j.contains("bob_angles")) cfg.bob_angles = parse_angles(j.at("bob_angles"), origin, "bob_angles");
    if (j.contains("perturbation")) cfg.perturbation = parse_perturbation(j.at("perturbation"), origin);
    if (j.contains("abort_s_min"))
        cfg.abort_s_min = require_number(j.at("abort_s_min"), origin, "abort_s_min", 2.0 + 1e-12,
                                         2.0 * std::sqrt(2.0));
    if (j.contains("abort_q_max"))
        cfg.abort_q_max = require_number(j.at("abort_q_max"), origin, "abort_q_max", 0.0, 0.5 - 1e-12);
    if (j.contains("qber_sample_fraction"))
        cfg.qber_sample_fraction =
            require_number(j.at("qber_sample_fraction"), origin, "qber_sample_fraction", 0.0, 1.0);
    return cfg;
}

ProtocolConfig load_protocol_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_protocol_config(ss.str(), path);
}

std::string stats_to_json(const ProtocolStats& stats) {
    std::ostringstream o;
    o << "{\n";
    o << "  \"n_key\": " << stats.n_key << ",\n";
    o << "  \"n_test\": " << stats.n_test << ",\n";
    o << "  \"s_hat\": " << json_number(stats.s.value) << ",\n";
    o << "  \"stderr_s\": " << json_number(stats.s.std_error) << ",\n";
    o << "  \"s_prime_hat\": " << json_number(stats.s_prime.value) << ",\n";
    o << "  \"stderr_s_prime\": " << json_number(stats.s_prime.std_error) << ",\n";
    o << "  \"q_hat\": " << json_number(stats.q.value) << ",\n";
    o << "  \"stderr_q\": " << json_number(stats.q.std_error) << ",\n";
    o << "  \"aborted\": " << (stats.aborted ? "true" : "false") << ",\n";
    if (stats.rate) {
        o << "  \"rate\": {\n";
        o << "    \"s_value\": " << json_number(stats.rate->s_value) << ",\n";
        o << "    \"q\": " << json_number(stats.rate->q) << ",\n";
        o << "    \"qber\": " << json_number(stats.rate->qber) << ",\n";
        o << "    \"holevo_bound_bits\": " << json_number(stats.rate->holevo_bound_bits) << ",\n";
        o << "    \"rate_bits_per_sifted_bit\": " << json_number(stats.rate->rate_bits_per_sifted_bit)
          << "\n";
        o << "  },\n";
    } else {
        o << "  \"rate\": null,\n";
    }
    o << "  \"counts_by_basis_pair\": [";
    for (std::size_t a = 0; a < 4; ++a) {
        o << (a == 0 ? "[" : " [");
        for (std::size_t b = 0; b < 4; ++b) o << stats.counts_by_basis_pair[a][b] << (b < 3 ? ", " : "");
        o << (a < 3 ? "],\n                           " : "]");
    }
    o << "]\n}\n";
    return o.str();
}

std::string records_to_csv(const std::vector<RoundRecord>& records) {
    std::ostringstream o;
    o << "round,alice_basis,bob_basis,alice_bit,bob_bit\n";
    for (const RoundRecord& r : records)
        o << r.round_index << ',' << r.alice_basis << ',' << r.bob_basis << ',' << r.alice_bit << ','
          << r.bob_bit << '\n';
    return o.str();
}

std::vector<KeyRateRow> keyrate_table(double s_lo, double s_hi, int steps) {
    const double tsirelson = 2.0 * std::sqrt(2.0);
    if (!(s_lo >= 2.0 - 1e-12 && s_hi <= tsirelson + 1e-12 && s_lo < s_hi))
        throw std::out_of_range("keyrate_table: range must satisfy 2 <= lo < hi <= 2*sqrt(2)");
    if (steps < 2) throw std::out_of_range("keyrate_table: need at least 2 steps");

    const RateThreshold th = zero_rate_threshold();
    std::vector<KeyRateRow> rows;
    rows.reserve(static_cast<std::size_t>(steps) + 1);
    bool threshold_emitted = false;
    for (int i = 0; i < steps; ++i) {
        double s = s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
        if (s > tsirelson) s = tsirelson;
        if (!threshold_emitted && th.s_star >= s_lo && th.s_star <= s_hi && th.s_star < s) {
            rows.push_back({key_rate(th.s_star), true});
            threshold_emitted = true;
        }
        rows.push_back({key_rate(s), false});
    }
    if (!threshold_emitted && th.s_star >= s_lo && th.s_star <= s_hi)
        rows.push_back({key_rate(th.s_star), true});
    return rows;
}

std::string keyrate_to_csv(const std::vector<KeyRateRow>& rows) {
    std::ostringstream o;
    o << "s,q,qber,holevo_bound,rate,threshold\n";
    for (const KeyRateRow& r : rows)
        o << format_sig(r.point.s_value) << ',' << format_sig(r.point.q) << ','
          << format_sig(r.point.qber) << ',' << format_sig(r.point.holevo_bound_bits) << ','
          << format_sig(r.point.rate_bits_per_sifted_bit) << ',' << (r.threshold ? "true" : "false")
          << '\n';
    return o.str();
}

std::string keyrate_to_json(const std::vector<KeyRateRow>& rows) {
    std::ostringstream o;
    o << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const KeyRateRow& r = rows[i];
        o << "  {\"s\": " << json_number(r.point.s_value) << ", \"q\": " << json_number(r.point.q)
          << ", \"qber\": " << json_number(r.point.qber)
          << ", \"holevo_bound\": " << json_number(r.point.holevo_bound_bits)
          << ", \"rate\": " << json_number(r.point.rate_bits_per_sifted_bit)
          << ", \"threshold\": " << (r.threshold ? "true" : "false") << "}"
          << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    o << "]\n";
    return o.str();
}

}  // namespace diqkd
