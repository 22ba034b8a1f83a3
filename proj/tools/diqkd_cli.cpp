// Command-line front end: protocol simulation from JSON configs, key-rate
// sweeps, optimal-eavesdropper reports, symmetric-angle solving and the
// randomized verification suites.
//
// Exit codes: 0 success, 1 usage/config error, 2 protocol aborted,
// 3 property violation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diqkd/chsh.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/io.hpp"
#include "diqkd/protocol.hpp"
#include "diqkd/security.hpp"
#include "diqkd/verify.hpp"

namespace {

using namespace diqkd;

constexpr double kPi = 3.14159265358979323846;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::string angle_json(const BasisConfig& cfg) {
    std::ostringstream o;
    o << "{\"alice\": [" << format_sig(cfg.alice[0].radians()) << ", "
      << format_sig(cfg.alice[1].radians()) << "], \"bob\": [" << format_sig(cfg.bob[0].radians())
      << ", " << format_sig(cfg.bob[1].radians()) << "]}";
    return o.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& records_path, std::optional<std::uint64_t> seed_override) {
    ProtocolConfig cfg = load_protocol_config(config_path);
    if (seed_override) cfg.seed = *seed_override;

    const ProtocolRun run = run_protocol(cfg);
    write_output(out_path, stats_to_json(run.stats));
    if (!records_path.empty()) write_output(records_path, records_to_csv(run.records));
    return run.stats.aborted ? 2 : 0;
}

int cmd_keyrate_curve(std::optional<double> s_min, std::optional<double> s_max,
                      std::optional<double> q_min, std::optional<double> q_max, int steps,
                      const std::string& out_path, const std::string& format) {
    const double tsirelson = 2.0 * std::sqrt(2.0);
    double lo = 2.0, hi = tsirelson;
    if (q_min || q_max) {
        if (s_min || s_max) throw std::out_of_range("give either an S range or a Q range, not both");
        const RateThreshold th = zero_rate_threshold();
        const double qlo = q_min.value_or(0.0), qhi = q_max.value_or(th.q_star);
        if (!(qlo >= 0.0 && qhi <= th.q_star + 1e-12 && qlo < qhi))
            throw std::out_of_range("Q range must satisfy 0 <= lo < hi <= Q* = " +
                                    format_sig(th.q_star));
        lo = tsirelson * (1.0 - 2.0 * qhi);
        hi = tsirelson * (1.0 - 2.0 * qlo);
    } else {
        lo = s_min.value_or(2.0);
        hi = s_max.value_or(tsirelson);
    }
    const std::vector<KeyRateRow> rows = keyrate_table(lo, hi, steps);
    write_output(out_path, format == "csv" ? keyrate_to_csv(rows) : keyrate_to_json(rows));
    return 0;
}

int cmd_optimal_eve(std::optional<double> q_opt, std::optional<double> s_opt,
                    const std::string& out_path, const std::string& format) {
    if (q_opt.has_value() == s_opt.has_value())
        throw std::out_of_range("give exactly one of --q or --s");
    const double q = q_opt ? *q_opt : q_from_s(*s_opt);
    const EveOptimum opt = optimal_eve_state(q);
    const EveNumericOptimum num = optimize_eve_numeric(q);
    const double werner_entropy = bell_diagonal_entropy(werner_state(q));

    std::ostringstream o;
    if (format == "csv") {
        o << "q,p1,p3,w_phi_plus,w_phi_minus,w_psi_plus,w_psi_minus,entropy_bits,"
             "numeric_p3,numeric_delta,werner_entropy_bits\n";
        o << format_sig(opt.q) << ',' << format_sig(opt.p1) << ',' << format_sig(opt.p3) << ','
          << format_sig(opt.state.w_phi_plus()) << ',' << format_sig(opt.state.w_phi_minus()) << ','
          << format_sig(opt.state.w_psi_plus()) << ',' << format_sig(opt.state.w_psi_minus()) << ','
          << format_sig(opt.entropy_bits) << ',' << format_sig(num.p3_star) << ','
          << format_sig(std::abs(num.p3_star - opt.p3)) << ',' << format_sig(werner_entropy) << '\n';
    } else {
        o << "{\n";
        o << "  \"q\": " << format_sig(opt.q) << ",\n";
        o << "  \"p1\": " << format_sig(opt.p1) << ",\n";
        o << "  \"p3\": " << format_sig(opt.p3) << ",\n";
        o << "  \"weights\": [" << format_sig(opt.state.w_phi_plus()) << ", "
          << format_sig(opt.state.w_phi_minus()) << ", " << format_sig(opt.state.w_psi_plus())
          << ", " << format_sig(opt.state.w_psi_minus()) << "],\n";
        o << "  \"entropy_bits\": " << format_sig(opt.entropy_bits) << ",\n";
        o << "  \"numeric_p3\": " << format_sig(num.p3_star) << ",\n";
        o << "  \"numeric_delta\": " << format_sig(std::abs(num.p3_star - opt.p3)) << ",\n";
        o << "  \"werner_entropy_bits\": " << format_sig(werner_entropy) << "\n";
        o << "}\n";
    }
    write_output(out_path, o.str());
    return 0;
}

int cmd_angles(const std::vector<double>& weights, std::optional<double> q_opt, double theta1,
               const std::string& out_path, const std::string& format) {
    std::optional<BellDiagonalState> state;
    if (q_opt) {
        state = optimal_eve_state(*q_opt).state;
    } else if (!weights.empty()) {
        if (weights.size() != 4) throw std::out_of_range("--weights needs exactly 4 values");
        state = BellDiagonalState(weights[0], weights[1], weights[2], weights[3]);
    } else {
        throw std::out_of_range("give --weights w0,w1,w2,w3 or --q");
    }

    const SymmetricAngles sol = solve_symmetric_angles(*state, MeasurementAngle(theta1));
    const std::array<double, 4> res_primary = check_symmetry_equations(*state, sol.primary);
    const std::array<double, 4> res_mirror = check_symmetry_equations(*state, sol.mirror);
    double max_residual = 0.0;
    for (double r : res_primary) max_residual = std::max(max_residual, std::abs(r));
    for (double r : res_mirror) max_residual = std::max(max_residual, std::abs(r));

    std::ostringstream o;
    if (format == "csv") {
        o << "family,theta1,theta2,phi1,phi2,s_value,max_residual\n";
        const auto row = [&](const char* name, const BasisConfig& c) {
            o << name << ',' << format_sig(c.alice[0].radians()) << ','
              << format_sig(c.alice[1].radians()) << ',' << format_sig(c.bob[0].radians()) << ','
              << format_sig(c.bob[1].radians()) << ',' << format_sig(sol.s_value) << ','
              << format_sig(max_residual) << '\n';
        };
        row("primary", sol.primary);
        row("mirror", sol.mirror);
    } else {
        o << "{\n";
        o << "  \"primary\": " << angle_json(sol.primary) << ",\n";
        o << "  \"mirror\": " << angle_json(sol.mirror) << ",\n";
        o << "  \"s_value\": " << format_sig(sol.s_value) << ",\n";
        o << "  \"violates_classical_bound\": " << (sol.violates_classical_bound ? "true" : "false")
          << ",\n";
        o << "  \"max_residual\": " << format_sig(max_residual) << "\n";
        o << "}\n";
    }
    write_output(out_path, o.str());
    return max_residual > 1e-9 ? 3 : 0;
}

int cmd_verify(const std::string& suite, int trials, std::uint64_t seed,
               const std::string& out_path, const std::string& format) {
    const std::vector<SuiteResult> results = run_verification_suites(suite, trials, seed);
    bool all_pass = true;
    std::ostringstream o;
    if (format == "csv") {
        o << "suite,trials,max_violation,tolerance,pass\n";
        for (const SuiteResult& r : results) {
            o << r.name << ',' << r.trials << ',' << format_sig(r.max_violation) << ','
              << format_sig(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
            all_pass = all_pass && r.pass;
        }
    } else {
        o << "[\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const SuiteResult& r = results[i];
            o << "  {\"suite\": \"" << r.name << "\", \"trials\": " << r.trials
              << ", \"max_violation\": " << format_sig(r.max_violation)
              << ", \"tolerance\": " << format_sig(r.tolerance)
              << ", \"pass\": " << (r.pass ? "true" : "false") << "}"
              << (i + 1 < results.size() ? "," : "") << "\n";
            all_pass = all_pass && r.pass;
        }
        o << "]\n";
    }
    write_output(out_path, o.str());
    if (!all_pass) {
        for (const SuiteResult& r : results)
            if (!r.pass && !r.counterexample.empty()) {
                std::cerr << "counterexample: " << r.counterexample << "\n";
                break;
            }
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric device-independent QKD: simulator, bounds and verification suites"};
    app.require_subcommand(1);

    std::string out_path, format = "json";

    auto* simulate = app.add_subcommand("simulate", "Run the protocol from a JSON config");
    std::string config_path, records_path;
    std::optional<std::uint64_t> seed_override;
    simulate->add_option("--config", config_path, "Path to the JSON config")->required();
    simulate->add_option("--out", out_path, "Stats output file (default: stdout)");
    simulate->add_option("--records", records_path, "Also write per-round records CSV here");
    simulate->add_option("--seed", seed_override, "Override the config seed");

    auto* curve = app.add_subcommand("keyrate-curve", "Sweep the key-rate bound");
    std::optional<double> s_min, s_max, q_min, q_max;
    int steps = 100;
    curve->add_option("--smin", s_min, "Lower S bound (default 2)");
    curve->add_option("--smax", s_max, "Upper S bound (default 2*sqrt(2))");
    curve->add_option("--qmin", q_min, "Lower QBER bound (alternative to S range)");
    curve->add_option("--qmax", q_max, "Upper QBER bound");
    curve->add_option("--steps", steps, "Number of sweep points");
    curve->add_option("--out", out_path, "Output file (default: stdout)");
    curve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* eve = app.add_subcommand("optimal-eve", "Optimal eavesdropper state report");
    std::optional<double> eve_q, eve_s;
    eve->add_option("--q", eve_q, "Disturbance parameter q in [0, 1]");
    eve->add_option("--s", eve_s, "CHSH value in [0, 2*sqrt(2)]");
    eve->add_option("--out", out_path, "Output file (default: stdout)");
    eve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* angles = app.add_subcommand("angles", "Solve the symmetric basis configurations");
    std::vector<double> weights;
    std::optional<double> angles_q;
    double theta1 = kPi / 2.0;
    angles->add_option("--weights", weights, "Four Bell weights w0,w1,w2,w3")->delimiter(',');
    angles->add_option("--q", angles_q, "Use the optimal state at this q instead of --weights");
    angles->add_option("--theta1", theta1, "Anchor angle for Alice's first direction (radians)");
    angles->add_option("--out", out_path, "Output file (default: stdout)");
    angles->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* verify = app.add_subcommand("verify", "Run randomized property suites");
    std::string suite = "all";
    int trials = 1000;
    std::uint64_t verify_seed = 1;
    verify->add_option("--suite", suite,
                       "all, subadditivity, projective, identical, correlator or optimum");
    verify->add_option("--trials", trials, "Trial count per suite")->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "Seed for the randomized suites");
    verify->add_option("--out", out_path, "Output file (default: stdout)");
    verify->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(config_path, out_path, records_path, seed_override);
        if (curve->parsed())
            return cmd_keyrate_curve(s_min, s_max, q_min, q_max, steps, out_path, format);
        if (eve->parsed()) return cmd_optimal_eve(eve_q, eve_s, out_path, format);
        if (angles->parsed()) return cmd_angles(weights, angles_q, theta1, out_path, format);
        if (verify->parsed()) return cmd_verify(suite, trials, verify_seed, out_path, format);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const AsymmetricState& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "no fully symmetric configuration with S > 2 exists unless "
                     "w(Phi-) == w(Psi+)\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
