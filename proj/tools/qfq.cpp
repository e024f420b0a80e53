// qfq: figure reproduction, parameter sweeps, inequality audits, and
// brute-force oracle runs for the two-qubit/scalar-field model. All commands
// emit CSV. Exit codes: 0 success, 1 audit failure, 2 usage error, 3 numeric
// failure.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfq/propagators.hpp"
#include "qfq/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact two-qubit state mediated by a massive scalar field"};
    app.require_subcommand(1);

    std::string fig_id, out_path, config_path;
    int audit_n = 100;
    std::uint64_t audit_seed = 1;
    bool inject_corrupt = false;

    CLI::App* figure = app.add_subcommand("figure", "write one of the built-in figure data sets");
    figure->add_option("id", fig_id, "fig3|fig6|fig7|fig8|fig10|fig11|fig12|fig14")->required();
    figure->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter, tabulating measures");
    sweep->add_option("--config", config_path, "sweep spec JSON")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* audit = app.add_subcommand("audit", "randomized inequality audit (exit 1 on failure)");
    audit->add_option("--n", audit_n, "number of random scenarios");
    audit->add_option("--seed", audit_seed, "random seed");
    audit->add_option("--out", out_path, "output CSV path")->required();
    audit->add_flag("--inject-corrupt", inject_corrupt)->group("");  // sensitivity hook

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "single-mode brute-force comparison");
    oracle_cmd->add_option("--config", config_path, "single-mode config JSON")->required();
    oracle_cmd->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (figure->parsed()) {
            if (!qfq::report::is_figure_id(fig_id)) {
                std::cerr << "unknown figure id: " << fig_id << "\n";
                return 2;
            }
            qfq::report::write_csv(qfq::report::figure_table(fig_id), out_path);
        } else if (sweep->parsed()) {
            const auto spec = qfq::report::sweep_from_json_file(config_path);
            qfq::report::write_csv(qfq::report::sweep_table(spec), out_path);
        } else if (audit->parsed()) {
            if (audit_n < 1) {
                std::cerr << "audit: --n must be positive\n";
                return 2;
            }
            const auto outcome = qfq::report::audit_random(audit_n, audit_seed, inject_corrupt);
            qfq::report::write_csv(outcome.table, out_path);
            if (!outcome.all_pass) {
                std::cerr << "audit: " << outcome.n_failed << " check(s) failed\n";
                return 1;
            }
        } else if (oracle_cmd->parsed()) {
            const auto cfg = qfq::oracle::single_mode_from_json_file(config_path);
            qfq::report::write_csv(qfq::report::oracle_table(cfg), out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qfq::QuadratureError& e) {
        std::cerr << "numeric failure: " << e.what() << " (achieved " << e.achieved_error
                  << ", requested " << e.requested_tol << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
