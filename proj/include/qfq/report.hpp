#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfq/oracle.hpp"
#include "qfq/scenario.hpp"

// CSV-producing drivers behind the command-line front end. All output is
// deterministic: fixed 17-significant-digit scientific formatting, rows in
// input order regardless of worker count.
namespace qfq::report {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string format_number(double v);
std::string csv_text(const Table& t);
void write_csv(const Table& t, const std::string& path);

// Figure data sets. Abstract-parameter curves (figs 3, 6-11) run through the
// closed-form limit reports; physical-parameter curves (figs 12, 14) run the
// full quadrature pipeline on the hard-coded parameter sets.
bool is_figure_id(const std::string& id);
Table figure_table(const std::string& id);

// the figure sweeps, exposed for reuse by the acceptance checks
std::vector<double> fig12_distance_grid();
std::vector<double> fig14_ramp_grid();
Scenario fig12_scenario(double distance);
Scenario fig14_scenario(double t_off_a_ramp);

struct SweepSpec {
    std::string mode;  // scenario | adiabatic | nonadiabatic | spacelike | oneway
    Scenario base;     // scenario mode only
    std::vector<std::pair<std::string, double>> params;  // abstract modes
    std::string param;
    double start = 0.0, stop = 1.0;
    int count = 2;
    bool log_scale = false;
    std::vector<std::string> outputs;
};

SweepSpec sweep_from_json_text(const std::string& text);
SweepSpec sweep_from_json_file(const std::string& path);
Table sweep_table(const SweepSpec& spec);

struct AuditOutcome {
    Table table;
    bool all_pass = true;
    int n_failed = 0;
};

// Randomized full-pipeline audit: n scenarios from the documented sampling
// ranges, every inequality row plus the region/separability consistency
// check. inject_corrupt adds one hand-built unphysical bundle (sensitivity
// check; guaranteed to fail).
AuditOutcome audit_random(int n, std::uint64_t seed, bool inject_corrupt = false);

Table oracle_table(const oracle::SingleModeConfig& cfg);

// order-preserving parallel map; worker count from QFQ_THREADS (default 1)
int worker_count();

}  // namespace qfq::report
