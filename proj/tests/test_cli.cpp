#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qfq/report.hpp"

using namespace qfq;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QFQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
}

}  // namespace

TEST_CASE("cli: audit runs clean, deterministically, and detects corruption") {
    const std::string out1 = "/tmp/qfq_test_audit1.csv";
    const std::string out2 = "/tmp/qfq_test_audit2.csv";
    CHECK(run_cli("audit --n 6 --seed 42 --out " + out1) == 0);
    CHECK(run_cli("audit --n 6 --seed 42 --out " + out2) == 0);
    const std::string b1 = slurp(out1), b2 = slurp(out2);
    CHECK(!b1.empty());
    CHECK(b1 == b2);  // byte-identical for identical seed
    CHECK(b1.rfind("scenario,region,check", 0) == 0);

    // worker count must not change a single byte
    const int rc = std::system(("QFQ_THREADS=3 " + std::string(QFQ_CLI_PATH) +
                                " audit --n 6 --seed 42 --out " + out2 + " >/dev/null 2>&1")
                                   .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(slurp(out2) == b1);

    CHECK(run_cli("audit --n 2 --seed 7 --inject-corrupt --out " + out1) == 1);
}

TEST_CASE("cli: exit codes for usage errors") {
    CHECK(run_cli("figure nosuchfig --out /tmp/qfq_x.csv") == 2);
    CHECK(run_cli("bogus-subcommand") == 2);
    CHECK(run_cli("figure fig3") == 2);  // missing --out
    CHECK(run_cli("figure fig3 --out /nonexistent-dir/x.csv") == 2);
}

TEST_CASE("cli: figure values (fig3 origin, fig6 maximum)") {
    const std::string path = "/tmp/qfq_test_fig3.csv";
    CHECK(run_cli("figure fig3 --out " + path) == 0);
    std::ifstream in(path);
    std::string header, first;
    std::getline(in, header);
    CHECK(header == "theta,entropy_over_ln2,visibility_sq,distinguishability_sq,negativity");
    std::getline(in, first);
    auto cells = split(first, ',');
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[0]) == doctest::Approx(0.0));
    CHECK(std::stod(cells[1]) == doctest::Approx(0.0));
    CHECK(std::stod(cells[2]) == doctest::Approx(1.0));

    const std::string p6 = "/tmp/qfq_test_fig6.csv";
    CHECK(run_cli("figure fig6 --out " + p6) == 0);
    std::ifstream in6(p6);
    std::string line;
    std::getline(in6, line);  // header
    bool found = false;
    while (std::getline(in6, line)) {
        auto c = split(line, ',');
        if (std::abs(std::stod(c[0]) - M_PI / 4) < 1e-12) {
            found = true;
            CHECK(std::stod(c.back()) == doctest::Approx(0.5).epsilon(1e-12));  // gamma_b = 1
            CHECK(std::stod(c[1]) == doctest::Approx(0.0).epsilon(1e-12));      // gamma_b = 0
        }
    }
    CHECK(found);
}

TEST_CASE("cli: sweep over the spacelike decay") {
    const std::string cfg = "/tmp/qfq_test_sweep.json";
    {
        std::ofstream out(cfg);
        out << R"({
          "mode": "scenario",
          "base": {"mass": 1.0, "distance": 9.0,
            "profile_a": {"lambda_bar": 1.0, "t_on": 0.0, "T_on": 2.0, "T_plateau": 4.0, "T_off": 2.0},
            "profile_b": {"lambda_bar": 1.0, "t_on": 0.0, "T_on": 2.0, "T_plateau": 4.0, "T_off": 2.0}},
          "sweep": {"param": "distance", "start": 9.0, "stop": 14.0, "count": 6, "scale": "linear"},
          "outputs": ["gk_ba", "i_ab", "negativity"]
        })";
    }
    const std::string out = "/tmp/qfq_test_sweep.csv";
    CHECK(run_cli("sweep --config " + cfg + " --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "distance,gk_ba,i_ab,negativity,error");
    double prev = 1e9;
    int rows = 0;
    while (std::getline(in, line)) {
        auto c = split(line, ',');
        REQUIRE(c.size() == 5);
        const double gk = std::stod(c[1]);
        CHECK(gk > 0.0);
        CHECK(gk < prev);  // monotone decay with distance
        CHECK(std::stod(c[3]) <= 1e-12);  // spacelike: no entanglement
        CHECK(c[4] == "0");
        prev = gk;
        ++rows;
    }
    CHECK(rows == 6);
}

TEST_CASE("cli: sweep spec validation") {
    CHECK_THROWS_AS(report::sweep_from_json_text(R"({
        "mode": "adiabatic", "params": {"gamma_b": 0.5},
        "sweep": {"param": "theta", "start": 0, "stop": 1, "count": 1},
        "outputs": ["negativity"]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(report::sweep_from_json_text(R"({
        "mode": "adiabatic", "params": {"gamma_b": 0.5},
        "sweep": {"param": "theta", "start": 0, "stop": 1, "count": 5},
        "outputs": []})"),
                    std::invalid_argument);
}

TEST_CASE("cli: abstract sweep matches the figure data path") {
    report::SweepSpec spec;
    spec.mode = "adiabatic";
    spec.params = {{"gamma_b", 0.5}};
    spec.param = "theta";
    spec.start = 0.0;
    spec.stop = M_PI;
    spec.count = 21;
    spec.outputs = {"i_ab"};
    const report::Table t = report::sweep_table(spec);
    REQUIRE(t.rows.size() == 21);
    // same code path as cmd_figure(fig7): spot-check the closed form
    const double th = std::stod(t.rows[10][0]);
    const double expect = sigma_entropy(std::cos(2 * th)) +
                          sigma_entropy(0.5 * std::cos(2 * th)) - sigma_entropy(0.5);
    CHECK(std::stod(t.rows[10][1]) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("cli: oracle command emits small deltas") {
    const std::string cfg = "/tmp/qfq_test_oracle.json";
    {
        std::ofstream out(cfg);
        out << R"({"omega": 1.2, "n_max": 12, "dt": 0.02,
                   "profile_a": {"lambda_bar": 0.1, "t_on": 0.0, "T_on": 1.0, "T_plateau": 1.0, "T_off": 1.0},
                   "profile_b": {"lambda_bar": 0.12, "t_on": 0.2, "T_on": 0.8, "T_plateau": 1.0, "T_off": 1.0}})";
    }
    const std::string out = "/tmp/qfq_test_oracle.csv";
    CHECK(run_cli("oracle --config " + cfg + " --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "quantity,analytic,brute_force,abs_delta");
    while (std::getline(in, line)) {
        auto c = split(line, ',');
        if (c[0].rfind("re_rho", 0) == 0 || c[0].rfind("im_rho", 0) == 0 || c[0] == "mean_n")
            CHECK(std::stod(c[3]) < 1e-6);
    }
    // zero-coupling config: all deltas identically zero
    {
        std::ofstream outc(cfg);
        outc << R"({"omega": 1.0, "n_max": 6, "dt": 0.05,
                   "profile_a": {"lambda_bar": 0.0, "t_on": 0.0, "T_on": 1.0, "T_plateau": 1.0, "T_off": 1.0},
                   "profile_b": {"lambda_bar": 0.0, "t_on": 0.0, "T_on": 1.0, "T_plateau": 1.0, "T_off": 1.0}})";
    }
    CHECK(run_cli("oracle --config " + cfg + " --out " + out) == 0);
    std::ifstream in2(out);
    std::getline(in2, line);
    while (std::getline(in2, line)) {
        auto c = split(line, ',');
        if (c[0].rfind("re_rho", 0) == 0 || c[0] == "mean_n")
            CHECK(std::stod(c[3]) < 1e-14);
    }
}
