#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qfq/quadrature.hpp"

namespace qfq {

// Trapezoidal switching of one qubit-field coupling: linear ramp-up over
// ramp_on, constant plateau, linear ramp-down over ramp_off. The absolute
// anchor is t_end (the instant the coupling is fully off), which stays
// meaningful for profiles switched on in the infinite past.
struct CouplingProfile {
    double lambda_bar = 0.0;
    double ramp_on = 0.0;   // T_on
    double plateau = 0.0;   // T_plateau
    double ramp_off = 0.0;  // T_off
    double t_end = 0.0;     // t_off (absolute)
    bool infinite_past = false;

    static CouplingProfile trapezoid(double lambda_bar, double t_on, double ramp_on,
                                     double plateau, double ramp_off) {
        CouplingProfile p;
        p.lambda_bar = lambda_bar;
        p.ramp_on = ramp_on;
        p.plateau = plateau;
        p.ramp_off = ramp_off;
        p.t_end = t_on + ramp_on + plateau + ramp_off;
        return p;
    }

    static CouplingProfile from_infinite_past(double lambda_bar, double t_off, double ramp_off) {
        CouplingProfile p;
        p.lambda_bar = lambda_bar;
        p.ramp_on = std::numeric_limits<double>::infinity();
        p.plateau = std::numeric_limits<double>::infinity();
        p.ramp_off = ramp_off;
        p.t_end = t_off;
        p.infinite_past = true;
        return p;
    }

    double t_off() const { return t_end; }
    double t_plateau_end() const { return t_end - ramp_off; }
    double t_plateau_start() const {
        return infinite_past ? -std::numeric_limits<double>::infinity()
                             : t_plateau_end() - plateau;
    }
    double t_on() const {
        return infinite_past ? -std::numeric_limits<double>::infinity()
                             : t_plateau_start() - ramp_on;
    }
};

struct Scenario {
    double mass = 1.0;
    double distance = 1.0;
    CouplingProfile profile_a, profile_b;
    QuadSettings quad;

    // spin positions: A at the origin, B displaced along x
    std::array<double, 3> position_a() const { return {0.0, 0.0, 0.0}; }
    std::array<double, 3> position_b() const { return {distance, 0.0, 0.0}; }
};

// causal relation of the two coupling windows:
// I = influence both ways, II = only A->B, III = only B->A, IV = neither
enum class CausalRegion { I, II, III, IV };

const char* to_string(CausalRegion r);

double coupling_at(const CouplingProfile& p, double t);

// (1/lambda_bar) * integral of lambda(t) dt  = plateau + (ramp_on + ramp_off)/2
double effective_duration(const CouplingProfile& p);

CausalRegion classify_region(const Scenario& s);

// Every violated invariant, with a field path; empty means valid.
std::vector<std::string> validate(const Scenario& s);

// Throws std::invalid_argument listing all violations.
Scenario validated(const Scenario& s);

// JSON scenario files (keys: mass, distance, profile_a, profile_b, quad).
// Unknown keys are rejected. Profiles switched on in the infinite past give
// t_off instead of t_on/T_on/T_plateau.
Scenario scenario_from_json_text(const std::string& text);
Scenario scenario_from_json_file(const std::string& path);
std::string scenario_to_json_text(const Scenario& s);

}  // namespace qfq
