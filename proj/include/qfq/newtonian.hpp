#pragma once

#include <cmath>
#include <stdexcept>

#include "qfq/propagators.hpp"
#include "qfq/scenario.hpp"
#include "qfq/spinstate.hpp"

// Instantaneous-potential approximation: the whole state is a function of the
// single dimensionless angle Theta = Jbar * (effective interaction time).
namespace qfq::newtonian {

inline double jbar(double lambda_a, double lambda_b, double m, double D) {
    if (!(m > 0.0)) throw std::domain_error("jbar: mass must be positive");
    if (!(D > 0.0)) throw std::domain_error("jbar: distance must be positive");
    return lambda_a * lambda_b * std::exp(-m * D) / (4.0 * 3.141592653589793238462643 * D);
}

struct NewtonianPoint {
    double theta = 0.0;
    double entropy = 0.0;
    double negativity = 0.0;
    double visibility = 1.0;
    double distinguishability = 0.0;
};

inline NewtonianPoint newtonian_point(double theta) {
    NewtonianPoint p;
    p.theta = theta;
    p.entropy = sigma_entropy(std::cos(2.0 * theta));
    p.visibility = std::abs(std::cos(2.0 * theta));
    p.distinguishability = std::abs(std::sin(2.0 * theta));
    p.negativity = 0.5 * std::abs(std::sin(2.0 * theta));
    return p;
}

inline double theta_from_scenario(const Scenario& s) {
    return jbar(s.profile_a.lambda_bar, s.profile_b.lambda_bar, s.mass, s.distance) *
           effective_duration(s.profile_b);
}

// How far a computed bundle sits from the Newtonian regime.
struct NewtonianComparison {
    double dgr_ba = 0.0;  // |gR_BA - Theta|
    double dgr_ab = 0.0;
    double gk_aa = 0.0, gk_bb = 0.0, gk_ba = 0.0;
};

inline NewtonianComparison newtonian_consistency(const GreensBundle& g, double theta) {
    NewtonianComparison c;
    c.dgr_ba = std::abs(g.gR_BA - theta);
    c.dgr_ab = std::abs(g.gR_AB - theta);
    c.gk_aa = g.gK_AA;
    c.gk_bb = g.gK_BB;
    c.gk_ba = g.gK_BA;
    return c;
}

}  // namespace qfq::newtonian
