#pragma once

#include <map>
#include <string>
#include <vector>

#include "qfq/scenario.hpp"
#include "qfq/spinstate.hpp"

// Closed-form reports for the four limiting regimes, parameterized directly by
// (gamma, Theta, G) so they can cross-check the general pipeline.
namespace qfq::limits {

enum class Regime { adiabatic_i, nonadiabatic_ii, spacelike_iv, oneway_ii };

const char* to_string(Regime r);

struct LimitReport {
    Regime regime;
    std::map<std::string, double> inputs;
    BlochCoefficients coeffs;
    MeasureReport measures;
    std::map<std::string, double> extras;
    // degenerate bundle realizing this regime (gK_self may be +inf at gamma=0)
    GreensBundle bundle;
};

// gamma_a = 1 limit: gK_AA = gK_BA = 0, gR_AB = gR_BA = Theta.
LimitReport adiabatic_report(double gamma_b, double theta);

// gamma_b = 0 limit (Bob fully decohered): Theta = gR_AB.
LimitReport nonadiabatic_report(double gamma_a, double theta);

// spacelike windows: gR_AB = gR_BA = 0. Requires gk_ba^2 <= ln(ga) ln(gb) / 4.
LimitReport spacelike_report(double gamma_a, double gamma_b, double gk_ba);

// one-way influence A -> B: gR_AB = 0. Requires gr_ba^2/4 + gk_ba^2 <= ln ln /4.
LimitReport oneway_report(double gamma_a, double gamma_b, double gk_ba, double gr_ba);

struct RelevanceRow {
    std::string quantity;       // gR_AB, gR_BA, gK_BA
    bool structurally_zero;     // forced to vanish in this regime
    bool relevant;              // shaded in the regime table
    double value;               // the bundle's actual number
};

std::vector<RelevanceRow> relevance_table(const GreensBundle& g, Regime regime);
// Causal-region variant: IV and II map to their columns, III to the mirrored
// region-II column, I marks all three quantities relevant.
std::vector<RelevanceRow> relevance_table(const GreensBundle& g, CausalRegion region);

}  // namespace qfq::limits
