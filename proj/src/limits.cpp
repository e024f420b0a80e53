#include "qfq/limits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfq::limits {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
const double kInf = std::numeric_limits<double>::infinity();

void require_unit_interval(double g, const char* name) {
    if (!(g >= 0.0 && g <= 1.0))
        throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

// gK_self realizing a given decoherence factor; +inf at gamma = 0
double gk_self_of(double gamma) { return gamma > 0.0 ? -0.5 * std::log(gamma) : kInf; }

GreensBundle make_bundle(double gamma_a, double gamma_b, double gr_ab, double gr_ba,
                         double gk_ba) {
    GreensBundle g;
    g.gamma_a = gamma_a;
    g.gamma_b = gamma_b;
    g.gK_AA = gk_self_of(gamma_a);
    g.gK_BB = gk_self_of(gamma_b);
    g.gR_AB = gr_ab;
    g.gR_BA = gr_ba;
    g.gK_BA = gk_ba;
    return g;
}

LimitReport build(Regime regime, const GreensBundle& bundle) {
    LimitReport r;
    r.regime = regime;
    r.bundle = bundle;
    r.coeffs = bloch_coefficients(bundle);
    r.measures = measures(r.coeffs);
    r.extras["averaged_distinguishability"] =
        0.5 * (r.measures.d_a * r.measures.d_a + r.measures.d_b * r.measures.d_b);
    return r;
}

}  // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::adiabatic_i: return "adiabatic_i";
        case Regime::nonadiabatic_ii: return "nonadiabatic_ii";
        case Regime::spacelike_iv: return "spacelike_IV";
        case Regime::oneway_ii: return "oneway_II";
    }
    return "?";
}

LimitReport adiabatic_report(double gamma_b, double theta) {
    require_unit_interval(gamma_b, "gamma_b");
    LimitReport r = build(Regime::adiabatic_i, make_bundle(1.0, gamma_b, theta, theta, 0.0));
    r.inputs = {{"gamma_b", gamma_b}, {"theta", theta}};
    // closed forms of the regime, recorded beside the pipeline values
    r.extras["i_ab_closed"] = sigma_entropy(std::cos(2.0 * theta)) +
                              sigma_entropy(gamma_b * std::cos(2.0 * theta)) -
                              sigma_entropy(gamma_b);
    r.extras["negativity_closed"] = std::max(
        0.0, -0.25 * (1.0 - gamma_b -
                      std::sqrt(1.0 + gamma_b * gamma_b -
                                2.0 * gamma_b * std::cos(4.0 * theta))));
    const double s2 = std::sin(2.0 * theta);
    r.extras["averaged_distinguishability_closed"] =
        0.5 * (1.0 + gamma_b * gamma_b) * s2 * s2;
    r.extras["i_aphi_closed"] = sigma_entropy(std::cos(2.0 * theta)) + sigma_entropy(gamma_b) -
                                sigma_entropy(gamma_b * std::cos(2.0 * theta));
    r.extras["i_bphi_closed"] = sigma_entropy(gamma_b * std::cos(2.0 * theta)) +
                                sigma_entropy(gamma_b) - sigma_entropy(std::cos(2.0 * theta));
    return r;
}

LimitReport nonadiabatic_report(double gamma_a, double theta) {
    require_unit_interval(gamma_a, "gamma_a");
    LimitReport r = build(Regime::nonadiabatic_ii, make_bundle(gamma_a, 0.0, theta, 0.0, 0.0));
    r.inputs = {{"gamma_a", gamma_a}, {"theta", theta}};
    r.extras["s_ab_closed"] = kLn2 + sigma_entropy(gamma_a);
    r.extras["i_ab_closed"] =
        sigma_entropy(gamma_a * std::cos(2.0 * theta)) - sigma_entropy(gamma_a);
    // conditional-entropy bounds specific to the decohered form of the state
    r.extras["i_ab_le_min_entropy"] =
        (r.measures.i_ab <= std::min(r.measures.s_a, r.measures.s_b) + 1e-12) ? 1.0 : 0.0;
    r.extras["s_ab_ge_max_entropy"] =
        (r.measures.s_ab >= std::max(r.measures.s_a, r.measures.s_b) - 1e-12) ? 1.0 : 0.0;
    return r;
}

LimitReport spacelike_report(double gamma_a, double gamma_b, double gk_ba) {
    require_unit_interval(gamma_a, "gamma_a");
    require_unit_interval(gamma_b, "gamma_b");
    const double bound = 0.25 * std::log(gamma_a) * std::log(gamma_b);
    if (gk_ba * gk_ba > bound + 1e-12)
        throw std::domain_error("spacelike_report: unphysical parameters (gK_BA^2 > gK_AA gK_BB)");
    LimitReport r = build(Regime::spacelike_iv, make_bundle(gamma_a, gamma_b, 0.0, 0.0, gk_ba));
    r.inputs = {{"gamma_a", gamma_a}, {"gamma_b", gamma_b}, {"gk_ba", gk_ba}};
    r.extras["corr_xx_closed"] = gamma_a * gamma_b * (std::cosh(4.0 * gk_ba) - 1.0);
    r.extras["corr_yy_closed"] = gamma_a * gamma_b * std::sinh(4.0 * gk_ba);
    return r;
}

LimitReport oneway_report(double gamma_a, double gamma_b, double gk_ba, double gr_ba) {
    require_unit_interval(gamma_a, "gamma_a");
    require_unit_interval(gamma_b, "gamma_b");
    const double bound = 0.25 * std::log(gamma_a) * std::log(gamma_b);
    if (0.25 * gr_ba * gr_ba + gk_ba * gk_ba > bound + 1e-12)
        throw std::domain_error(
            "oneway_report: unphysical parameters (gR_BA^2/4 + gK_BA^2 > gK_AA gK_BB)");
    LimitReport r = build(Regime::oneway_ii, make_bundle(gamma_a, gamma_b, 0.0, gr_ba, gk_ba));
    r.inputs = {{"gamma_a", gamma_a},
                {"gamma_b", gamma_b},
                {"gk_ba", gk_ba},
                {"gr_ba", gr_ba}};
    r.extras["corr_xx_closed"] =
        gamma_a * gamma_b * (std::cosh(4.0 * gk_ba) - std::cos(2.0 * gr_ba));
    r.extras["corr_yy_closed"] = gamma_a * gamma_b * std::sinh(4.0 * gk_ba);
    r.extras["corr_zy_closed"] = -gamma_b * std::sin(2.0 * gr_ba);
    const double s = std::sin(2.0 * gr_ba);
    r.extras["duality_check"] =
        (gamma_a * gamma_a + gamma_b * gamma_b * s * s <= 1.0 + 1e-12) ? 1.0 : 0.0;
    return r;
}

namespace {

std::vector<RelevanceRow> table_for(const GreensBundle& g, bool zero_ab, bool zero_ba,
                                    bool zero_kba, bool rel_ab, bool rel_ba, bool rel_kba) {
    return {{"gR_AB", zero_ab, rel_ab, g.gR_AB},
            {"gR_BA", zero_ba, rel_ba, g.gR_BA},
            {"gK_BA", zero_kba, rel_kba, g.gK_BA}};
}

}  // namespace

std::vector<RelevanceRow> relevance_table(const GreensBundle& g, Regime regime) {
    switch (regime) {
        case Regime::adiabatic_i:
            // gK_BA forced to zero; the common retarded angle carries everything
            return table_for(g, false, false, true, true, true, false);
        case Regime::nonadiabatic_ii:
            // Bob fully decohered: only the influence from Bob to Alice matters
            return table_for(g, false, false, false, true, false, false);
        case Regime::spacelike_iv:
            return table_for(g, true, true, false, false, false, true);
        case Regime::oneway_ii:
            return table_for(g, true, false, false, false, true, true);
    }
    return {};
}

std::vector<RelevanceRow> relevance_table(const GreensBundle& g, CausalRegion region) {
    switch (region) {
        case CausalRegion::IV: return relevance_table(g, Regime::spacelike_iv);
        case CausalRegion::II: return relevance_table(g, Regime::oneway_ii);
        case CausalRegion::III: {
            // mirror of region II under A <-> B
            return table_for(g, false, true, false, true, false, true);
        }
        case CausalRegion::I: return table_for(g, false, false, false, true, true, true);
    }
    return {};
}

}  // namespace qfq::limits
