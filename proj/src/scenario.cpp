#include "qfq/scenario.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qfq {

using nlohmann::json;

const char* to_string(CausalRegion r) {
    switch (r) {
        case CausalRegion::I: return "I";
        case CausalRegion::II: return "II";
        case CausalRegion::III: return "III";
        case CausalRegion::IV: return "IV";
    }
    return "?";
}

double coupling_at(const CouplingProfile& p, double t) {
    if (t >= p.t_end) return 0.0;
    if (t > p.t_plateau_end()) {
        return p.lambda_bar * (p.t_end - t) / p.ramp_off;
    }
    if (p.infinite_past) return p.lambda_bar;
    if (t >= p.t_plateau_start()) return p.lambda_bar;
    if (t > p.t_on()) return p.lambda_bar * (t - p.t_on()) / p.ramp_on;
    return 0.0;
}

double effective_duration(const CouplingProfile& p) {
    if (p.infinite_past)
        throw std::invalid_argument("effective_duration: unbounded support");
    return p.plateau + 0.5 * (p.ramp_on + p.ramp_off);
}

CausalRegion classify_region(const Scenario& s) {
    // The massive retarded kernel is supported on the whole interior of the
    // forward cone, so X can influence Y iff some emission can arrive while
    // Y is still coupled: t_off^Y - t_on^X >= D. Equality (cone contact)
    // counts as connected; G_R carries a delta right on the cone.
    const double D = s.distance;
    const bool a_to_b = s.profile_b.t_off() - s.profile_a.t_on() >= D;
    const bool b_to_a = s.profile_a.t_off() - s.profile_b.t_on() >= D;
    if (a_to_b && b_to_a) return CausalRegion::I;
    if (a_to_b) return CausalRegion::II;
    if (b_to_a) return CausalRegion::III;
    return CausalRegion::IV;
}

namespace {

void validate_profile(const CouplingProfile& p, const std::string& path,
                      std::vector<std::string>& errs) {
    if (!(p.lambda_bar >= 0.0))
        errs.push_back(path + ".lambda_bar must be nonnegative");
    if (!(p.ramp_off >= 0.0)) errs.push_back(path + ".T_off must be nonnegative");
    if (!std::isfinite(p.t_end)) errs.push_back(path + ".t_off must be finite");
    if (!p.infinite_past) {
        if (!(p.ramp_on >= 0.0)) errs.push_back(path + ".T_on must be nonnegative");
        if (!(p.plateau >= 0.0)) errs.push_back(path + ".T_plateau must be nonnegative");
        if (!std::isfinite(p.t_on())) errs.push_back(path + ".t_on must be finite");
    }
}

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> errs;
    if (!(s.mass > 0.0)) errs.push_back("mass must be positive");
    if (!(s.distance > 0.0)) errs.push_back("distance must be positive");
    validate_profile(s.profile_a, "profile_a", errs);
    validate_profile(s.profile_b, "profile_b", errs);
    if (!(s.quad.abs_tol > 0.0)) errs.push_back("quad.abs_tol must be positive");
    if (!(s.quad.rel_tol > 0.0)) errs.push_back("quad.rel_tol must be positive");
    if (s.quad.max_subdiv < 1) errs.push_back("quad.max_subdiv must be at least 1");
    if (s.quad.k_max < 0.0) errs.push_back("quad.k_max must be nonnegative");
    return errs;
}

Scenario validated(const Scenario& s) {
    auto errs = validate(s);
    if (!errs.empty()) {
        std::ostringstream os;
        os << "invalid scenario:";
        for (const auto& e : errs) os << "\n  - " << e;
        throw std::invalid_argument(os.str());
    }
    return s;
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("unknown key \"" + it.key() + "\" in " + where);
    }
}

CouplingProfile profile_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(
        j, {"lambda_bar", "t_on", "T_on", "T_plateau", "T_off", "t_off", "infinite_past"},
        where);
    const bool inf_past = j.value("infinite_past", false);
    const double lb = j.at("lambda_bar").get<double>();
    const double t_off_ramp = j.at("T_off").get<double>();
    if (inf_past) {
        for (const char* k : {"t_on", "T_on", "T_plateau"})
            if (j.contains(k))
                throw std::invalid_argument(where + ": \"" + k +
                                            "\" is meaningless with infinite_past");
        if (!j.contains("t_off"))
            throw std::invalid_argument(where + ": infinite_past profiles need \"t_off\"");
        return CouplingProfile::from_infinite_past(lb, j.at("t_off").get<double>(), t_off_ramp);
    }
    CouplingProfile p = CouplingProfile::trapezoid(
        lb, j.at("t_on").get<double>(), j.at("T_on").get<double>(),
        j.at("T_plateau").get<double>(), t_off_ramp);
    if (j.contains("t_off")) {
        const double given = j.at("t_off").get<double>();
        if (std::abs(given - p.t_end) > 1e-9 * (1.0 + std::abs(given)))
            throw std::invalid_argument(where + ": redundant t_off inconsistent with durations");
    }
    return p;
}

json profile_to_json(const CouplingProfile& p) {
    json j;
    j["lambda_bar"] = p.lambda_bar;
    j["T_off"] = p.ramp_off;
    if (p.infinite_past) {
        j["infinite_past"] = true;
        j["t_off"] = p.t_end;
    } else {
        j["t_on"] = p.t_on();
        j["T_on"] = p.ramp_on;
        j["T_plateau"] = p.plateau;
    }
    return j;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j = json::parse(text);
    reject_unknown_keys(j, {"mass", "distance", "profile_a", "profile_b", "quad"}, "scenario");
    Scenario s;
    s.mass = j.at("mass").get<double>();
    s.distance = j.at("distance").get<double>();
    s.profile_a = profile_from_json(j.at("profile_a"), "profile_a");
    s.profile_b = profile_from_json(j.at("profile_b"), "profile_b");
    if (j.contains("quad")) {
        const json& q = j.at("quad");
        reject_unknown_keys(q, {"abs_tol", "rel_tol", "max_subdiv", "k_max_policy"}, "quad");
        s.quad.abs_tol = q.value("abs_tol", s.quad.abs_tol);
        s.quad.rel_tol = q.value("rel_tol", s.quad.rel_tol);
        s.quad.max_subdiv = q.value("max_subdiv", s.quad.max_subdiv);
        if (q.contains("k_max_policy")) {
            const json& kp = q.at("k_max_policy");
            if (kp.is_string()) {
                if (kp.get<std::string>() != "auto")
                    throw std::invalid_argument("quad.k_max_policy: \"auto\" or a number");
                s.quad.k_max = 0.0;
            } else {
                s.quad.k_max = kp.get<double>();
            }
        }
    }
    return validated(s);
}

Scenario scenario_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["mass"] = s.mass;
    j["distance"] = s.distance;
    j["profile_a"] = profile_to_json(s.profile_a);
    j["profile_b"] = profile_to_json(s.profile_b);
    j["quad"] = {{"abs_tol", s.quad.abs_tol},
                 {"rel_tol", s.quad.rel_tol},
                 {"max_subdiv", s.quad.max_subdiv},
                 {"k_max_policy", s.quad.k_max > 0.0 ? json(s.quad.k_max) : json("auto")}};
    return j.dump(2);
}

}  // namespace qfq
