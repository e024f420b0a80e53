#include "qfq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qfq/bessel.hpp"

namespace qfq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

double distance_to(const FieldPoint& p, const std::array<double, 3>& site) {
    const double dx = p.x[0] - site[0], dy = p.x[1] - site[1], dz = p.x[2] - site[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::vector<double> profile_times(const CouplingProfile& p) {
    std::vector<double> b;
    if (!p.infinite_past) {
        b.push_back(p.t_on());
        b.push_back(p.t_plateau_start());
    }
    b.push_back(p.t_plateau_end());
    b.push_back(p.t_off());
    return b;
}

std::vector<double> segments_in(double lo, double hi, const std::vector<double>& kinks,
                                double wavelength) {
    std::vector<double> pts{lo, hi};
    for (double k : kinks)
        if (k > lo && k < hi) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    std::vector<double> refined;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        refined.push_back(pts[i]);
        const double len = pts[i + 1] - pts[i];
        long n = std::min<long>(static_cast<long>(std::ceil(len / (0.5 * wavelength))), 1L << 14);
        for (long j = 1; j < n; ++j) refined.push_back(pts[i] + len * j / n);
    }
    refined.push_back(pts.back());
    return refined;
}

}  // namespace

Integrated phi_convolution(PropagatorKind kind, const CouplingProfile& profile, double t_f,
                           double r, double m, const QuadSettings& quad) {
    if (!(r > 0.0)) throw std::invalid_argument("phi_convolution: r must be positive");
    if (t_f < profile.t_off())
        throw std::invalid_argument("phi_convolution: t_f precedes switch-off");
    const std::vector<double> kinks = profile_times(profile);
    const double wavelength = 2.0 * kPi / m;

    if (kind == PropagatorKind::retarded) {
        // delta term: lambda(t_f - r) / (4 pi r)
        Integrated out;
        out.value = coupling_at(profile, t_f - r) / (4.0 * kPi * r);
        // regular term over t < t_f - r
        const double hi = std::min(profile.t_off(), t_f - r);
        auto f = [&](double t) {
            return g_retarded_regular(t_f - t, r, m) * coupling_at(profile, t);
        };
        if (!profile.infinite_past) {
            const double lo = profile.t_on();
            if (lo < hi) {
                auto q = integrate_segments(f, segments_in(lo, hi, kinks, wavelength), quad);
                out.value += q.value;
                out.error += q.error;
            }
            return out;
        }
        // unbounded past: plateau tail handled through the closed-form integral
        // int_0^inf J1(mu)/sqrt(u^2+r^2) du = (1 - e^{-mr})/(mr)
        const double t_c = std::min(hi, profile.t_plateau_end());
        if (t_c < hi) {
            auto q = integrate_segments(f, segments_in(t_c, hi, kinks, wavelength), quad);
            out.value += q.value;
            out.error += q.error;
        }
        const double tau0 = t_f - t_c;  // >= r
        const double u0 = std::sqrt(std::max(0.0, tau0 * tau0 - r * r));
        const double total = (1.0 - std::exp(-m * r)) / (m * r);
        auto fj = [&](double u) { return bessel::j1(m * u) / std::sqrt(u * u + r * r); };
        QuadResult head{0.0, 0.0, 0};
        if (u0 > 0.0) head = integrate_segments(fj, segments_in(0.0, u0, {}, wavelength), quad);
        out.value += -(m / (4.0 * kPi)) * profile.lambda_bar * (total - head.value);
        out.error += (m / (4.0 * kPi)) * profile.lambda_bar * head.error;
        return out;
    }

    // Keldysh kind: finite support required (the plateau tail is only
    // conditionally convergent pointwise and is not needed anywhere).
    if (profile.infinite_past)
        throw std::invalid_argument("phi_convolution(keldysh): bounded support required");
    const double lo = profile.t_on(), hi = profile.t_off();
    auto f = [&](double t) {
        return g_keldysh_position(t_f - t, r, m) * coupling_at(profile, t);
    };
    const double t_cone = t_f - r;  // singular line
    Integrated out;
    auto add = [&](const QuadResult& q) {
        out.value += q.value;
        out.error += q.error;
    };
    if (t_cone <= lo || t_cone >= hi) {
        add(integrate_segments(f, segments_in(lo, hi, kinks, wavelength), quad));
        return out;
    }
    // pair samples symmetrically across the cone so the 1/s parts cancel;
    // s is formed algebraically to stay accurate next to the cone
    const double v_pair = std::min(t_cone - lo, hi - t_cone);
    const double v_floor = 1e-13 * r;
    auto paired = [&](double v) {
        v = std::max(v, v_floor);
        // t = t_cone -+ v, so dt = t_f - t = r +- v and s = +-v (2r +- v)
        return g_keldysh_of_s(v * (2.0 * r + v), m) * coupling_at(profile, t_cone - v) +
               g_keldysh_of_s(-v * (2.0 * r - v), m) * coupling_at(profile, t_cone + v);
    };
    std::vector<double> vkinks;
    for (double k : kinks) vkinks.push_back(std::abs(k - t_cone));
    add(integrate_segments(paired, segments_in(0.0, v_pair, vkinks, wavelength), quad));
    if (t_cone - v_pair > lo)
        add(integrate_segments(f, segments_in(lo, t_cone - v_pair, kinks, wavelength), quad));
    if (t_cone + v_pair < hi)
        add(integrate_segments(f, segments_in(t_cone + v_pair, hi, kinks, wavelength), quad));
    return out;
}

Integrated spin_field_correlator(SpinFieldComponent w, const Scenario& s,
                                 const BlochCoefficients& c, const FieldPoint& p) {
    const double t_min = std::max(s.profile_a.t_off(), s.profile_b.t_off());
    if (p.t_f < t_min)
        throw std::invalid_argument("spin_field_correlator: point precedes switch-off");
    const double r_a = distance_to(p, s.position_a());
    const double r_b = distance_to(p, s.position_b());
    auto phi = [&](PropagatorKind kind, const CouplingProfile& prof, double r) {
        return phi_convolution(kind, prof, p.t_f, r, s.mass, s.quad);
    };
    switch (w) {
        case SpinFieldComponent::z_A: {
            if (s.profile_a.lambda_bar == 0.0) return Integrated{0.0, 0.0};
            return phi(PropagatorKind::retarded, s.profile_a, r_a);
        }
        case SpinFieldComponent::z_B: {
            if (s.profile_b.lambda_bar == 0.0) return Integrated{0.0, 0.0};
            return phi(PropagatorKind::retarded, s.profile_b, r_b);
        }
        case SpinFieldComponent::y_A: {
            Integrated out;
            if (c.c_x0 != 0.0 && s.profile_a.lambda_bar != 0.0) {
                auto k = phi(PropagatorKind::keldysh, s.profile_a, r_a);
                out.value += -2.0 * c.c_x0 * k.value;
                out.error += 2.0 * std::abs(c.c_x0) * k.error;
            }
            if (c.c_yz != 0.0 && s.profile_b.lambda_bar != 0.0) {
                auto rr = phi(PropagatorKind::retarded, s.profile_b, r_b);
                out.value += c.c_yz * rr.value;
                out.error += std::abs(c.c_yz) * rr.error;
            }
            return out;
        }
        case SpinFieldComponent::y_B: {
            Integrated out;
            if (c.c_0x != 0.0 && s.profile_b.lambda_bar != 0.0) {
                auto k = phi(PropagatorKind::keldysh, s.profile_b, r_b);
                out.value += -2.0 * c.c_0x * k.value;
                out.error += 2.0 * std::abs(c.c_0x) * k.error;
            }
            if (c.c_zy != 0.0 && s.profile_a.lambda_bar != 0.0) {
                auto rr = phi(PropagatorKind::retarded, s.profile_a, r_a);
                out.value += c.c_zy * rr.value;
                out.error += std::abs(c.c_zy) * rr.error;
            }
            return out;
        }
    }
    return {};
}

ParticleNumbers particle_number(const GreensBundle& g) {
    ParticleNumbers n;
    n.mean = g.gK_AA + g.gK_BB;
    n.second_moment_excess = 4.0 * g.gK_BA * g.gK_BA;
    n.gk_aa = g.gK_AA;
    n.gk_bb = g.gK_BB;
    n.gk_ba = g.gK_BA;
    return n;
}

SpinNumberCorrelators spin_number_correlators(const GreensBundle& g,
                                              const BlochCoefficients& c) {
    SpinNumberCorrelators s;
    const double mean_n = g.gK_AA + g.gK_BB;
    const double n2 = mean_n * mean_n + 4.0 * g.gK_BA * g.gK_BA;  // <:N^2:>

    s.raw_xa_n = (g.gK_BB - g.gK_AA) * c.c_x0 + (g.gR_AB - g.gR_BA) * c.c_yz;
    s.conn_xa_n = s.raw_xa_n - c.c_x0 * mean_n;
    s.raw_xb_n = (g.gK_AA - g.gK_BB) * c.c_0x + (g.gR_BA - g.gR_AB) * c.c_zy;
    s.conn_xb_n = s.raw_xb_n - c.c_0x * mean_n;

    const double dk = g.gK_BB - g.gK_AA;
    const double drr = g.gR_AB - g.gR_BA;
    s.raw_xa_n2 = (dk * dk - drr * drr) * c.c_x0 + 2.0 * drr * dk * c.c_yz;
    s.conn_xa_n2 = s.raw_xa_n2 - c.c_x0 * n2;
    s.raw_xb_n2 = (dk * dk - drr * drr) * c.c_0x + 2.0 * (-drr) * (-dk) * c.c_zy;
    s.conn_xb_n2 = s.raw_xb_n2 - c.c_0x * n2;
    return s;
}

}  // namespace qfq
