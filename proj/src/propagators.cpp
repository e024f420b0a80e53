#include "qfq/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "qfq/bessel.hpp"

namespace qfq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// J1(x)/x, finite at the origin
double j1_over_x(double x) {
    if (x < 1e-8) return 0.5 - x * x / 16.0;
    return bessel::j1(x) / x;
}

std::vector<double> finite_profile_breakpoints(const CouplingProfile& p) {
    std::vector<double> b;
    if (!p.infinite_past) {
        b.push_back(p.t_on());
        b.push_back(p.t_plateau_start());
    }
    b.push_back(p.t_plateau_end());
    b.push_back(p.t_off());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

// 3-point Gauss-Legendre, exact through degree 5 (the integrand below is
// piecewise quadratic between breakpoints)
double gauss3(const std::function<double(double)>& f, double a, double b) {
    static const double x1 = 0.774596669241483377035853079956480;
    static const double w0 = 8.0 / 9.0, w1 = 5.0 / 9.0;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    return h * (w0 * f(c) + w1 * (f(c - h * x1) + f(c + h * x1)));
}

}  // namespace

std::vector<std::string> bundle_violations(const GreensBundle& g, double slack) {
    std::vector<std::string> v;
    if (g.gK_AA < -slack) v.push_back("gK_AA < 0");
    if (g.gK_BB < -slack) v.push_back("gK_BB < 0");
    if (g.gK_AA + g.gK_BB + 2.0 * g.gK_BA < -slack) v.push_back("gK_AA + gK_BB + 2 gK_BA < 0");
    if (g.gK_AA + g.gK_BB - 2.0 * g.gK_BA < -slack) v.push_back("gK_AA + gK_BB - 2 gK_BA < 0");
    if (g.gK_AA * g.gK_BB - g.gK_BA * g.gK_BA < -slack) v.push_back("gK_AA gK_BB < gK_BA^2");
    const double dr = g.gR_BA - g.gR_AB;
    if (dr * dr - 4.0 * (g.gK_AA * g.gK_BB - g.gK_BA * g.gK_BA) > slack)
        v.push_back("(gR_BA - gR_AB)^2 > 4 (gK_AA gK_BB - gK_BA^2)");
    if (std::abs(g.gamma_a - std::exp(-2.0 * g.gK_AA)) > slack)
        v.push_back("gamma_a != exp(-2 gK_AA)");
    if (std::abs(g.gamma_b - std::exp(-2.0 * g.gK_BB)) > slack)
        v.push_back("gamma_b != exp(-2 gK_BB)");
    return v;
}

double g_retarded_regular(double dt, double r, double m) {
    if (dt <= 0.0) return 0.0;
    const double s = dt * dt - r * r;
    if (s <= 0.0) return 0.0;
    const double root = std::sqrt(s);
    return -(m * m / (4.0 * kPi)) * j1_over_x(m * root);
}

double g_keldysh_of_s(double s, double m) {
    if (s == 0.0)
        throw std::domain_error("g_keldysh_position: singular on the light cone (s = 0)");
    if (s > 0.0) {
        const double root = std::sqrt(s);
        return (m / (4.0 * kPi * kPi)) * (kPi / 2.0) * bessel::y1(m * root) / root;
    }
    const double root = std::sqrt(-s);
    return (m / (4.0 * kPi * kPi)) * bessel::k1(m * root) / root;
}

double g_keldysh_position(double dt, double r, double m) {
    return g_keldysh_of_s(dt * dt - r * r, m);
}

double profile_cross_correlation(const CouplingProfile& dst, const CouplingProfile& src,
                                 double tau) {
    if (dst.infinite_past && src.infinite_past)
        throw std::invalid_argument("cross-correlation undefined for two unbounded profiles");
    // Integrate over whichever profile has bounded support; if it is src,
    // substitute u = t - tau first. Either way the other profile's support is
    // shifted by +-tau before clipping.
    const bool over_dst = !dst.infinite_past;
    const CouplingProfile& w = over_dst ? dst : src;
    double lo = w.t_on(), hi = w.t_off();
    const CouplingProfile& o = over_dst ? src : dst;
    const double shift = over_dst ? tau : -tau;
    const double o_lo = o.t_on(), o_hi = o.t_off();
    lo = std::max(lo, o_lo + shift);
    hi = std::min(hi, o_hi + shift);
    if (!(lo < hi)) return 0.0;
    std::vector<double> pts{lo, hi};
    for (double b : finite_profile_breakpoints(w))
        if (b > lo && b < hi) pts.push_back(b);
    for (double b : finite_profile_breakpoints(o)) {
        const double t = b + shift;
        if (t > lo && t < hi) pts.push_back(t);
    }
    std::sort(pts.begin(), pts.end());
    auto f = over_dst
                 ? std::function<double(double)>([&](double t) {
                       return coupling_at(dst, t) * coupling_at(src, t - tau);
                   })
                 : std::function<double(double)>([&](double u) {
                       return coupling_at(dst, u + tau) * coupling_at(src, u);
                   });
    double sum = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i] < pts[i + 1]) sum += gauss3(f, pts[i], pts[i + 1]);
    return sum;
}

std::vector<double> cross_correlation_breakpoints(const CouplingProfile& dst,
                                                  const CouplingProfile& src) {
    std::vector<double> out;
    for (double bd : finite_profile_breakpoints(dst))
        for (double bs : finite_profile_breakpoints(src)) out.push_back(bd - bs);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              out.end());
    return out;
}

namespace {

// segment list for 1-D quadrature: given kink positions and an oscillation
// wavelength, cover [a, b] with panels no wider than half a wavelength
std::vector<double> build_segments(double a, double b, const std::vector<double>& kinks,
                                   double wavelength) {
    std::vector<double> pts{a, b};
    for (double k : kinks)
        if (k > a && k < b) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    if (wavelength > 0.0 && std::isfinite(wavelength)) {
        // cap the seeding; genuinely harder stretches are left to adaptivity
        const long budget = 1L << 15;
        std::vector<double> refined;
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            refined.push_back(pts[i]);
            const double len = pts[i + 1] - pts[i];
            long n = static_cast<long>(std::ceil(len / (0.5 * wavelength)));
            n = std::min(n, budget);
            for (long j = 1; j < n; ++j) refined.push_back(pts[i] + len * j / n);
        }
        refined.push_back(pts.back());
        pts.swap(refined);
    }
    return pts;
}

// int_{u0}^{inf} J1(m u) / sqrt(u^2 + D^2) du  via the closed total integral
// (1 - e^{-mD})/(mD) minus a numerically evaluated finite head.
Integrated j1_tail_over_sqrt(double u0, double D, double m, const QuadSettings& quad) {
    const double total = (1.0 - std::exp(-m * D)) / (m * D);
    if (u0 <= 0.0) return {total, 0.0};
    auto f = [&](double u) { return bessel::j1(m * u) / std::sqrt(u * u + D * D); };
    auto head = integrate_segments(f, build_segments(0.0, u0, {}, 2.0 * kPi / m), quad);
    return {total - head.value, head.error};
}

}  // namespace

Integrated frak_g_retarded(const CouplingProfile& src, const CouplingProfile& dst, double D,
                           double m, const QuadSettings& quad) {
    if (!(D > 0.0)) throw std::invalid_argument("frak_g_retarded: D must be positive");
    if (dst.infinite_past && src.infinite_past)
        throw std::invalid_argument("frak_g_retarded: both supports unbounded");
    auto X = [&](double tau) { return profile_cross_correlation(dst, src, tau); };

    // light-cone delta line integral
    double value = X(D) / (4.0 * kPi * D);
    double error = 0.0;

    // upper end of the support of X on the timelike side
    const double tau_hi = dst.t_off() - src.t_on();  // +inf when src.infinite_past
    if (tau_hi <= D) {
        // support never reaches past the cone (X(D) above may still be nonzero
        // when the corner exactly touches, which is the boundary convention)
        return {value, error};
    }

    auto g_rr = [&](double tau) {
        const double s = tau * tau - D * D;
        const double root = s > 0.0 ? std::sqrt(s) : 0.0;
        return -(m * m / (4.0 * kPi)) * j1_over_x(m * root);
    };
    const std::vector<double> kinks = cross_correlation_breakpoints(dst, src);
    // oscillation of J1(m sqrt(tau^2-D^2)) in tau is slowest near the cone;
    // using the u-space wavelength 2 pi / m is conservative enough for seeding
    const double wavelength = 2.0 * kPi / m;

    if (!src.infinite_past) {
        auto f = [&](double tau) { return g_rr(tau) * X(tau); };
        auto r = integrate_segments(f, build_segments(D, tau_hi, kinks, wavelength), quad);
        value += r.value;
        error += r.error;
        return {value, error};
    }

    // src switched on in the infinite past: X(tau) is constant once the whole
    // dst window sees the plateau, i.e. for tau >= dst.t_off - src plateau end
    const double tau_const = std::max(D, dst.t_off() - src.t_plateau_end());
    if (tau_const > D) {
        auto f = [&](double tau) { return g_rr(tau) * X(tau); };
        auto r = integrate_segments(f, build_segments(D, tau_const, kinks, wavelength), quad);
        value += r.value;
        error += r.error;
    }
    const double x_inf = src.lambda_bar * dst.lambda_bar * effective_duration(dst);
    const double u0 = std::sqrt(std::max(0.0, tau_const * tau_const - D * D));
    Integrated tail = j1_tail_over_sqrt(u0, D, m, quad);
    value += -(m / (4.0 * kPi)) * x_inf * tail.value;
    error += (m / (4.0 * kPi)) * std::abs(x_inf) * tail.error;
    return {value, error};
}

namespace {

struct Ramp {
    double sign;      // +1 for the switch-off ramp, -1 for the switch-on ramp
    double duration;  // T
    double midpoint;  // ramp center in absolute time
};

std::vector<Ramp> ramps_of(const CouplingProfile& p) {
    std::vector<Ramp> r;
    r.push_back({+1.0, p.ramp_off, p.t_off() - 0.5 * p.ramp_off});
    if (!p.infinite_past) r.push_back({-1.0, p.ramp_on, p.t_on() + 0.5 * p.ramp_on});
    return r;
}

std::complex<double> z_factor(double omega, const CouplingProfile& p) {
    std::complex<double> z = 0.0;
    for (const Ramp& r : ramps_of(p))
        z += r.sign * sinc(0.5 * omega * r.duration) *
             std::polar(1.0, omega * r.midpoint);
    return z;
}

}  // namespace

double keldysh_kernel_self(double k, double m, const CouplingProfile& p) {
    const double omega = std::hypot(k, m);
    // |z|^2 in the cancellation-free form (s_off - s_on)^2 + 4 s_off s_on sin^2(omega Tbar / 2)
    const auto rs = ramps_of(p);
    const double s_off = sinc(0.5 * omega * rs[0].duration);
    if (rs.size() == 1) return s_off * s_off;
    const double s_on = sinc(0.5 * omega * rs[1].duration);
    const double half_tbar = 0.5 * omega * (rs[0].midpoint - rs[1].midpoint);
    const double sd = s_off - s_on;
    const double sh = std::sin(half_tbar);
    return sd * sd + 4.0 * s_off * s_on * sh * sh;
}

double keldysh_kernel_cross(double k, double m, const CouplingProfile& a,
                            const CouplingProfile& b) {
    const double omega = std::hypot(k, m);
    return std::real(z_factor(omega, a) * std::conj(z_factor(omega, b)));
}

bool keldysh_self_divergent(const CouplingProfile& p) {
    if (p.lambda_bar == 0.0) return false;
    if (p.ramp_off == 0.0) return true;
    if (!p.infinite_past && p.ramp_on == 0.0) return true;
    return false;
}

namespace {

// cosine decomposition of |z|^2: list of (tau, coeff) with
// |z|^2 * omega^2 = sum coeff * cos(omega tau) ... divided through later.
// Used only for the closed-form smooth tail, so coefficients are in the
// "2 (1 - cos omega T)/ (omega T)^2" representation of sinc^2.
struct CosTerm {
    double tau;
    double coeff;  // multiplies cos(omega tau) / omega^2
};

std::vector<CosTerm> self_cos_terms(const CouplingProfile& p) {
    const auto rs = ramps_of(p);
    std::vector<CosTerm> t;
    const double t_off = rs[0].duration;
    t.push_back({0.0, 2.0 / (t_off * t_off)});
    t.push_back({t_off, -2.0 / (t_off * t_off)});
    if (rs.size() == 2) {
        const double t_on = rs[1].duration;
        const double tbar = rs[0].midpoint - rs[1].midpoint;  // plateau + (T_on+T_off)/2
        t.push_back({0.0, 2.0 / (t_on * t_on)});
        t.push_back({t_on, -2.0 / (t_on * t_on)});
        const double c = 2.0 / (t_off * t_on);
        t.push_back({tbar - 0.5 * (t_off + t_on), +c});
        t.push_back({tbar + 0.5 * (t_off + t_on), +c});
        t.push_back({tbar - 0.5 * (t_off - t_on), -c});
        t.push_back({tbar + 0.5 * (t_off - t_on), -c});
    }
    return t;
}

// int_K^inf k^2 / omega^5 dk = (1/3m^2)(1 - K^3/omega_K^3)
double smooth_tail_integral(double K, double m) {
    const double w = std::hypot(K, m);
    return (1.0 - (K * K * K) / (w * w * w)) / (3.0 * m * m);
}

// bound on |int_K^inf (k^2/omega^5) cos(omega tau) dk| via the second mean
// value theorem in the omega variable (integrand k/omega^4, monotone down)
double osc_tail_bound(double K, double m, double tau) {
    const double w = std::hypot(K, m);
    return 2.0 * K / (w * w * w * w * std::abs(tau));
}

double self_tail_error_bound(double K, double m, const std::vector<CosTerm>& terms) {
    double e = 0.0;
    for (const auto& t : terms)
        if (std::abs(t.tau) > 1e-12) e += std::abs(t.coeff) * osc_tail_bound(K, m, t.tau);
    return e;
}

// oscillation scale of the momentum integrand (largest phase derivative)
double phase_scale(const CouplingProfile& a, const CouplingProfile& b, double D) {
    double s = D;
    double worst = 0.0;
    for (const Ramp& ra : ramps_of(a))
        for (const Ramp& rb : ramps_of(b))
            worst = std::max(worst, std::abs(ra.midpoint - rb.midpoint) +
                                        0.5 * (ra.duration + rb.duration));
    return s + worst;
}

}  // namespace

Integrated frak_g_keldysh_self(const CouplingProfile& p, double m, const QuadSettings& quad) {
    if (p.lambda_bar == 0.0) return {0.0, 0.0};
    if (keldysh_self_divergent(p)) throw NonadiabaticDivergence("zero-duration ramp");
    const double pref = p.lambda_bar * p.lambda_bar / (4.0 * kPi * kPi);
    const auto terms = self_cos_terms(p);
    double c_smooth = 0.0;
    for (const auto& t : terms)
        if (std::abs(t.tau) <= 1e-12) c_smooth += t.coeff;

    double K = quad.k_max;
    if (K <= 0.0) {
        K = std::max(20.0 * m, 10.0);
        while (pref * self_tail_error_bound(K, m, terms) > 0.1 * quad.abs_tol && K < 1e7)
            K *= 2.0;
    }
    auto f = [&](double k) {
        const double w = std::hypot(k, m);
        return pref * (k * k) / (w * w * w) * keldysh_kernel_self(k, m, p);
    };
    const double scale = phase_scale(p, p, 0.0);
    auto r = integrate_segments(f, build_segments(0.0, K, {}, 2.0 * kPi / scale), quad);
    Integrated out;
    out.value = r.value + pref * c_smooth * smooth_tail_integral(K, m);
    out.error = r.error + pref * self_tail_error_bound(K, m, terms);
    return out;
}

Integrated frak_g_keldysh_cross(const CouplingProfile& a, const CouplingProfile& b, double D,
                                double m, const QuadSettings& quad) {
    if (a.lambda_bar == 0.0 || b.lambda_bar == 0.0) return {0.0, 0.0};
    if (!(D > 0.0)) throw std::invalid_argument("frak_g_keldysh_cross: D must be positive");
    const double pref = a.lambda_bar * b.lambda_bar / (4.0 * kPi * kPi);

    // envelope coefficients |z_X| <= a0 + a1/omega
    auto envelope = [](const CouplingProfile& p, double& a0, double& a1) {
        a0 = 0.0;
        a1 = 0.0;
        for (const Ramp& r : ramps_of(p)) {
            if (r.duration > 0.0)
                a1 += 2.0 / r.duration;
            else
                a0 += 1.0;
        }
    };
    double a0a, a1a, a0b, a1b;
    envelope(a, a0a, a1a);
    envelope(b, a0b, a1b);
    auto tail_bound = [&](double K) {
        const double w = std::hypot(K, m);
        return pref / D *
               (a0a * a0b / w + (a0a * a1b + a1a * a0b) / (2.0 * w * w) +
                a1a * a1b / (3.0 * w * w * w));
    };
    double K = quad.k_max;
    if (K <= 0.0) {
        K = std::max(20.0 * m, 10.0);
        while (tail_bound(K) > 0.1 * quad.abs_tol && K < 5e7) K *= 2.0;
    }
    auto f = [&](double k) {
        const double w = std::hypot(k, m);
        return pref * (k * k) / (w * w * w) * sinc(k * D) * keldysh_kernel_cross(k, m, a, b);
    };
    auto r = integrate_segments(f, build_segments(0.0, K, {}, 2.0 * kPi / phase_scale(a, b, D)),
                                quad);
    return {r.value, r.error + tail_bound(K)};
}

KeldyshTriple frak_g_keldysh(const Scenario& s) {
    KeldyshTriple t;
    t.aa = frak_g_keldysh_self(s.profile_a, s.mass, s.quad);
    t.bb = frak_g_keldysh_self(s.profile_b, s.mass, s.quad);
    t.ba = frak_g_keldysh_cross(s.profile_a, s.profile_b, s.distance, s.mass, s.quad);
    return t;
}

GreensBundle greens_bundle(const Scenario& sc) {
    const Scenario s = validated(sc);
    GreensBundle g;
    auto rba = frak_g_retarded(s.profile_a, s.profile_b, s.distance, s.mass, s.quad);
    auto rab = frak_g_retarded(s.profile_b, s.profile_a, s.distance, s.mass, s.quad);
    auto k = frak_g_keldysh(s);
    g.gR_BA = rba.value;
    g.gR_AB = rab.value;
    g.gK_AA = k.aa.value;
    g.gK_BB = k.bb.value;
    g.gK_BA = k.ba.value;
    g.gamma_a = std::exp(-2.0 * g.gK_AA);
    g.gamma_b = std::exp(-2.0 * g.gK_BB);
    g.err.gR_BA = rba.error;
    g.err.gR_AB = rab.error;
    g.err.gK_AA = k.aa.error;
    g.err.gK_BB = k.bb.error;
    g.err.gK_BA = k.ba.error;
    return g;
}

Integrated frak_g_keldysh_cross_position(const Scenario& s) {
    const CouplingProfile& a = s.profile_a;
    const CouplingProfile& b = s.profile_b;
    if (a.infinite_past || b.infinite_past)
        throw std::invalid_argument("position-space Keldysh route needs bounded supports");
    if (a.lambda_bar == 0.0 || b.lambda_bar == 0.0) return {0.0, 0.0};
    const double D = s.distance, m = s.mass;
    auto W = [&](double tau) {
        return profile_cross_correlation(b, a, tau) + profile_cross_correlation(b, a, -tau);
    };
    double tau_hi = 0.0;
    for (double bp : cross_correlation_breakpoints(b, a))
        tau_hi = std::max(tau_hi, std::abs(bp));
    if (tau_hi == 0.0) return {0.0, 0.0};

    std::vector<double> kinks;
    for (double bp : cross_correlation_breakpoints(b, a)) kinks.push_back(std::abs(bp));
    const double wavelength = 2.0 * kPi / m;

    Integrated out;
    auto add = [&](const QuadResult& r) {
        out.value += r.value;
        out.error += r.error;
    };
    if (tau_hi <= D) {
        auto f = [&](double tau) { return g_keldysh_position(tau, D, m) * W(tau); };
        add(integrate_segments(f, build_segments(0.0, tau_hi, kinks, wavelength), s.quad));
        return out;
    }
    // The cone sits inside the support: integrate in v = |tau - D| with the
    // two sides paired. The 1/s parts cancel against each other; the remaining
    // log singularity is integrable. s is formed as +-v(2D -+ v) so the pair
    // stays accurate arbitrarily close to the cone.
    const double v_pair = std::min(D, tau_hi - D);
    const double v_floor = 1e-13 * D;  // keeps deep bisection off s = 0 exactly
    auto paired = [&](double v) {
        v = std::max(v, v_floor);
        return g_keldysh_of_s(-v * (2.0 * D - v), m) * W(D - v) +
               g_keldysh_of_s(v * (2.0 * D + v), m) * W(D + v);
    };
    std::vector<double> vkinks;
    for (double k : kinks) vkinks.push_back(std::abs(k - D));
    add(integrate_segments(paired, build_segments(0.0, v_pair, vkinks, wavelength), s.quad));
    if (v_pair < D) {
        // leftover spacelike stretch tau in [0, D - v_pair)
        auto f = [&](double tau) { return g_keldysh_position(tau, D, m) * W(tau); };
        add(integrate_segments(f, build_segments(0.0, D - v_pair, kinks, wavelength), s.quad));
    }
    if (v_pair < tau_hi - D) {
        // leftover timelike stretch tau in (D + v_pair, tau_hi]
        auto f = [&](double tau) { return g_keldysh_position(tau, D, m) * W(tau); };
        add(integrate_segments(f, build_segments(D + v_pair, tau_hi, kinks, wavelength),
                               s.quad));
    }
    return out;
}

}  // namespace qfq
