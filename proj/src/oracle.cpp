#include "qfq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace qfq::oracle {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
using json = nlohmann::json;

struct LinearSegment {
    double a, b;    // time range
    double c0, c1;  // lambda(t) = c0 + c1 t on [a, b]
};

std::vector<LinearSegment> segments_of(const CouplingProfile& p) {
    if (p.infinite_past)
        throw std::invalid_argument("oracle: bounded coupling support required");
    std::vector<LinearSegment> s;
    if (p.lambda_bar == 0.0) return s;
    const double t0 = p.t_on(), t1 = p.t_plateau_start(), t2 = p.t_plateau_end(),
                 t3 = p.t_off();
    if (t1 > t0) s.push_back({t0, t1, -p.lambda_bar * t0 / p.ramp_on, p.lambda_bar / p.ramp_on});
    if (t2 > t1) s.push_back({t1, t2, p.lambda_bar, 0.0});
    if (t3 > t2) s.push_back({t2, t3, p.lambda_bar * t3 / p.ramp_off, -p.lambda_bar / p.ramp_off});
    return s;
}

// int_a^b (c0 + c1 t) e^{i w t} dt, w > 0
complexd int_poly_exp(double a, double b, double w, double c0, double c1) {
    const complexd iw(0.0, w);
    auto prim = [&](double t) {
        return std::polar(1.0, w * t) * ((c0 + c1 * t) / iw - c1 / (iw * iw));
    };
    return prim(b) - prim(a);
}

// int over the wedge {t in dst segment, t' in src segment, t' < t} of
// dst(t) src(t') sin(w (t - t')) / w, exactly.
double retarded_pair(const LinearSegment& dst, const LinearSegment& src, double w) {
    if (dst.b <= src.a) return 0.0;  // dst entirely before src
    // inner antiderivative: G(u) = int (q0 + q1 u) e^{-i w u} du = e^{-i w u} g(u)
    const complexd iw(0.0, w);
    auto g = [&](double u) { return (src.c0 + src.c1 * u) / (-iw) - src.c1 / (iw * iw); };
    auto G = [&](double u) { return std::polar(1.0, -w * u) * g(u); };

    complexd acc = 0.0;
    // range B: t in (src.a, src.b), inner integral over [src.a, t]
    const double bl = std::max(dst.a, src.a), bh = std::min(dst.b, src.b);
    if (bl < bh) {
        // (p0 + p1 t) e^{iwt} (G(t) - G(src.a))
        //   = (p0 + p1 t) g(t)                 [polynomial, complex coefficients]
        //   - (p0 + p1 t) e^{iwt} G(src.a)
        // polynomial part: expand (p0 + p1 t)((q0 + q1 t)/(-iw) - q1/(iw)^2)
        const complexd A = src.c0 / (-iw) - src.c1 / (iw * iw);  // g(t) = A + B t
        const complexd B = src.c1 / (-iw);
        const complexd k0 = dst.c0 * A;
        const complexd k1 = dst.c0 * B + dst.c1 * A;
        const complexd k2 = dst.c1 * B;
        auto poly_prim = [&](double t) { return k0 * t + k1 * t * t / 2.0 + k2 * t * t * t / 3.0; };
        acc += poly_prim(bh) - poly_prim(bl);
        acc -= G(src.a) * int_poly_exp(bl, bh, w, dst.c0, dst.c1);
    }
    // range C: t >= src.b, inner integral is the full [src.a, src.b]
    const double cl = std::max(dst.a, src.b), ch = dst.b;
    if (cl < ch) acc += (G(src.b) - G(src.a)) * int_poly_exp(cl, ch, w, dst.c0, dst.c1);
    return acc.imag() / w;
}

double retarded_integral(const CouplingProfile& dst, const CouplingProfile& src, double w) {
    double sum = 0.0;
    for (const auto& sd : segments_of(dst))
        for (const auto& ss : segments_of(src)) sum += retarded_pair(sd, ss, w);
    return sum;
}

// --- symmetric tridiagonal eigensolver (QL with implicit shifts) -------------

void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
    // Symmetric tridiagonal QL with implicit shifts (EISPACK tql2 lineage).
    // d[0..n-1] diagonal, e[1..n-1] subdiagonal, z row-major n x n initialized
    // to the identity; on return d holds eigenvalues and z's columns the
    // eigenvectors.
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m;
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m == l) break;
            if (iter++ == 60) throw std::runtime_error("tql2: too many iterations");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < n; ++k) {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

struct RawEvolve {
    Mat4 rho{};
    double mean_n = 0.0;
};

RawEvolve evolve_once(const SingleModeConfig& cfg, int n_max, double dt) {
    const int dim = n_max + 1;
    const double w = cfg.omega;
    const double xs = 1.0 / std::sqrt(2.0 * w);  // x = xs (a + a^dagger)

    double t0 = std::min(cfg.g_a.t_on(), cfg.g_b.t_on());
    double t1 = std::max(cfg.g_a.t_off(), cfg.g_b.t_off());
    if (cfg.g_a.lambda_bar == 0.0 && cfg.g_b.lambda_bar == 0.0) {
        t0 = 0.0;
        t1 = 0.0;
    }

    // time grid aligned with the kinks of both profiles
    std::vector<double> knots{t0, t1};
    for (const CouplingProfile* p : {&cfg.g_a, &cfg.g_b})
        if (p->lambda_bar != 0.0)
            for (double t : {p->t_on(), p->t_plateau_start(), p->t_plateau_end(), p->t_off()})
                if (t > t0 && t < t1) knots.push_back(t);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const int signs[2] = {+1, -1};
    std::vector<std::vector<complexd>> psi(4, std::vector<complexd>(dim, 0.0));
    for (auto& v : psi) v[0] = 1.0;

    std::vector<double> diag(dim), off(dim), zv(dim * dim);
    std::vector<complexd> tmp(dim), tmp2(dim);
    for (size_t seg = 0; seg + 1 < knots.size(); ++seg) {
        const double len = knots[seg + 1] - knots[seg];
        if (len <= 0.0) continue;
        const int steps = std::max(1, static_cast<int>(std::ceil(len / dt)));
        const double h = len / steps;
        for (int istep = 0; istep < steps; ++istep) {
            const double tm = knots[seg] + (istep + 0.5) * h;
            const double la = coupling_at(cfg.g_a, tm);
            const double lb = coupling_at(cfg.g_b, tm);
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const double c = signs[ia] * la + signs[ib] * lb;
                    // H = w (N + 1/2) - c x, real symmetric tridiagonal
                    for (int n = 0; n < dim; ++n) {
                        diag[n] = w * (n + 0.5);
                        off[n] = (n > 0) ? -c * xs * std::sqrt(static_cast<double>(n)) : 0.0;
                    }
                    std::fill(zv.begin(), zv.end(), 0.0);
                    for (int n = 0; n < dim; ++n) zv[n * dim + n] = 1.0;
                    std::vector<double> d = diag, e = off;
                    tql2(d, e, zv, dim);
                    // psi -> Z e^{-i h Lambda} Z^T psi
                    auto& v = psi[2 * ia + ib];
                    for (int j = 0; j < dim; ++j) {
                        complexd s = 0.0;
                        for (int k = 0; k < dim; ++k) s += zv[k * dim + j] * v[k];
                        tmp[j] = s * std::polar(1.0, -h * d[j]);
                    }
                    for (int k = 0; k < dim; ++k) {
                        complexd s = 0.0;
                        for (int j = 0; j < dim; ++j) s += zv[k * dim + j] * tmp[j];
                        tmp2[k] = s;
                    }
                    v.swap(tmp2);
                }
        }
    }

    RawEvolve out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            complexd s = 0.0;
            for (int n = 0; n < dim; ++n) s += std::conj(psi[c][n]) * psi[r][n];
            out.rho[r * 4 + c] = 0.25 * s;
        }
    for (int r = 0; r < 4; ++r)
        for (int n = 0; n < dim; ++n) out.mean_n += 0.25 * n * std::norm(psi[r][n]);
    return out;
}

double rho_delta(const RawEvolve& a, const RawEvolve& b) {
    double d = std::abs(a.mean_n - b.mean_n);
    for (int i = 0; i < 16; ++i) d = std::max(d, std::abs(a.rho[i] - b.rho[i]));
    return d;
}

}  // namespace

complexd profile_fourier(const CouplingProfile& p, double omega) {
    complexd sum = 0.0;
    for (const auto& s : segments_of(p)) sum += int_poly_exp(s.a, s.b, omega, s.c0, s.c1);
    return sum;
}

GreensBundle single_mode_greens(const SingleModeConfig& cfg) {
    const double w = cfg.omega;
    if (!(w > 0.0)) throw std::invalid_argument("single_mode_greens: omega must be positive");
    GreensBundle g;
    const complexd la = profile_fourier(cfg.g_a, w);
    const complexd lb = profile_fourier(cfg.g_b, w);
    g.gK_AA = std::norm(la) / (2.0 * w);
    g.gK_BB = std::norm(lb) / (2.0 * w);
    g.gK_BA = std::real(lb * std::conj(la)) / (2.0 * w);
    g.gR_BA = retarded_integral(cfg.g_b, cfg.g_a, w);
    g.gR_AB = retarded_integral(cfg.g_a, cfg.g_b, w);
    g.gamma_a = std::exp(-2.0 * g.gK_AA);
    g.gamma_b = std::exp(-2.0 * g.gK_BB);
    return g;
}

EvolveResult single_mode_evolve(const SingleModeConfig& cfg) {
    if (cfg.n_max < 1) throw std::invalid_argument("single_mode_evolve: n_max must be >= 1");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("single_mode_evolve: dt must be positive");
    int n_max = cfg.n_max;
    double dt = cfg.dt;
    std::ostringstream trace;
    for (int round = 0; round < 8; ++round) {
        RawEvolve base = evolve_once(cfg, n_max, dt);
        RawEvolve up = evolve_once(cfg, n_max + 5, dt);
        RawEvolve half = evolve_once(cfg, n_max, 0.5 * dt);
        const double cd = rho_delta(base, up);
        const double sd = rho_delta(base, half);
        trace << "n_max=" << n_max << " dt=" << dt << " cutoff_delta=" << cd
              << " step_delta=" << sd << "\n";
        if (cd < 1e-8 && sd < 1e-8) {
            EvolveResult r;
            r.rho = base.rho;
            r.mean_n = base.mean_n;
            r.n_max_used = n_max;
            r.dt_used = dt;
            r.cutoff_delta = cd;
            r.step_delta = sd;
            return r;
        }
        if (cd >= 1e-8) n_max += 10;
        if (sd >= 1e-8) dt *= 0.5;
        if (n_max > 400 || dt < 1e-6) break;
    }
    throw std::runtime_error("single_mode_evolve: convergence failed\n" + trace.str());
}

OracleComparison compare(const SingleModeConfig& cfg) {
    OracleComparison c;
    c.analytic = single_mode_greens(cfg);
    c.brute = single_mode_evolve(cfg);
    const Mat4 rho_an = assemble_rho(bloch_coefficients(c.analytic));
    for (int i = 0; i < 16; ++i)
        c.max_rho_delta = std::max(c.max_rho_delta, std::abs(rho_an[i] - c.brute.rho[i]));
    c.mean_n_delta = std::abs(c.brute.mean_n - (c.analytic.gK_AA + c.analytic.gK_BB));
    c.negativity_analytic = negativity(bloch_coefficients(c.analytic));
    double nb = 0.0;
    for (double mu : hermitian_eigenvalues(partial_transpose_b(c.brute.rho)))
        if (mu < 0.0) nb += -mu;
    c.negativity_brute = nb;
    auto entropy = [](const std::array<double, 4>& mu) {
        double s = 0.0;
        for (double x : mu)
            if (x > 0.0) s -= x * std::log(x);
        return s;
    };
    c.s_ab_analytic = entropy(rho_eigenvalues(bloch_coefficients(c.analytic)));
    c.s_ab_brute = entropy(hermitian_eigenvalues(c.brute.rho));
    // off-diagonal decay ratio: |<++|rho|-+>| relative to its free value 1/4
    // isolates gamma_a; |<++|rho|+->| isolates gamma_b
    c.gamma_a_brute = 4.0 * std::abs(c.brute.rho[0 * 4 + 2]);
    c.gamma_b_brute = 4.0 * std::abs(c.brute.rho[0 * 4 + 1]);
    return c;
}

SingleModeConfig single_mode_from_json_text(const std::string& text) {
    json j = json::parse(text);
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string k = it.key();
        if (k != "omega" && k != "n_max" && k != "dt" && k != "profile_a" && k != "profile_b")
            throw std::invalid_argument("unknown key \"" + k + "\" in oracle config");
    }
    SingleModeConfig cfg;
    cfg.omega = j.at("omega").get<double>();
    cfg.n_max = j.value("n_max", cfg.n_max);
    cfg.dt = j.value("dt", cfg.dt);
    // reuse the scenario profile schema through a scenario shim
    json shim = {{"mass", 1.0},
                 {"distance", 1.0},
                 {"profile_a", j.at("profile_a")},
                 {"profile_b", j.at("profile_b")}};
    Scenario s = scenario_from_json_text(shim.dump());
    cfg.g_a = s.profile_a;
    cfg.g_b = s.profile_b;
    if (cfg.g_a.infinite_past || cfg.g_b.infinite_past)
        throw std::invalid_argument("oracle config: bounded supports required");
    return cfg;
}

SingleModeConfig single_mode_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open oracle config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return single_mode_from_json_text(buf.str());
}

KeldyshTriple mode_sum_greens(const Scenario& s, int k_count, double k_max) {
    if (k_count < 3) throw std::invalid_argument("mode_sum_greens: k_count must be >= 3");
    if (!(k_max > 0.0)) throw std::invalid_argument("mode_sum_greens: k_max must be positive");
    int n = k_count;
    if (n % 2 == 0) ++n;  // Simpson needs an odd point count
    const double h = k_max / (n - 1);
    double aa = 0.0, bb = 0.0, ba = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = i * h;
        const double wk = std::hypot(k, s.mass);
        const complexd la = profile_fourier(s.profile_a, wk);
        const complexd lb = profile_fourier(s.profile_b, wk);
        const double kd = k * s.distance;
        const double snc = (kd < 1e-8) ? 1.0 - kd * kd / 6.0 : std::sin(kd) / kd;
        const double base = (k * k) / wk / (4.0 * kPi * kPi);
        double wgt = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        wgt *= h / 3.0;
        aa += wgt * base * std::norm(la);
        bb += wgt * base * std::norm(lb);
        ba += wgt * base * snc * std::real(lb * std::conj(la));
    }
    KeldyshTriple t;
    t.aa = {aa, 0.0};
    t.bb = {bb, 0.0};
    t.ba = {ba, 0.0};
    return t;
}

}  // namespace qfq::oracle
