#include "qfq/spinstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfq {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

// x ln x with the 0 ln 0 = 0 limit
double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

const std::array<int, 2> kSigns = {+1, -1};

int idx(int s1, int s2) { return (s1 > 0 ? 0 : 2) + (s2 > 0 ? 0 : 1); }

std::array<double, 4> closed_eigenvalues(const BlochCoefficients& c, bool transposed) {
    std::array<double, 4> mu{};
    for (int s1 : kSigns)
        for (int s2 : kSigns) {
            const double a = c.c_x0 + s2 * c.c_0x;
            const double b = transposed ? (c.c_yz - s2 * c.c_zy) : (c.c_yz + s2 * c.c_zy);
            const double root = std::sqrt(a * a + b * b + c.c_yy * c.c_yy);
            mu[idx(s1, s2)] = 0.25 * (1.0 + s2 * c.c_xx + s1 * root);
        }
    return mu;
}

}  // namespace

BlochCoefficients bloch_coefficients(const GreensBundle& g) {
    BlochCoefficients c;
    c.c_xx = g.gamma_a * g.gamma_b * std::cosh(4.0 * g.gK_BA);
    c.c_yy = g.gamma_a * g.gamma_b * std::sinh(4.0 * g.gK_BA);
    c.c_x0 = g.gamma_a * std::cos(2.0 * g.gR_AB);
    c.c_0x = g.gamma_b * std::cos(2.0 * g.gR_BA);
    c.c_yz = -g.gamma_a * std::sin(2.0 * g.gR_AB);
    c.c_zy = -g.gamma_b * std::sin(2.0 * g.gR_BA);
    return c;
}

Mat4 pauli_kron(int u, int v) {
    static const complexd I(0.0, 1.0);
    auto pauli = [&](int w, int r, int col) -> complexd {
        switch (w) {
            case 0: return r == col ? 1.0 : 0.0;
            case 1: return r != col ? 1.0 : 0.0;
            case 2: return r == col ? 0.0 : (r == 0 ? -I : I);
            default: return r == col ? (r == 0 ? 1.0 : -1.0) : 0.0;
        }
    };
    Mat4 m{};
    for (int ra = 0; ra < 2; ++ra)
        for (int rb = 0; rb < 2; ++rb)
            for (int ca = 0; ca < 2; ++ca)
                for (int cb = 0; cb < 2; ++cb)
                    m[(2 * ra + rb) * 4 + (2 * ca + cb)] = pauli(u, ra, ca) * pauli(v, rb, cb);
    return m;
}

Mat4 assemble_rho(const BlochCoefficients& c) {
    const struct {
        int u, v;
        double w;
    } terms[] = {{0, 0, 1.0},      {1, 1, c.c_xx}, {1, 0, c.c_x0}, {0, 1, c.c_0x},
                 {2, 2, c.c_yy},   {2, 3, c.c_yz}, {3, 2, c.c_zy}};
    Mat4 rho{};
    for (const auto& t : terms) {
        const Mat4 p = pauli_kron(t.u, t.v);
        for (int i = 0; i < 16; ++i) rho[i] += 0.25 * t.w * p[i];
    }
    return rho;
}

Mat4 rho_from_ctp(const GreensBundle& g) {
    Mat4 rho{};
    for (int a1 : kSigns)
        for (int b1 : kSigns)
            for (int a2 : kSigns)
                for (int b2 : kSigns) {
                    const double ar = 0.5 * (a1 + a2), aa = a1 - a2;
                    const double br = 0.5 * (b1 + b2), ba = b1 - b2;
                    const double phase = ba * g.gR_BA * ar + aa * g.gR_AB * br;
                    const double damp = 0.5 * (aa * aa * g.gK_AA + ba * ba * g.gK_BB +
                                               2.0 * ba * aa * g.gK_BA);
                    const int row = idx(a1, b1), col = idx(a2, b2);
                    rho[row * 4 + col] = 0.25 * std::exp(-damp) * std::polar(1.0, phase);
                }
    return rho;
}

std::array<double, 4> rho_eigenvalues(const BlochCoefficients& c) {
    return closed_eigenvalues(c, false);
}

std::array<double, 4> pt_eigenvalues(const BlochCoefficients& c) {
    return closed_eigenvalues(c, true);
}

std::array<double, 4> rho_eigenvalues(const GreensBundle& g) {
    return rho_eigenvalues(bloch_coefficients(g));
}

std::array<double, 4> pt_eigenvalues(const GreensBundle& g) {
    return pt_eigenvalues(bloch_coefficients(g));
}

double negativity(const BlochCoefficients& c) {
    double n = 0.0;
    for (double mu : pt_eigenvalues(c))
        if (mu < 0.0) n += -mu;
    return n;
}

double negativity(const GreensBundle& g) { return negativity(bloch_coefficients(g)); }

double sigma_entropy(double v) {
    const double av = std::abs(v);
    if (av > 1.0 + 1e-12) throw std::domain_error("sigma_entropy: |v| > 1");
    const double vv = std::min(av, 1.0);
    return -xlnx(0.5 * (1.0 + vv)) - xlnx(0.5 * (1.0 - vv));
}

namespace {

double entropy_of(const std::array<double, 4>& mu) {
    double s = 0.0;
    for (double x : mu) {
        if (x < -1e-10) continue;  // clipped below; audits catch real negatives
        s -= xlnx(std::max(x, 0.0));
    }
    return s;
}

}  // namespace

MeasureReport measures(const BlochCoefficients& c) {
    MeasureReport r;
    r.s_a = sigma_entropy(c.c_x0);
    r.s_b = sigma_entropy(c.c_0x);
    r.mu = rho_eigenvalues(c);
    r.mu_tilde = pt_eigenvalues(c);
    r.s_ab = entropy_of(r.mu);
    r.negativity = negativity(c);
    r.i_ab = r.s_a + r.s_b - r.s_ab;
    r.i_aphi = r.s_a + r.s_ab - r.s_b;
    r.i_bphi = r.s_b + r.s_ab - r.s_a;
    r.v_a = std::abs(c.c_x0);
    r.v_b = std::abs(c.c_0x);
    r.d_a = std::abs(c.c_yz);
    r.d_b = std::abs(c.c_zy);
    r.p_a = 2.0 * (kLn2 - r.s_a);
    r.p_b = 2.0 * (kLn2 - r.s_b);
    r.connected.xx = c.c_xx - c.c_x0 * c.c_0x;
    r.connected.yy = c.c_yy;
    r.connected.yz = c.c_yz;
    r.connected.zy = c.c_zy;

    const Mat4 rho = assemble_rho(c);
    r.mu_matrix = hermitian_eigenvalues(rho);
    r.mu_tilde_matrix = hermitian_eigenvalues(partial_transpose_b(rho));
    auto sorted = [](std::array<double, 4> a) {
        std::sort(a.begin(), a.end());
        return a;
    };
    const auto mu_s = sorted(r.mu), mt_s = sorted(r.mu_tilde);
    double diff = 0.0;
    for (int i = 0; i < 4; ++i) {
        diff = std::max(diff, std::abs(mu_s[i] - r.mu_matrix[i]));
        diff = std::max(diff, std::abs(mt_s[i] - r.mu_tilde_matrix[i]));
    }
    r.closed_vs_matrix = diff;
    return r;
}

MeasureReport measures(const GreensBundle& g) { return measures(bloch_coefficients(g)); }

std::vector<AuditRow> audit_inequalities(const GreensBundle& g, const MeasureReport& r) {
    std::vector<AuditRow> rows;
    const double quad_err = g.err.gR_BA + g.err.gR_AB + g.err.gK_AA + g.err.gK_BB + g.err.gK_BA;
    const double ineq_tol = 1e-11 + 50.0 * quad_err;

    auto ineq = [&](const std::string& id, double lhs, double rhs) {
        AuditRow a;
        a.id = id;
        a.lhs = lhs;
        a.rhs = rhs;
        a.slack = rhs - lhs;
        a.pass = lhs <= rhs + ineq_tol;
        rows.push_back(a);
    };
    auto eq = [&](const std::string& id, double lhs, double rhs, double tol) {
        AuditRow a;
        a.id = id;
        a.lhs = lhs;
        a.rhs = rhs;
        a.slack = std::abs(lhs - rhs);
        a.equality = true;
        a.pass = a.slack <= tol;
        rows.push_back(a);
    };

    const double dr = g.gR_BA - g.gR_AB;
    ineq("rs", dr * dr, 4.0 * (g.gK_AA * g.gK_BB - g.gK_BA * g.gK_BA));
    ineq("rs_k", g.gK_BA * g.gK_BA, g.gK_AA * g.gK_BB);
    ineq("gk_positivity_plus", 0.0, g.gK_AA + g.gK_BB + 2.0 * g.gK_BA);
    ineq("gk_positivity_minus", 0.0, g.gK_AA + g.gK_BB - 2.0 * g.gK_BA);
    ineq("duality_va_db", r.v_a * r.v_a + r.d_b * r.d_b, 1.0);
    ineq("duality_vb_da", r.v_b * r.v_b + r.d_a * r.d_a, 1.0);
    ineq("duality_averaged", 0.5 * (r.d_a * r.d_a + r.d_b * r.d_b),
         1.0 - 0.5 * (r.v_a * r.v_a + r.v_b * r.v_b));
    eq("tradeoff_a", r.i_ab + r.i_aphi, 2.0 * r.s_a, 1e-9);
    eq("tradeoff_b", r.i_ab + r.i_bphi, 2.0 * r.s_b, 1e-9);
    const struct {
        const char* id;
        double c;
    } pairs[] = {{"wvhc_xx", r.connected.xx},
                 {"wvhc_yy", r.connected.yy},
                 {"wvhc_yz", r.connected.yz},
                 {"wvhc_zy", r.connected.zy}};
    for (const auto& p : pairs)
        if (p.c != 0.0) ineq(p.id, 0.5 * p.c * p.c, r.i_ab);
    // positivity consistency condition (nonnegativity of the exact state)
    ineq("positivity_consistency",
         1.0 - 2.0 * (std::sinh(2.0 * g.gK_AA) * std::sinh(2.0 * g.gK_BB) -
                      std::sinh(2.0 * g.gK_BA) * std::sinh(2.0 * g.gK_BA)),
         std::cos(2.0 * (g.gR_BA - g.gR_AB)));
    double mu_sum = 0.0, mt_sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        mu_sum += r.mu[i];
        mt_sum += r.mu_tilde[i];
    }
    eq("mu_sum", mu_sum, 1.0, 1e-12);
    eq("mu_tilde_sum", mt_sum, 1.0, 1e-12);
    return rows;
}

// --- dense helpers ------------------------------------------------------------

Mat4 partial_transpose_b(const Mat4& rho) {
    Mat4 out{};
    for (int ra = 0; ra < 2; ++ra)
        for (int rb = 0; rb < 2; ++rb)
            for (int ca = 0; ca < 2; ++ca)
                for (int cb = 0; cb < 2; ++cb)
                    out[(2 * ra + rb) * 4 + (2 * ca + cb)] =
                        rho[(2 * ra + cb) * 4 + (2 * ca + rb)];
    return out;
}

double trace_real(const Mat4& m) {
    double t = 0.0;
    for (int i = 0; i < 4; ++i) t += m[i * 4 + i].real();
    return t;
}

std::array<double, 4> hermitian_eigenvalues(const Mat4& h) {
    // cyclic Jacobi on the Hermitian 4x4
    Mat4 a = h;
    auto at = [&](int i, int j) -> complexd& { return a[i * 4 + j]; };
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) off += std::norm(at(i, j));
        if (off < 1e-32) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                const complexd apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = at(p, p).real(), aqq = at(q, q).real();
                // unitary 2x2 rotation diagonalizing the (p,q) block
                const double phi = std::arg(apq);
                const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                const double c = std::cos(theta);
                const complexd s = std::polar(std::sin(theta), -phi);
                for (int k = 0; k < 4; ++k) {
                    const complexd akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp + s * akq;
                    at(k, q) = -std::conj(s) * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    const complexd apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk + std::conj(s) * aqk;
                    at(q, k) = -s * apk + c * aqk;
                }
            }
    }
    std::array<double, 4> ev{at(0, 0).real(), at(1, 1).real(), at(2, 2).real(), at(3, 3).real()};
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace qfq
