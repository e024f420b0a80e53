#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "qfq/propagators.hpp"

namespace qfq {

using complexd = std::complex<double>;
// row-major 4x4 in the z-basis {|++>, |+->, |-+>, |-->}
using Mat4 = std::array<complexd, 16>;

// The seven nonzero Bloch coefficients C_uv of the reduced two-qubit state
// (C_00 = 1 implicitly).
struct BlochCoefficients {
    double c_xx = 1.0;
    double c_yy = 0.0;
    double c_x0 = 1.0;
    double c_0x = 1.0;
    double c_yz = 0.0;
    double c_zy = 0.0;
};

BlochCoefficients bloch_coefficients(const GreensBundle& g);

Mat4 assemble_rho(const BlochCoefficients& c);

// Exact reduced state straight from the closed-time-path phases; equal to
// assemble_rho(bloch_coefficients(g)) and kept as an independent assembly for
// cross-checks.
Mat4 rho_from_ctp(const GreensBundle& g);

// eigenvalue index order: (s1,s2) = (+,+), (+,-), (-,+), (-,-)
std::array<double, 4> rho_eigenvalues(const BlochCoefficients& c);
std::array<double, 4> rho_eigenvalues(const GreensBundle& g);
std::array<double, 4> pt_eigenvalues(const BlochCoefficients& c);
std::array<double, 4> pt_eigenvalues(const GreensBundle& g);

double negativity(const BlochCoefficients& c);
double negativity(const GreensBundle& g);

// binary entropy of the pair (1 +- v)/2 in nats; Sigma(+-1) = 0, Sigma(0) = ln 2
double sigma_entropy(double v);

struct ConnectedCorrelators {
    double xx = 0.0, yy = 0.0, yz = 0.0, zy = 0.0;
};

struct MeasureReport {
    double s_a = 0.0, s_b = 0.0, s_ab = 0.0;  // entropies, nats
    double negativity = 0.0;
    double i_ab = 0.0, i_aphi = 0.0, i_bphi = 0.0;
    double v_a = 1.0, v_b = 1.0, d_a = 0.0, d_b = 0.0;
    double p_a = 0.0, p_b = 0.0;
    ConnectedCorrelators connected;
    std::array<double, 4> mu{};        // closed form
    std::array<double, 4> mu_tilde{};  // closed form
    // numeric diagonalization of the assembled matrix, kept beside the closed
    // forms for audit transparency
    std::array<double, 4> mu_matrix{};
    std::array<double, 4> mu_tilde_matrix{};
    double closed_vs_matrix = 0.0;  // max |closed - matrix| over both sets
};

MeasureReport measures(const BlochCoefficients& c);
MeasureReport measures(const GreensBundle& g);

struct AuditRow {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs for inequalities, |lhs - rhs| residual for equalities
    bool equality = false;
    bool pass = true;
};

// Every inequality/equality audit of the exact solution: Robertson-Schrodinger
// pair, wave-particle duality (both orientations + averaged), the information
// trade-off equalities, the correlator bound on I_AB, the positivity
// consistency condition, and the eigenvalue sum rules.
std::vector<AuditRow> audit_inequalities(const GreensBundle& g, const MeasureReport& r);

// --- small dense helpers (also used by the brute-force oracle) ---------------

Mat4 partial_transpose_b(const Mat4& rho);
std::array<double, 4> hermitian_eigenvalues(const Mat4& h);  // ascending
double trace_real(const Mat4& m);
Mat4 pauli_kron(int u, int v);  // sigma_u (x) sigma_v, indices 0,x,y,z = 0,1,2,3

}  // namespace qfq
