#pragma once

#include <string>

#include "qfq/propagators.hpp"
#include "qfq/scenario.hpp"
#include "qfq/spinstate.hpp"

// Brute-force verification of the analytic solution on a single bosonic mode
// (both qubits' sigma_z coupled to one oscillator coordinate), plus a
// discretized momentum-sum cross-check of the field-case Keldysh integrals.
namespace qfq::oracle {

struct SingleModeConfig {
    double omega = 1.0;
    CouplingProfile g_a, g_b;  // bounded supports required
    int n_max = 30;
    double dt = 0.01;
};

// The integrated quantities for the single-mode kernels
//   G_K(dt) = cos(omega dt)/(2 omega),  G_R(dt) = theta(dt) sin(omega dt)/omega,
// integrated exactly over the trapezoids (piecewise polynomial x e^{i omega t}
// antiderivatives, no quadrature).
GreensBundle single_mode_greens(const SingleModeConfig& cfg);

struct EvolveResult {
    Mat4 rho{};          // reduced two-qubit state, oscillator traced out
    double mean_n = 0.0;
    int n_max_used = 0;
    double dt_used = 0.0;
    double cutoff_delta = 0.0;  // change under n_max -> n_max + 5
    double step_delta = 0.0;    // change under dt -> dt/2
};

// Truncated-Fock evolution from |+x,+x> x |0> with exact mid-step
// exponentiation; escalates n_max / dt until both convergence deltas are
// below 1e-8 and throws (with the trace in the message) if that fails.
EvolveResult single_mode_evolve(const SingleModeConfig& cfg);

struct OracleComparison {
    GreensBundle analytic;
    EvolveResult brute;
    double max_rho_delta = 0.0;   // entrywise |rho_brute - rho_analytic|
    double mean_n_delta = 0.0;    // |<N> - (gK_AA + gK_BB)|
    double negativity_analytic = 0.0, negativity_brute = 0.0;
    double s_ab_analytic = 0.0, s_ab_brute = 0.0;
    double gamma_a_brute = 0.0, gamma_b_brute = 0.0;  // off-diagonal decay ratios
};

OracleComparison compare(const SingleModeConfig& cfg);

SingleModeConfig single_mode_from_json_text(const std::string& text);
SingleModeConfig single_mode_from_json_file(const std::string& path);

// Field-case Keldysh integrals by plain Simpson summation over a uniform
// momentum grid; the profile time integrals are exact. Bounded supports only.
KeldyshTriple mode_sum_greens(const Scenario& s, int k_count, double k_max);

// Exact int lambda(t) e^{i omega t} dt over a bounded trapezoid (shared by the
// single-mode and mode-sum routes; independent of the kernel closed forms).
complexd profile_fourier(const CouplingProfile& p, double omega);

}  // namespace qfq::oracle
