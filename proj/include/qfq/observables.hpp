#pragma once

#include <array>

#include "qfq/propagators.hpp"
#include "qfq/scenario.hpp"
#include "qfq/spinstate.hpp"

namespace qfq {

// A point on the final time slice; correlators with the field are defined only
// after both couplings have switched off (t_f >= max t_off).
struct FieldPoint {
    double t_f = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};
};

enum class PropagatorKind { retarded, keldysh };

// Phi_{R|K}(p) = int dt G_{R|K}(t_f - t, r) lambda(t), with the light-cone
// delta handled as a point term (retarded) and the Keldysh cone crossing
// integrated by symmetric pairing, as in the double integrals.
Integrated phi_convolution(PropagatorKind kind, const CouplingProfile& profile, double t_f,
                           double r, double m, const QuadSettings& quad);

enum class SpinFieldComponent { y_A, z_A, y_B, z_B };

// <delta sigma_w^X  delta phi(x)> on the final slice, the printed combinations:
//   (z,A) -> Phi_R^(A);   (y,A) -> -2 C_x0 Phi_K^(A) + C_yz Phi_R^(B);
//   and the (A <-> B) mirrors.
Integrated spin_field_correlator(SpinFieldComponent w, const Scenario& s,
                                 const BlochCoefficients& c, const FieldPoint& p);

struct ParticleNumbers {
    double mean = 0.0;                   // <N> = gK_AA + gK_BB
    double second_moment_excess = 0.0;   // <:N^2:> - <N>^2 = 4 gK_BA^2
    double gk_aa = 0.0, gk_bb = 0.0, gk_ba = 0.0;
    // particles created conditioned on observing z-eigenvalues (sa, sb)
    double projected(int sa, int sb) const { return gk_aa + gk_bb + 2.0 * sa * sb * gk_ba; }
};

ParticleNumbers particle_number(const GreensBundle& g);

// Spin-number correlators. Only the sigma_x components are nonzero; raw means
// <sigma_x N> and connected subtracts <sigma_x><N>.
struct SpinNumberCorrelators {
    double raw_xa_n = 0.0, conn_xa_n = 0.0;
    double raw_xb_n = 0.0, conn_xb_n = 0.0;
    double raw_xa_n2 = 0.0, conn_xa_n2 = 0.0;  // against :N^2:
    double raw_xb_n2 = 0.0, conn_xb_n2 = 0.0;
};

SpinNumberCorrelators spin_number_correlators(const GreensBundle& g,
                                              const BlochCoefficients& c);

}  // namespace qfq
