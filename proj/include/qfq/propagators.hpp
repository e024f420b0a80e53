#pragma once

#include <stdexcept>
#include <vector>

#include "qfq/quadrature.hpp"
#include "qfq/scenario.hpp"

namespace qfq {

// value plus an absolute error estimate (quadrature + truncation bounds)
struct Integrated {
    double value = 0.0;
    double error = 0.0;
};

// The five time-integrated propagator quantities that determine the final
// two-qubit state, plus the decoherence factors gamma = exp(-2 gK_self).
struct GreensBundle {
    double gR_BA = 0.0;  // retarded potential of A's spin integrated at B
    double gR_AB = 0.0;
    double gK_AA = 0.0;
    double gK_BB = 0.0;
    double gK_BA = 0.0;  // = gK_AB
    double gamma_a = 1.0;
    double gamma_b = 1.0;
    struct {
        double gR_BA = 0.0, gR_AB = 0.0, gK_AA = 0.0, gK_BB = 0.0, gK_BA = 0.0;
    } err;
};

// Violated GreensBundle invariants (positivity, Cauchy-Schwarz relations,
// gamma consistency) beyond `slack`; empty means consistent.
std::vector<std::string> bundle_violations(const GreensBundle& g, double slack = 1e-9);

// Thrown when a Keldysh self-integral is requested for a profile with a
// zero-duration ramp: sudden switching makes gK_self log-divergent.
class NonadiabaticDivergence : public std::runtime_error {
  public:
    explicit NonadiabaticDivergence(const std::string& which)
        : std::runtime_error("Keldysh self-integral diverges (sudden switching): " + which) {}
};

// --- position-space kernels -------------------------------------------------

// Regular (Bessel) part of the retarded kernel for strictly timelike
// separation: -m J1(m sqrt(s)) / (4 pi sqrt(s)), s = dt^2 - r^2 > 0, dt > 0.
// Zero outside the open forward cone. The delta term on the cone is handled
// by frak_g_retarded as a line integral, not here.
double g_retarded_regular(double dt, double r, double m);

// Symmetrized vacuum two-point function at separation (dt, r):
//   (m/4pi^2) * (pi/2) Y1(m sqrt(s))/sqrt(s)   for s > 0
//   (m/4pi^2) * K1(m sqrt(-s))/sqrt(-s)        for s < 0
// Throws std::domain_error at s = 0 (integrable 1/s singularity; integrators
// must pair points symmetrically across the cone instead of sampling it).
double g_keldysh_position(double dt, double r, double m);

// Same kernel as a function of the interval s = dt^2 - r^2. Near-cone
// integrators use this with s formed algebraically (e.g. -v (2D - v)), since
// dt^2 - r^2 loses every significant digit there.
double g_keldysh_of_s(double s, double m);

// --- profile cross-correlation ----------------------------------------------

// X(tau) = integral dst(t) src(t - tau) dt. Piecewise cubic; at least one
// profile must have bounded support.
double profile_cross_correlation(const CouplingProfile& dst, const CouplingProfile& src,
                                 double tau);

// Breakpoints of X(tau) (kinks of the piecewise-cubic form), ascending.
std::vector<double> cross_correlation_breakpoints(const CouplingProfile& dst,
                                                  const CouplingProfile& src);

// --- time-integrated quantities ----------------------------------------------

// gR^{dst,src} = int dt int dt' dst(t) G_R(t - t', D) src(t'), evaluated as the
// light-cone line integral X(D)/(4 pi D) plus 1-D quadrature of the regular
// kernel against X(tau) over the timelike wedge.
Integrated frak_g_retarded(const CouplingProfile& src, const CouplingProfile& dst, double D,
                           double m, const QuadSettings& quad);

// Closed oscillatory kernels of the momentum representation.
// kernel_self(k) = |z(omega_k)|^2 and kernel_cross(k) = Re z_a conj(z_b) with
// z = e^{i omega m_off} sinc(omega T_off/2) - e^{i omega m_on} sinc(omega T_on/2);
// infinite-past profiles drop the on-ramp term (its analytic T_on -> inf limit).
double keldysh_kernel_self(double k, double m, const CouplingProfile& p);
double keldysh_kernel_cross(double k, double m, const CouplingProfile& a,
                            const CouplingProfile& b);

bool keldysh_self_divergent(const CouplingProfile& p);

// gK_XY = (lb_X lb_Y / 4 pi^2) int dk (k^2/omega^3) [sinc(kD) | 1] kernel.
// Adaptive on [0, k_max] with the smooth part of the tail integrated in closed
// form and the oscillatory remainder bounded into the error estimate.
Integrated frak_g_keldysh_self(const CouplingProfile& p, double m, const QuadSettings& quad);
Integrated frak_g_keldysh_cross(const CouplingProfile& a, const CouplingProfile& b, double D,
                                double m, const QuadSettings& quad);

struct KeldyshTriple {
    Integrated aa, bb, ba;
};
KeldyshTriple frak_g_keldysh(const Scenario& s);

GreensBundle greens_bundle(const Scenario& s);

// Independent route for gK_BA: direct quadrature of the position-space kernel
// against X(tau), pairing samples symmetrically across the light cone. Used as
// the dual-route check of the momentum-kernel result.
Integrated frak_g_keldysh_cross_position(const Scenario& s);

}  // namespace qfq
