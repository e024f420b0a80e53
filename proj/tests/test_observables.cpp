#include <doctest.h>

#include <cmath>

#include "qfq/observables.hpp"
#include "test_support.hpp"

using namespace qfq;
using qfq::testing::Rng;
using qfq::testing::random_physical_bundle;

namespace {

Scenario fig12_scenario(double D) {
    Scenario s;
    s.mass = 1.0;
    s.distance = D;
    s.profile_a = CouplingProfile::trapezoid(1.0, 0.0, 2.0, 4.0, 2.0);
    s.profile_b = s.profile_a;
    return s;
}

}  // namespace

TEST_CASE("phi_convolution, retarded: causal support and frozen value") {
    const auto p = CouplingProfile::trapezoid(1.0, 0.0, 2.0, 4.0, 2.0);
    QuadSettings q;
    // point spacelike to the entire support: t_f - r < t_on
    CHECK(phi_convolution(PropagatorKind::retarded, p, 9.0, 20.0, 1.0, q).value == 0.0);
    // cone cutting the plateau: frozen high-precision value, delta term 1/(20 pi)
    const auto r = phi_convolution(PropagatorKind::retarded, p, 10.0, 5.0, 1.0, q);
    CHECK(r.value == doctest::Approx(0.002044092494516203).epsilon(1e-8));
}

TEST_CASE("phi_convolution, retarded: static potential from an eternal source") {
    // switched on since forever with a short ramp-off "now": Yukawa up to the bite
    const auto p = CouplingProfile::from_infinite_past(1.0, 0.0, 0.01);
    QuadSettings q;
    for (double r : {0.5, 1.0, 2.0}) {
        const double expect = std::exp(-r) / (4.0 * M_PI * r);
        CHECK(phi_convolution(PropagatorKind::retarded, p, 0.0, r, 1.0, q).value ==
              doctest::Approx(expect).epsilon(2e-3));
    }
}

TEST_CASE("phi_convolution, keldysh: frozen value and spacelike decay") {
    const auto p = CouplingProfile::trapezoid(1.0, 0.0, 2.0, 4.0, 2.0);
    QuadSettings q;
    const auto v = phi_convolution(PropagatorKind::keldysh, p, 9.0, 3.0, 1.0, q);
    CHECK(v.value == doctest::Approx(-0.0019891706086681).epsilon(1e-6));
    // far outside the cone the magnitude decays like e^{-m r}
    const double a = std::abs(phi_convolution(PropagatorKind::keldysh, p, 9.0, 14.0, 1.0, q).value);
    const double b = std::abs(phi_convolution(PropagatorKind::keldysh, p, 9.0, 17.0, 1.0, q).value);
    CHECK(std::log(a / b) == doctest::Approx(3.0).epsilon(0.25));
    CHECK_THROWS_AS(
        phi_convolution(PropagatorKind::keldysh,
                        CouplingProfile::from_infinite_past(1.0, 0.0, 1.0), 1.0, 1.0, 1.0, q),
        std::invalid_argument);
}

TEST_CASE("phi_convolution, keldysh: adiabatic switching suppresses the convolution") {
    // the kernel has no zero-frequency weight, so a slowly varying coupling
    // convolves to almost nothing; this is what kills the (y, A) correlator in
    // the adiabatic limit at Theta = 0 mod pi/2
    QuadSettings q;
    const double r = 1.5;
    const auto fast = CouplingProfile::trapezoid(1.0, -4.0, 1.0, 2.0, 1.0);
    const auto slow = CouplingProfile::trapezoid(1.0, -44.0, 20.0, 4.0, 20.0);
    const double vf = std::abs(
        phi_convolution(PropagatorKind::keldysh, fast, fast.t_off(), r, 1.0, q).value);
    const double vs = std::abs(
        phi_convolution(PropagatorKind::keldysh, slow, slow.t_off(), r, 1.0, q).value);
    CHECK(vs < 0.1 * vf);
}

TEST_CASE("spin_field_correlator: wiring and structural zeros") {
    const Scenario s = fig12_scenario(10.0);  // region IV
    const GreensBundle g = greens_bundle(s);
    const BlochCoefficients c = bloch_coefficients(g);

    FieldPoint p;
    p.t_f = 9.0;
    p.x = {3.0, 4.0, 0.0};  // r_a = 5

    // (z, A) is the retarded convolution itself
    const auto za = spin_field_correlator(SpinFieldComponent::z_A, s, c, p);
    const auto phi_ra = phi_convolution(PropagatorKind::retarded, s.profile_a, 9.0, 5.0, 1.0, s.quad);
    CHECK(za.value == doctest::Approx(phi_ra.value).epsilon(1e-12));

    // (z, A) does not care about anything of Bob's
    Scenario s2 = s;
    s2.profile_b = CouplingProfile::trapezoid(0.3, 1.0, 1.0, 1.0, 1.0);
    s2.distance = 12.0;
    const auto za2 = spin_field_correlator(SpinFieldComponent::z_A, s2, bloch_coefficients(g), p);
    CHECK(za2.value == doctest::Approx(za.value).epsilon(1e-12));

    // spacelike regime: c_yz = 0, so (y, A) = -2 c_x0 Phi_K^(A): independent of x_B
    CHECK(std::abs(c.c_yz) < 1e-15);
    const auto ya = spin_field_correlator(SpinFieldComponent::y_A, s, c, p);
    const auto phi_ka = phi_convolution(PropagatorKind::keldysh, s.profile_a, 9.0, 5.0, 1.0, s.quad);
    CHECK(ya.value == doctest::Approx(-2.0 * c.c_x0 * phi_ka.value).epsilon(1e-12));

    // lambda_b = 0 kills the (z, B) correlator
    Scenario s3 = s;
    s3.profile_b.lambda_bar = 0.0;
    CHECK(spin_field_correlator(SpinFieldComponent::z_B, s3, c, p).value == 0.0);

    // general wiring of (y, B)
    const auto yb = spin_field_correlator(SpinFieldComponent::y_B, s, c, p);
    const double r_b = std::sqrt((3.0 - 10.0) * (3.0 - 10.0) + 16.0);
    const auto phi_kb = phi_convolution(PropagatorKind::keldysh, s.profile_b, 9.0, r_b, 1.0, s.quad);
    CHECK(yb.value == doctest::Approx(-2.0 * c.c_0x * phi_kb.value).epsilon(1e-10));
}

TEST_CASE("spacelike geometry zeroes the distinguishability correlators") {
    // beyond the causal reach (support length 8, D > 8) c_yz and c_zy vanish
    // identically, so the figure's correlator columns are structural zeros
    Scenario s = fig12_scenario(9.0);
    const MeasureReport m = measures(greens_bundle(s));
    CHECK(m.connected.yz == 0.0);
    CHECK(m.connected.zy == 0.0);
    CHECK(m.connected.yy != 0.0);
}

TEST_CASE("particle_number: mean, excess, projections") {
    const GreensBundle g = greens_bundle(fig12_scenario(10.0));
    const ParticleNumbers n = particle_number(g);
    CHECK(std::abs(n.mean - 0.025) <= 0.04 * 0.025);
    CHECK(n.second_moment_excess == doctest::Approx(4.0 * g.gK_BA * g.gK_BA));
    // the four sign projections average back to the mean
    const double avg = 0.25 * (n.projected(+1, +1) + n.projected(+1, -1) +
                               n.projected(-1, +1) + n.projected(-1, -1));
    CHECK(avg == doctest::Approx(n.mean).epsilon(1e-14));
    CHECK(n.projected(+1, +1) + n.projected(-1, -1) - n.projected(+1, -1) -
              n.projected(-1, +1) ==
          doctest::Approx(8.0 * g.gK_BA).epsilon(1e-12));

    const ParticleNumbers z = particle_number(GreensBundle{});
    CHECK(z.mean == 0.0);
    CHECK(z.second_moment_excess == 0.0);
}

TEST_CASE("spin-number correlators: identities and limits") {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const GreensBundle g = random_physical_bundle(rng);
        const BlochCoefficients c = bloch_coefficients(g);
        const SpinNumberCorrelators s = spin_number_correlators(g, c);
        const double mean_n = g.gK_AA + g.gK_BB;
        // connected and raw differ by exactly <sigma><N>
        CHECK(s.raw_xa_n - s.conn_xa_n == doctest::Approx(c.c_x0 * mean_n).epsilon(1e-12));
        CHECK(s.raw_xb_n - s.conn_xb_n == doctest::Approx(c.c_0x * mean_n).epsilon(1e-12));
        // the reduction of the connected form
        CHECK(s.conn_xa_n == doctest::Approx(-2.0 * g.gK_AA * c.c_x0 +
                                             (g.gR_AB - g.gR_BA) * c.c_yz)
                                 .epsilon(1e-10));
    }

    // spacelike regime: <delta sigma_x^A delta N> = gamma_a ln gamma_a
    GreensBundle sp;
    sp.gK_AA = 0.3;
    sp.gK_BB = 0.4;
    sp.gK_BA = 0.1;
    sp.gamma_a = std::exp(-0.6);
    sp.gamma_b = std::exp(-0.8);
    const auto c = bloch_coefficients(sp);
    const auto s = spin_number_correlators(sp, c);
    CHECK(s.conn_xa_n ==
          doctest::Approx(sp.gamma_a * std::log(sp.gamma_a)).epsilon(1e-12));

    // adiabatic Alice in the one-way regime: second-moment correlator vanishes
    GreensBundle ow;  // gamma_a = 1 forces gR_BA = gK_BA = 0
    const auto s2 = spin_number_correlators(ow, bloch_coefficients(ow));
    CHECK(s2.conn_xa_n2 == doctest::Approx(0.0).epsilon(1e-14));

    const auto z = spin_number_correlators(GreensBundle{}, bloch_coefficients(GreensBundle{}));
    CHECK(z.raw_xa_n == 0.0);
    CHECK(z.conn_xb_n2 == 0.0);
}
