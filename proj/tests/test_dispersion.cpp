// Orientation-dependent dispersion surface: frozen production coefficients,
// symmetry structure of the tensor components, handedness behaviour, and the
// chiral length scale.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <chirascat/dataset.hpp>
#include <chirascat/dispersion.hpp>

using namespace chirascat;
using Catch::Approx;

namespace {
const PotentialSurface& production_surface() {
    static const PotentialSurface s =
        dispersion_coefficients(default_dataset().susceptibilities());
    return s;
}
}  // namespace

TEST_CASE("Isotropic coefficient matches the calibrated helium value") {
    const auto& s = production_surface();
    CHECK(s.C6 == Approx(11.7).margin(1e-9));
    CHECK(s.quadrature_error < 1e-8);
}

TEST_CASE("Frozen anisotropic and chiral coefficients") {
    const auto& s = production_surface();
    CHECK(s.c2_mu(0).real() == Approx(1.8307968699665047).margin(1e-10));
    CHECK(s.c2_mu(1).real() == Approx(0.45134243826229048).margin(1e-10));
    CHECK(s.c2_mu(2).real() == Approx(-0.023505849092111959).margin(1e-10));
    CHECK(s.c3_mu(1).imag() == Approx(0.17933889048946403).margin(1e-10));
    CHECK(s.c3_mu(2).imag() == Approx(19.662597355048479).margin(1e-9));
    CHECK(s.c3_mu(3).imag() == Approx(7.2602413815830706).margin(1e-9));
    CHECK(s.cbar == Approx(8.362205168885854).margin(1e-9));
    // root-mean-square definition of the chiral strength
    double sum = 0.0;
    for (const auto& c : s.c3) sum += std::norm(c);
    CHECK(s.cbar == Approx(std::sqrt(sum / (4.0 * M_PI))).margin(1e-12));
}

TEST_CASE("Tensor components: reality structure and twofold-axis pattern") {
    const auto& s = production_surface();
    for (int mu = -2; mu <= 2; ++mu) {
        CAPTURE(mu);
        // rank-2 part is real; components obey c_{-mu} = (-1)^mu conj(c_mu)
        CHECK(std::abs(s.c2_mu(mu).imag()) < 1e-12);
        CHECK(std::abs(s.c2_mu(-mu) -
                       std::pow(-1.0, mu) * std::conj(s.c2_mu(mu))) < 1e-12);
    }
    for (int mu = -3; mu <= 3; ++mu) {
        CAPTURE(mu);
        // rank-3 part is purely imaginary
        CHECK(std::abs(s.c3_mu(mu).real()) < 1e-12);
        CHECK(std::abs(s.c3_mu(-mu) -
                       std::pow(-1.0, mu) * std::conj(s.c3_mu(mu))) < 1e-12);
    }
    // combined with the reality structure this is the twofold-symmetry pattern
    // c_{lam,-mu} = (-1)^(lam+mu) c_{lam,mu}
    for (int mu = -2; mu <= 2; ++mu)
        CHECK(std::abs(s.c2_mu(-mu) - std::pow(-1.0, 2 + mu) * s.c2_mu(mu)) < 1e-12);
    for (int mu = -3; mu <= 3; ++mu)
        CHECK(std::abs(s.c3_mu(-mu) - std::pow(-1.0, 3 + mu) * s.c3_mu(mu)) < 1e-12);
    CHECK(std::abs(s.c3_mu(0)) < 1e-12);
}

TEST_CASE("Opposite handedness flips only the parity-odd part") {
    const auto& l = production_surface();
    const PotentialSurface r =
        dispersion_coefficients(default_dataset().susceptibilities(), Handedness::R);
    CHECK(r.C6 == Approx(l.C6).margin(1e-12));
    CHECK(r.cbar == Approx(l.cbar).margin(1e-12));
    for (int mu = -2; mu <= 2; ++mu)
        CHECK(std::abs(r.c2_mu(mu) - l.c2_mu(mu)) < 1e-14);
    for (int mu = -3; mu <= 3; ++mu)
        CHECK(std::abs(r.c3_mu(mu) + l.c3_mu(mu)) < 1e-14);
}

TEST_CASE("Planar geometry yields no chiral coupling") {
    auto in = default_dataset().susceptibilities();
    in.geometry.dihedral_deg = 180.0;
    const PotentialSurface p = dispersion_coefficients(in);
    CHECK(p.cbar < 1e-10);
    for (const auto& c : p.c3) CHECK(std::abs(c) < 1e-10);
    // the achiral parts survive
    CHECK(p.C6 > 1.0);
    CHECK(std::abs(p.c2_mu(0)) > 0.1);
}

TEST_CASE("Mirror-image geometry equals handedness flip") {
    auto in = default_dataset().susceptibilities();
    in.geometry.dihedral_deg = -in.geometry.dihedral_deg;
    const PotentialSurface mirror = dispersion_coefficients(in);
    const auto& l = production_surface();
    CHECK(mirror.C6 == Approx(l.C6).margin(1e-9));
    for (int mu = -3; mu <= 3; ++mu)
        CHECK(std::abs(mirror.c3_mu(mu) + l.c3_mu(mu)) < 1e-9);
}

TEST_CASE("Chiral length scale") {
    const auto& s = production_surface();
    const double mstar = default_dataset().mstar;
    const double beta = beta_parameter(s, mstar);
    CHECK(beta == Approx(11.817553306817695).margin(1e-8));
    CHECK(beta == Approx(std::pow(4.0 * mstar * s.cbar, 0.2)).margin(1e-12));
    // scaling the coupling by 32 doubles beta
    PotentialSurface scaled = s;
    scaled.cbar *= 32.0;
    CHECK(beta_parameter(scaled, mstar) == Approx(2.0 * beta).margin(1e-10));
    // no chiral coupling, no length scale
    PotentialSurface zero = s;
    zero.cbar = 0.0;
    CHECK(beta_parameter(zero, mstar) == 0.0);
}

TEST_CASE("Potential evaluation is real and respects the radial powers") {
    const auto& s = production_surface();
    const Eigen::Vector3d n(0.3, -0.7, 0.648);
    const double v8 = potential_eval(s, 8.0, n);
    CHECK(std::isfinite(v8));
    // with the chiral part removed the potential scales exactly as r^-6
    PotentialSurface even = s;
    even.c3.fill(0.0);
    const double a = potential_eval(even, 8.0, n);
    const double b = potential_eval(even, 16.0, n);
    CHECK(b == Approx(a / 64.0).margin(std::abs(a) * 1e-12));
    // the isotropic part alone gives -C6/r^6
    PotentialSurface iso = even;
    iso.c2.fill(0.0);
    CHECK(potential_eval(iso, 8.0, n) ==
          Approx(-11.7 / std::pow(8.0, 6)).margin(1e-15));
    // chiral remainder scales as r^-7
    const double d8 = potential_eval(s, 8.0, n) - potential_eval(even, 8.0, n);
    const double d16 = potential_eval(s, 16.0, n) - potential_eval(even, 16.0, n);
    CHECK(d16 == Approx(d8 / 128.0).margin(std::abs(d8) * 1e-9));
    CHECK_THROWS_AS(potential_eval(s, 0.0, n), std::domain_error);
}

TEST_CASE("Left and right potentials average to the achiral part") {
    const auto& l = production_surface();
    const PotentialSurface r =
        dispersion_coefficients(default_dataset().susceptibilities(), Handedness::R);
    for (double th : {0.4, 1.2, 2.5})
        for (double ph : {0.0, 1.1, 4.0}) {
            const Eigen::Vector3d n(std::sin(th) * std::cos(ph),
                                    std::sin(th) * std::sin(ph), std::cos(th));
            PotentialSurface even = l;
            even.c3.fill(0.0);
            const double vl = potential_eval(l, 9.0, n);
            const double vr = potential_eval(r, 9.0, n);
            CHECK(0.5 * (vl + vr) == Approx(potential_eval(even, 9.0, n)).margin(1e-14));
        }
}
