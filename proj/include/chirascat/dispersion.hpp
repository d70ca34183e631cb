#pragma once
// Dispersion interaction between the chiral molecule and a helium atom,
// expanded in the orientation n of the atom in the body frame:
//
//   V(r, n) = -(1/r^6) [ C6 + sum_mu c2_mu Y_2mu(n) ] - (1/r^7) sum_mu c3_mu Y_3mu(n)
//
// C6 and the lambda = 2 anisotropy come from the Casimir-Polder integral of
// the dipole polarizabilities; the lambda = 3 part is the leading chiral
// (parity-odd) term built from the mixed dipole-quadrupole response A(iw).
// Mirror-image molecules have c3 -> -c3 with C6 and c2 unchanged, which is
// encoded as a handedness sign rather than a second coefficient set.
//
// Frequency integrals use an 80-point Gauss-Legendre rule mapped by
// w = w0 (1+t)/(1-t); angular projections use a Gauss x uniform sphere grid.
// Both are doubled to attach a quadrature error estimate to the result.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "chirascat/angular.hpp"
#include "chirascat/numerics.hpp"
#include "chirascat/response.hpp"
#include "chirascat/rotor.hpp"

namespace chirascat {

// Everything needed to evaluate the molecule + atom response at one frequency.
struct SusceptibilitySet {
    GeometryParams geometry{};
    BondIncrementTable increments{};
    DrudeParams drude{};
    HeliumResponse helium{};
};

enum class Handedness : int { L = +1, R = -1 };

struct PotentialSurface {
    double C6 = 0.0;                          // isotropic r^-6 coefficient (a.u.)
    std::array<std::complex<double>, 5> c2{}; // mu = -2..2, lambda = 2 anisotropy
    std::array<std::complex<double>, 7> c3{}; // mu = -3..3, chiral lambda = 3 part
    Handedness handedness = Handedness::L;
    double r_core = 4.0;                      // inner wall of the radial grid (bohr)
    double cbar = 0.0;                        // rms chiral strength sqrt(sum|c3|^2/4pi)
    double quadrature_error = 0.0;            // doubling estimate on C6 and projections
    std::complex<double> c2_mu(int mu) const { return c2[std::size_t(mu + 2)]; }
    // Chiral coefficients carry the handedness sign.
    std::complex<double> c3_mu(int mu) const {
        return double(static_cast<int>(handedness)) * c3[std::size_t(mu + 3)];
    }
    PotentialSurface mirrored() const {
        PotentialSurface s = *this;
        s.handedness = (handedness == Handedness::L) ? Handedness::R : Handedness::L;
        return s;
    }
};

namespace detail {

struct SphereGrid {
    std::vector<double> theta, phi, weight;  // flattened Gauss(theta) x uniform(phi)
    std::vector<Eigen::Vector3d> n;
};

inline SphereGrid sphere_grid(int nth, int nph) {
    const QuadratureRule gl = gauss_legendre(nth);
    SphereGrid g;
    g.theta.reserve(std::size_t(nth * nph));
    for (int i = 0; i < nth; ++i) {
        const double ct = gl.x[std::size_t(i)];
        const double th = std::acos(ct);
        const double st = std::sin(th);
        for (int k = 0; k < nph; ++k) {
            const double ph = 2.0 * M_PI * k / nph;
            g.theta.push_back(th);
            g.phi.push_back(ph);
            g.weight.push_back(gl.w[std::size_t(i)] * 2.0 * M_PI / nph);
            g.n.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
        }
    }
    return g;
}

// One full Casimir-Polder + projection pass at given quadrature resolution.
struct DispersionPass {
    double C6 = 0.0;
    std::array<std::complex<double>, 5> c2{};
    std::array<std::complex<double>, 7> c3{};
    std::array<std::complex<double>, 3> c1{};  // diagnostic only (dropped from V)
};

inline DispersionPass dispersion_pass(const SusceptibilitySet& in,
                                      const std::vector<Atom>& atoms,
                                      int nfreq, int nth, int nph) {
    const std::vector<Eigen::Matrix3d> alpha0 = atomic_polarizabilities(atoms, in.increments);
    std::vector<double> w0(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i)
        w0[i] = atom_drude_frequency(atoms[i], in.drude);

    const QuadratureRule gl = gauss_legendre(nfreq);
    const SphereGrid grid = sphere_grid(nth, nph);

    DispersionPass out;
    Eigen::Matrix3d Gamma = Eigen::Matrix3d::Zero();
    std::vector<double> Wn(grid.n.size(), 0.0);  // chiral kernel on the sphere

    const double wmap = 0.5;  // frequency map scale
    for (int q = 0; q < nfreq; ++q) {
        const double t = gl.x[std::size_t(q)];
        const double w = wmap * (1.0 + t) / (1.0 - t);
        const double dw = gl.w[std::size_t(q)] * 2.0 * wmap / ((1.0 - t) * (1.0 - t));
        const double ah = in.helium.alpha(w);

        std::vector<Eigen::Matrix3d> alpha_w(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i)
            alpha_w[i] = alpha0[i] * drude_factor(w0[i], w);
        const MoleculeTensors mt = molecule_tensors(atoms, alpha_w);

        const double abar = mt.alpha_mean();
        out.C6 += (3.0 / M_PI) * abar * ah * dw;
        Gamma += (1.5 / M_PI) * ah * (mt.alpha - abar * Eigen::Matrix3d::Identity()) * dw;

        const Eigen::Vector3d v = mt.A_contraction();
        for (std::size_t g = 0; g < grid.n.size(); ++g)
            Wn[g] += (1.0 / M_PI) * ah * (4.0 * mt.A_triple(grid.n[g]) + 2.0 * grid.n[g].dot(v)) * dw;
    }

    const auto project = [&](int lam, const std::vector<double>& f,
                             std::complex<double>* dst) {
        for (int mu = -lam; mu <= lam; ++mu) {
            std::complex<double> acc = 0.0;
            for (std::size_t g = 0; g < grid.n.size(); ++g)
                acc += grid.weight[g] * f[g] *
                       std::conj(spherical_harmonic(lam, mu, grid.theta[g], grid.phi[g]));
            dst[mu + lam] = acc;
        }
    };
    std::vector<double> gamma_nn(grid.n.size());
    for (std::size_t g = 0; g < grid.n.size(); ++g)
        gamma_nn[g] = grid.n[g].dot(Gamma * grid.n[g]);
    project(2, gamma_nn, out.c2.data());
    project(3, Wn, out.c3.data());
    project(1, Wn, out.c1.data());
    return out;
}

}  // namespace detail

// Full dispersion surface for one enantiomer, with a doubling error estimate.
inline PotentialSurface dispersion_coefficients(const SusceptibilitySet& in,
                                                Handedness hand = Handedness::L,
                                                int nfreq = 80, int nth = 12, int nph = 24) {
    const std::vector<Atom> atoms = body_frame(d2s2_atoms(in.geometry)).atoms;
    const detail::DispersionPass base = detail::dispersion_pass(in, atoms, nfreq, nth, nph);
    const detail::DispersionPass fine =
        detail::dispersion_pass(in, atoms, 2 * nfreq, 2 * nth, 2 * nph);

    PotentialSurface s;
    s.C6 = fine.C6;
    s.c2 = fine.c2;
    s.c3 = fine.c3;
    s.handedness = hand;
    double err = std::abs(fine.C6 - base.C6);
    for (int i = 0; i < 5; ++i) err = std::max(err, std::abs(fine.c2[std::size_t(i)] - base.c2[std::size_t(i)]));
    for (int i = 0; i < 7; ++i) err = std::max(err, std::abs(fine.c3[std::size_t(i)] - base.c3[std::size_t(i)]));
    s.quadrature_error = err;
    double sum = 0.0;
    for (const auto& c : s.c3) sum += std::norm(c);
    s.cbar = std::sqrt(sum / (4.0 * M_PI));
    return s;
}

// Characteristic chiral length beta = (4 m* cbar)^(1/5) (bohr).
inline double beta_parameter(const PotentialSurface& s, double mstar) {
    if (s.cbar <= 0.0) return 0.0;
    return std::pow(4.0 * mstar * s.cbar, 0.2);
}

// V(r, n) in hartree; n is the unit vector from molecule to atom in the body
// frame. Real by construction (coefficients satisfy c_{lam,-mu} = (-1)^mu
// conj(c_{lam,mu})); the imaginary residual is discarded after a sanity bound.
inline double potential_eval(const PotentialSurface& s, double r, const Eigen::Vector3d& n) {
    if (r <= 0.0) throw std::domain_error("potential_eval: r <= 0");
    const double theta = std::acos(std::clamp(n.z() / n.norm(), -1.0, 1.0));
    const double phi = std::atan2(n.y(), n.x());
    std::complex<double> even = s.C6;
    for (int mu = -2; mu <= 2; ++mu)
        even += s.c2_mu(mu) * spherical_harmonic(2, mu, theta, phi);
    std::complex<double> odd = 0.0;
    for (int mu = -3; mu <= 3; ++mu)
        odd += s.c3_mu(mu) * spherical_harmonic(3, mu, theta, phi);
    const double r3 = r * r * r, r6 = r3 * r3;
    const std::complex<double> v = -even / r6 - odd / (r6 * r);
    return v.real();
}

}  // namespace chirascat
