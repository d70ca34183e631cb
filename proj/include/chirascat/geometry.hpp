#pragma once
// Molecular geometry: builds the deuterated disulfane (D2S2) skeleton in a
// canonical body-fixed principal-axis frame and exposes moments of inertia.
//
// Canonical frame convention (fixed here, relied upon by the response and
// dispersion modules): z is the principal axis with the smallest moment of
// inertia (the near-symmetric-top a axis, close to the S-S bond), y is the
// intermediate b axis which coincides with the C2 symmetry axis, and
// x = y cross z completes a right-handed triad. Signs are pinned by requiring
// z . r(S1) > 0 and y . r(D1) > 0.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "chirascat/units.hpp"

namespace chirascat {

struct Atom {
    std::string element;
    double mass_amu = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();  // bohr
};

struct GeometryParams {
    double r_ss_angstrom = 2.05;   // S-S bond length
    double r_sd_angstrom = 1.34;   // S-D bond length
    double angle_dss_deg = 100.4;  // D-S-S bond angle
    double dihedral_deg = 90.3;    // D-S-S-D dihedral
};

inline constexpr double mass_S_amu = 31.97207100;   // 32S
inline constexpr double mass_D_amu = 2.014101778;   // 2H
inline constexpr double mass_He_amu = 4.002602;     // 4He (background gas)

// Atoms ordered S1, S2, D1, D2. `mirror` builds the opposite enantiomer by
// inverting all coordinates through the origin.
inline std::vector<Atom> d2s2_atoms(const GeometryParams& g = {}, bool mirror = false) {
    const double deg = M_PI / 180.0;
    const double th = (180.0 - g.angle_dss_deg) * deg;  // polar angle of S-D from the S-S axis
    const double half = 0.5 * g.dihedral_deg * deg;
    const double st = std::sin(th), ct = std::cos(th);

    Eigen::Vector3d s1(0.0, 0.0, +0.5 * g.r_ss_angstrom);
    Eigen::Vector3d s2(0.0, 0.0, -0.5 * g.r_ss_angstrom);
    Eigen::Vector3d d1 = s1 + g.r_sd_angstrom * Eigen::Vector3d(st * std::cos(half),
                                                                st * std::sin(half), ct);
    Eigen::Vector3d d2 = s2 + g.r_sd_angstrom * Eigen::Vector3d(st * std::cos(-half),
                                                                st * std::sin(-half), -ct);
    const double scale = (mirror ? -1.0 : 1.0) * units::angstrom;
    return {{"S", mass_S_amu, scale * s1},
            {"S", mass_S_amu, scale * s2},
            {"D", mass_D_amu, scale * d1},
            {"D", mass_D_amu, scale * d2}};
}

struct InertiaResult {
    Eigen::Vector3d moments = Eigen::Vector3d::Zero();  // ascending, a.u. (m_e * bohr^2)
    Eigen::Matrix3d axes = Eigen::Matrix3d::Identity(); // rows: principal axes a, b, c
    bool collinear = false;  // smallest moment consistent with a linear arrangement
};

// Principal moments of inertia about the center of mass, ascending.
inline InertiaResult moments_of_inertia(const std::vector<Atom>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("moments_of_inertia: no atoms");
    Eigen::Vector3d com = Eigen::Vector3d::Zero();
    double mtot = 0.0;
    for (const auto& a : atoms) {
        const double m = a.mass_amu * units::amu;
        com += m * a.position;
        mtot += m;
    }
    com /= mtot;
    Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
    double r2max = 0.0;
    for (const auto& a : atoms) {
        const double m = a.mass_amu * units::amu;
        const Eigen::Vector3d r = a.position - com;
        inertia += m * (r.squaredNorm() * Eigen::Matrix3d::Identity() - r * r.transpose());
        r2max = std::max(r2max, r.squaredNorm());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(inertia);
    InertiaResult out;
    out.moments = es.eigenvalues();              // ascending
    out.axes = es.eigenvectors().transpose();    // row i = axis of moments(i)
    out.collinear = out.moments(0) < 1e-10 * (mtot * r2max + 1e-300);
    return out;
}

struct BodyFrame {
    std::vector<Atom> atoms;        // positions relative to COM, canonical axes
    Eigen::Matrix3d rotation;       // rows = body axes (x, y, z) in input coordinates
    Eigen::Vector3d moments;        // ascending principal moments, a.u.
    Eigen::Vector3d rot_consts_K;   // (A, B, C) in kelvin, descending
};

// Shift to the center of mass and rotate into the canonical frame described
// at the top of this header. Requires an asymmetric-top arrangement with the
// first atom off the a axis sign-fixable (true for the disulfane skeleton).
inline BodyFrame body_frame(std::vector<Atom> atoms) {
    Eigen::Vector3d com = Eigen::Vector3d::Zero();
    double mtot = 0.0;
    for (const auto& a : atoms) {
        const double m = a.mass_amu * units::amu;
        com += m * a.position;
        mtot += m;
    }
    com /= mtot;
    for (auto& a : atoms) a.position -= com;

    const InertiaResult ir = moments_of_inertia(atoms);
    if (ir.collinear) throw std::domain_error("body_frame: collinear arrangement has no asymmetric-top frame");

    Eigen::Vector3d zax = ir.axes.row(0);  // a axis: smallest moment
    Eigen::Vector3d yax = ir.axes.row(1);  // b axis
    if (zax.dot(atoms[0].position) < 0.0) zax = -zax;
    if (atoms.size() > 2 && yax.dot(atoms[2].position) < 0.0) yax = -yax;
    const Eigen::Vector3d xax = yax.cross(zax);

    BodyFrame bf;
    bf.rotation.row(0) = xax;
    bf.rotation.row(1) = yax;
    bf.rotation.row(2) = zax;
    bf.moments = ir.moments;
    for (auto& a : atoms) a.position = bf.rotation * a.position;
    bf.atoms = std::move(atoms);
    for (int i = 0; i < 3; ++i)
        bf.rot_consts_K(i) = units::au_to_kelvin(1.0 / (2.0 * ir.moments(i)));
    return bf;
}

}  // namespace chirascat
