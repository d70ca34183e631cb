#pragma once
// Effective two-state master equation for the tunneling doublet of a chiral
// molecule under collisional decoherence, written for the coherence vector
// r = (r1, r2, r3):
//
//   d/dt r = M r,   M = [ 0      -w_z    0   ]
//                       [ w_z    -gamma  -w_x]
//                       [ 0       w_x    -gamma]
//
// w_z is the tunneling splitting frequency, w_x a possible bias, and gamma
// the collisional localization rate; the collisional environment damps the
// two chirality-sensitive components while the population-like component r1
// is damped only indirectly through its precession into them. For
// gamma >> w_z the spectrum splits into one slow mode ~ w_z^2/gamma (the
// stabilized tunneling decay) and fast modes ~ gamma.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace chirascat {

struct MasterParams {
    double omega_z = 0.0;  // tunneling frequency, a.u. (or any coherent unit)
    double omega_x = 0.0;  // bias frequency, same unit
    double gamma = 0.0;    // decoherence rate, same unit
};

inline Eigen::Matrix3d master_generator(const MasterParams& p) {
    Eigen::Matrix3d M;
    M << 0.0, -p.omega_z, 0.0,
         p.omega_z, -p.gamma, -p.omega_x,
         0.0, p.omega_x, -p.gamma;
    return M;
}

struct MasterSpectrum {
    std::vector<std::complex<double>> eigenvalues;  // of M
    std::vector<double> decay_rates;                // -Re(lambda), ascending
    double slow = 0.0;                              // smallest decay rate
    double fast_min = 0.0;                          // smallest of the rest
    double oscillation = 0.0;                       // max |Im(lambda)|
};

inline MasterSpectrum master_spectrum(const MasterParams& p) {
    Eigen::EigenSolver<Eigen::Matrix3d> es(master_generator(p));
    MasterSpectrum out;
    for (int i = 0; i < 3; ++i) {
        const std::complex<double> ev = es.eigenvalues()(i);
        out.eigenvalues.push_back(ev);
        out.decay_rates.push_back(-ev.real());
        out.oscillation = std::max(out.oscillation, std::abs(ev.imag()));
    }
    std::sort(out.decay_rates.begin(), out.decay_rates.end());
    out.slow = out.decay_rates.front();
    out.fast_min = out.decay_rates[1];
    return out;
}

// With w_x = 0 the (r1, r2) block closes on itself:
//   rates = gamma/2 -+ sqrt(gamma^2/4 - w_z^2), plus the bare gamma of r3;
// the pair coalesces at gamma = 2 w_z (underdamped below, overdamped above).
inline double slow_rate_closed_form(double omega_z, double gamma) {
    const double disc = 0.25 * gamma * gamma - omega_z * omega_z;
    if (disc >= 0.0) return 0.5 * gamma - std::sqrt(disc);
    return 0.5 * gamma;  // underdamped: both modes decay at gamma/2
}

// Propagate the coherence vector by the exact matrix exponential (robust at
// the gamma = 2 w_z exceptional point where M is defective).
inline Eigen::Vector3d evolve_state(const MasterParams& p, const Eigen::Vector3d& r0, double t) {
    const Eigen::Matrix3d Mt = master_generator(p) * t;
    return Mt.exp() * r0;
}

}  // namespace chirascat
