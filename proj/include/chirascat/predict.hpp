#pragma once
// Critical pressure for tunneling stabilization: the background pressure at
// which the collisional decoherence rate gamma = n <v eta> equals the
// critical rate gamma_c = w_z / (2 pi) set by the tunneling frequency. With
// the leading high-energy form eta(k) = c1 beta^{5/3} k^{-1/3} (k = m* v),
//
//   <v eta> = c1 beta^{5/3} m*^{-1/3} <v^{2/3}>,   <v^{2/3}> ~ T^{1/3}
//   p_c(T) = gamma_c kB T / <v eta>  ~  T^{2/3}.
//
// A diagnostic variant averages the full shape function G(k beta) instead of
// its leading term; it gives a slightly smaller pressure and a slightly
// shallower effective power law at laboratory temperatures.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chirascat/highenergy.hpp"
#include "chirascat/numerics.hpp"
#include "chirascat/thermal.hpp"
#include "chirascat/units.hpp"

namespace chirascat {

struct PredictParams {
    double omega_z = 0.0;  // tunneling angular frequency, a.u.
    double mstar = 0.0;    // reduced collision mass (sets k = m* v), a.u.
    double m_gas = 0.0;    // gas-atom mass for the speed distribution, a.u.
    double beta = 0.0;     // chiral interaction length, bohr
    double c1 = 3.66;      // leading Born constant
};

// Decoherence rate that defeats tunneling: gamma_c = omega_z / 2 pi, i.e. one
// decohering collision per tunneling cycle (the collision rate itself is then
// ~4x the tunneling frequency since eta/sigma ~ 25%).
inline double critical_rate(double omega_z) { return omega_z / (2.0 * M_PI); }

// <v eta> with the leading-term eta, analytic Maxwell moment. The speed
// distribution is that of the light gas atom (molecule at rest); the
// wavenumber entering eta is k = m* v with the reduced mass.
inline double mean_v_eta_leading(double T_K, const PredictParams& p) {
    return p.c1 * std::pow(p.beta, 5.0 / 3.0) * std::pow(p.mstar, -1.0 / 3.0) *
           maxwell_moment(T_K, p.m_gas, 2.0 / 3.0);
}

inline double critical_pressure_au(double T_K, const PredictParams& p) {
    if (!(T_K > 0.0)) throw std::domain_error("critical_pressure_au: T <= 0");
    return critical_rate(p.omega_z) * units::kelvin_to_au(T_K) / mean_v_eta_leading(T_K, p);
}

inline double critical_pressure_mbar(double T_K, const PredictParams& p) {
    return critical_pressure_au(T_K, p) * units::pressure_au_mbar;
}

// Same but with eta(v) = beta^2 G(m* v beta) averaged numerically.
inline double critical_pressure_fullG_mbar(double T_K, const PredictParams& p) {
    const auto eta = [&](double v) { return eta_exponential_born(p.mstar * v, p.beta); };
    const ThermalAverage av = maxwell_average_v_kernel(T_K, p.m_gas, eta);
    const double pc_au = critical_rate(p.omega_z) * units::kelvin_to_au(T_K) / av.value;
    return pc_au * units::pressure_au_mbar;
}

struct PressureLawFit {
    double exponent = 0.0;        // d ln p_c / d ln T
    double prefactor_mbar = 0.0;  // p_c = prefactor * T^exponent
    std::vector<double> T_K, p_mbar;
};

inline PressureLawFit critical_pressure_law(const PredictParams& p, double T_lo = 100.0,
                                            double T_hi = 600.0, int npts = 13,
                                            bool full_shape = false) {
    if (npts < 2 || !(T_hi > T_lo) || !(T_lo > 0.0))
        throw std::invalid_argument("critical_pressure_law");
    PressureLawFit out;
    std::vector<double> lnT, lnp;
    for (int i = 0; i < npts; ++i) {
        const double T =
            std::exp(std::log(T_lo) + (std::log(T_hi) - std::log(T_lo)) * i / (npts - 1.0));
        const double pc =
            full_shape ? critical_pressure_fullG_mbar(T, p) : critical_pressure_mbar(T, p);
        out.T_K.push_back(T);
        out.p_mbar.push_back(pc);
        lnT.push_back(std::log(T));
        lnp.push_back(std::log(pc));
    }
    const auto [intercept, slope] = linear_fit(lnT, lnp);
    out.exponent = slope;
    out.prefactor_mbar = std::exp(intercept);
    return out;
}

}  // namespace chirascat
