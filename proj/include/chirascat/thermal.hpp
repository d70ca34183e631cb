#pragma once
// Maxwell-Boltzmann velocity averaging of collision-rate kernels.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "chirascat/numerics.hpp"
#include "chirascat/units.hpp"

namespace chirascat {

// Most probable speed of the relative motion, a.u.
inline double most_probable_speed(double T_K, double mass_au) {
    return std::sqrt(2.0 * units::kelvin_to_au(T_K) / mass_au);
}

// <v^s> for the Maxwell speed distribution:
//   <v^s> = (2 kT / m)^{s/2} Gamma((3+s)/2) / Gamma(3/2)
inline double maxwell_moment(double T_K, double mass_au, double s) {
    if (s <= -3.0) throw std::domain_error("maxwell_moment: s <= -3 diverges");
    const double vp = most_probable_speed(T_K, mass_au);
    return std::pow(vp, s) *
           std::exp(std::lgamma(0.5 * (3.0 + s)) - std::lgamma(1.5));
}

struct ThermalAverage {
    double value = 0.0;     // <v sigma(v)> in a.u.
    double quad_rel_err = 0.0;  // |numeric <v> / analytic <v> - 1| on the same grid
};

// Maxwell speed density nu(v) = (4/sqrt(pi)) (v^2/v_p^3) exp(-v^2/v_p^2) and
// its cumulative weight (fraction of molecules slower than v).
inline double maxwell_pdf(double v, double T_K, double mass_au) {
    const double vp = most_probable_speed(T_K, mass_au);
    const double u = v / vp;
    return 4.0 / std::sqrt(M_PI) * u * u * std::exp(-u * u) / vp;
}

inline double maxwell_cdf(double v, double T_K, double mass_au) {
    const double u = v / most_probable_speed(T_K, mass_au);
    return std::erf(u) - 2.0 / std::sqrt(M_PI) * u * std::exp(-u * u);
}

// <v K(v)> = (4/sqrt(pi)) v_p Int_0^inf u^3 e^{-u^2} K(v_p u) du, truncated at
// u_max (e^{-u^2} < 1e-28 at u = 8). The same rule applied to K == 1 recovers
// <v>; its deviation from the analytic moment is reported as quad_rel_err so
// callers can see whether the grid resolves the distribution.
inline ThermalAverage maxwell_average_v_kernel(double T_K, double mass_au,
                                               const std::function<double(double)>& kernel,
                                               int npts = 96, double u_max = 8.0) {
    const double vp = most_probable_speed(T_K, mass_au);
    const QuadratureRule gl = map_interval(gauss_legendre(npts), 0.0, u_max);
    double acc = 0.0, acc1 = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double u = gl.x[i];
        const double w = gl.w[i] * u * u * u * std::exp(-u * u);
        acc += w * kernel(vp * u);
        acc1 += w;
    }
    const double pref = 4.0 / std::sqrt(M_PI) * vp;
    ThermalAverage out;
    out.value = pref * acc;
    const double mean_v_exact = maxwell_moment(T_K, mass_au, 1.0);
    out.quad_rel_err = std::abs(pref * acc1 / mean_v_exact - 1.0);
    return out;
}

// Tabulated cross sections eta(v), eps(v) for one entrance level, speeds in
// a.u., strictly increasing.
struct VelocityTable {
    std::vector<double> v, eta, eps;
};

struct RatePrediction {
    double gamma = 0.0;    // decoherence rate n <v eta>, a.u.
    double omega_x = 0.0;  // coherent shift n <v eps>, a.u.
    double coverage = 0.0; // Maxwell weight inside the tabulated speed range
};

// gamma = n_gas sum_a w_a Int dv nu(v) v eta_a(v) with linear interpolation
// inside each table. The tables must cover >= min_coverage of the Maxwell
// weight at this temperature or the average is refused.
inline RatePrediction thermal_average_rates(const std::vector<VelocityTable>& tables,
                                            const std::vector<double>& weights, double T_K,
                                            double m_gas_au, double n_gas_au,
                                            double min_coverage = 0.99) {
    if (tables.size() != weights.size() || tables.empty())
        throw std::invalid_argument("thermal_average_rates: tables/weights mismatch");
    static const QuadratureRule gl8 = gauss_legendre(8);
    RatePrediction out;
    out.coverage = 1.0;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const VelocityTable& tab = tables[t];
        if (tab.v.size() < 2 || tab.eta.size() != tab.v.size() ||
            (!tab.eps.empty() && tab.eps.size() != tab.v.size()))
            throw std::invalid_argument("thermal_average_rates: bad table");
        const double cov = maxwell_cdf(tab.v.back(), T_K, m_gas_au) -
                           maxwell_cdf(tab.v.front(), T_K, m_gas_au);
        out.coverage = std::min(out.coverage, cov);
        double geta = 0.0, geps = 0.0;
        for (std::size_t i = 0; i + 1 < tab.v.size(); ++i) {
            const double a = tab.v[i], b = tab.v[i + 1];
            if (!(b > a)) throw std::invalid_argument("thermal_average_rates: v not increasing");
            for (std::size_t q = 0; q < gl8.x.size(); ++q) {
                const double v = 0.5 * (a + b) + 0.5 * (b - a) * gl8.x[q];
                const double w = 0.5 * (b - a) * gl8.w[q] * maxwell_pdf(v, T_K, m_gas_au) * v;
                const double s = (v - a) / (b - a);
                geta += w * ((1.0 - s) * tab.eta[i] + s * tab.eta[i + 1]);
                if (!tab.eps.empty()) geps += w * ((1.0 - s) * tab.eps[i] + s * tab.eps[i + 1]);
            }
        }
        out.gamma += n_gas_au * weights[t] * geta;
        out.omega_x += n_gas_au * weights[t] * geps;
    }
    if (out.coverage < min_coverage)
        throw std::runtime_error("thermal_average_rates: velocity table covers too little of "
                                 "the thermal distribution");
    return out;
}

}  // namespace chirascat
