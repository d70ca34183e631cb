#pragma once
// High-energy (exponential Born) decoherence cross section for a -C6/r^6
// envelope: eta(k) = beta^2 G(k beta) with beta = (4 m* cbar)^{1/5} the
// chiral-interaction length. The shape function is
//
//   G(x) = (4 pi / x^2) Int_{1/2}^inf dJ (2J+1) sin^2( a x^5 g(J) ),
//   g(J) = Gamma(J - 1/2) / Gamma(J + 11/2),   a = 5 pi / 256.
//
// Numerics: split at J_s where the phase equals pi/2. Above J_s the integrand
// is smooth (mapped Gauss rule). Below J_s, sin^2 = 1/2 - cos(2 Phi)/2; the
// 1/2 integrates analytically and the oscillatory remainder is summed over
// half-period panels (panel edges located by bisection on the monotone phase)
// with epsilon-algorithm acceleration of the alternating partial sums.
//
// Also provides the generic Born/eikonal power-law total cross section
// sigma = p_n (C_n / v)^{2/(n-1)} with p_n in closed form (p_6 = 8.083).

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "chirascat/numerics.hpp"

namespace chirascat {

inline constexpr double born_phase_prefactor = 5.0 * M_PI / 256.0;

// g(J) = Gamma(J - 1/2) / Gamma(J + 11/2); stable to J ~ 1e306 via lgamma.
inline double born_phase_g(double J) {
    return std::exp(std::lgamma(J - 0.5) - std::lgamma(J + 5.5));
}

namespace detail {

// Bisection on a monotone-decreasing f; requires f(lo) > 0 > f(hi).
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at machine resolution
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

struct ShapeFunctionInfo {
    double J_split = 0.0;   // phase = pi/2 boundary
    int panels = 0;         // oscillatory half-period panels used
    double tail_term = 0.0; // |last panel| as a crude truncation scale
};

inline double decoherence_shape_G(double x, ShapeFunctionInfo* info = nullptr) {
    if (!(x > 0.0)) throw std::domain_error("decoherence_shape_G: x <= 0");
    const double a = born_phase_prefactor;
    const double lnK = std::log(a) + 5.0 * std::log(x);
    const double K = std::exp(lnK);
    const auto phase = [&](double J) {
        return std::exp(lnK + std::lgamma(J - 0.5) - std::lgamma(J + 5.5));
    };

    // J_s: phase(J_s) = pi/2. phase is monotone decreasing in J.
    double Jhi = 10.0;
    while (phase(Jhi) > M_PI / 2.0) Jhi *= 2.0;
    const double J_s = detail::bisect_decreasing(
        [&](double J) { return phase(J) - M_PI / 2.0; }, 0.5 + 1e-13, Jhi);

    // Smooth region J in [J_s, inf): substitute J = J_s / t, t in (0, 1].
    static const QuadratureRule gl48 = gauss_legendre(48);
    double smooth = 0.0;
    for (std::size_t i = 0; i < gl48.x.size(); ++i) {
        const double t = 0.5 * (gl48.x[i] + 1.0);
        const double w = 0.5 * gl48.w[i];
        const double J = J_s / t;
        const double s = std::sin(K * born_phase_g(J));
        smooth += w * (2.0 * J + 1.0) * s * s * (J_s / (t * t));
    }

    const double half_part = 0.5 * (J_s * J_s + J_s - 0.75);

    // Oscillatory region J in (1/2, J_s): C = Int (2J+1) cos(2 Phi) dJ over
    // half-period panels Phi in [pi/2 (n+1), pi/2 (n+2)].
    static const QuadratureRule gl16 = gauss_legendre(16);
    const int max_panels = 100;
    std::vector<double> partial;
    partial.reserve(std::size_t(max_panels));
    double sum = 0.0, b_prev = J_s, last_term = 0.0;
    int used = 0;
    for (int n = 1; n <= max_panels; ++n) {
        const double target = std::log(M_PI / 2.0 * (n + 1.0));
        const double b_n = detail::bisect_decreasing(
            [&](double J) {
                return lnK + std::lgamma(J - 0.5) - std::lgamma(J + 5.5) - target;
            },
            0.5 + 1e-14, b_prev);
        double term = 0.0;
        const double c = 0.5 * (b_n + b_prev), hw = 0.5 * (b_prev - b_n);
        for (std::size_t i = 0; i < gl16.x.size(); ++i) {
            const double J = c + hw * gl16.x[i];
            term += hw * gl16.w[i] * (2.0 * J + 1.0) * std::cos(2.0 * phase(J));
        }
        sum += term;
        partial.push_back(sum);
        last_term = term;
        used = n;
        b_prev = b_n;
        if (std::abs(term) < 1e-15 * (1.0 + std::abs(half_part))) break;
    }
    const double C = partial.size() >= 4 ? wynn_epsilon(partial) : sum;

    if (info) {
        info->J_split = J_s;
        info->panels = used;
        info->tail_term = std::abs(last_term);
    }
    return (4.0 * M_PI / (x * x)) * (smooth + half_part - 0.5 * C);
}

// eta(k) = beta^2 G(k beta), wavenumber k and chiral length beta in a.u.
inline double eta_exponential_born(double k, double beta) {
    return beta * beta * decoherence_shape_G(k * beta);
}

// Two-term large-argument form eta = c1 beta^{5/3} k^{-1/3} - c2 beta^{5/6}
// k^{-7/6}; can go negative for k beta below ~5 -- callers wanting a positive
// estimate should use the leading term only.
inline double eta_born_twoterm(double k, double beta, double c1 = 3.66, double c2 = 14.4) {
    const double x = k * beta;
    return beta * beta * (c1 * std::pow(x, -1.0 / 3.0) - c2 * std::pow(x, -7.0 / 6.0));
}

inline double eta_born_leading(double k, double beta, double c1 = 3.66) {
    return c1 * std::pow(beta, 5.0 / 3.0) * std::pow(k, -1.0 / 3.0);
}

// Refit of the large-argument constants from G itself on log-spaced points;
// the x^-2 basis term absorbs the next correction so c1/c2 converge to their
// asymptotic values on a finite window.
struct BornRefit {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double max_rel_resid = 0.0;
    std::vector<double> xs, Gs;
};

inline BornRefit refit_born_constants(double x_lo = 40.0, double x_hi = 400.0, int npts = 13) {
    if (npts < 4 || !(x_hi > x_lo) || !(x_lo > 0.0))
        throw std::invalid_argument("refit_born_constants");
    BornRefit out;
    Eigen::MatrixXd A(npts, 3);
    Eigen::VectorXd b(npts);
    for (int i = 0; i < npts; ++i) {
        const double x =
            std::exp(std::log(x_lo) + (std::log(x_hi) - std::log(x_lo)) * i / (npts - 1.0));
        const double G = decoherence_shape_G(x);
        out.xs.push_back(x);
        out.Gs.push_back(G);
        A(i, 0) = std::pow(x, -1.0 / 3.0);
        A(i, 1) = -std::pow(x, -7.0 / 6.0);
        A(i, 2) = std::pow(x, -2.0);
        b(i) = G;
    }
    Eigen::VectorXd c = least_squares(A, b);
    out.c1 = c(0);
    out.c2 = c(1);
    out.c3 = c(2);
    for (int i = 0; i < npts; ++i) {
        const double fit = A.row(i).dot(c);
        out.max_rel_resid = std::max(out.max_rel_resid, std::abs(fit - b(i)) / std::abs(b(i)));
    }
    return out;
}

// Eikonal/random-phase total cross section for a single inverse-power tail
// V = -C_n / r^n:  sigma(v) = p_n (C_n / v)^{2/(n-1)}, closed-form constant
//   p_n = (4 pi/(n-1)) (2 b_n)^s I_s,  s = 2/(n-1),
//   b_n = (sqrt(pi)/2) Gamma((n-1)/2)/Gamma(n/2),
//   I_s = Int_0^inf (1 - cos t) t^{-1-s} dt = pi / (2 sin(pi s/2) Gamma(1+s)).
inline double born_power_constant(int n) {
    if (n < 3) throw std::domain_error("born_power_constant: n < 3");
    const double s = 2.0 / (n - 1.0);
    const double bn = 0.5 * std::sqrt(M_PI) *
                      std::exp(std::lgamma(0.5 * (n - 1.0)) - std::lgamma(0.5 * n));
    const double Is = M_PI / (2.0 * std::sin(M_PI * s / 2.0) * std::tgamma(1.0 + s));
    return (4.0 * M_PI / (n - 1.0)) * std::pow(2.0 * bn, s) * Is;
}

inline double born_sigma_power(double Cn, double v, int n) {
    return born_power_constant(n) * std::pow(Cn / v, 2.0 / (n - 1.0));
}

}  // namespace chirascat
