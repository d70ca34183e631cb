#pragma once
// Angular-momentum algebra: Wigner 3j/6j symbols, Clebsch-Gordan coefficients,
// spherical harmonics and small-d rotation matrices.
//
// Symbols are evaluated with the Racah sum over log-factorials so that values
// stay finite and accurate up to j of several hundred. The Condon-Shortley
// phase convention is fixed globally; every coupling-matrix sign in the
// library depends on this one convention.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace chirascat {

// Angular momentum stored as twice its value so integer and half-integer
// momenta share one exact integer representation.
struct HalfInt {
    int twice = 0;
    constexpr HalfInt() = default;
    constexpr HalfInt(int j) : twice(2 * j) {}  // NOLINT: implicit by design
    static constexpr HalfInt from_twice(int t) {
        HalfInt h;
        h.twice = t;
        return h;
    }
    constexpr double value() const { return 0.5 * twice; }
    constexpr bool is_integer() const { return twice % 2 == 0; }
    friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
};

namespace detail {

// log(n!) for integer n, cached. Index by n.
inline double lfact(int n) {
    static const auto table = [] {
        std::array<double, 1024> t{};
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(double(i));
        return t;
    }();
    if (n < 0) return std::numeric_limits<double>::quiet_NaN();
    if (std::size_t(n) < 1024) return table[std::size_t(n)];
    return std::lgamma(double(n) + 1.0);
}

// Triangle coefficient sqrt(Delta(a,b,c)) in log form; all args are twice-values.
// Returns false when the triangle rule fails.
inline bool log_triangle(int ta, int tb, int tc, double& out) {
    const int s1 = (ta + tb - tc) / 2, s2 = (ta - tb + tc) / 2, s3 = (-ta + tb + tc) / 2;
    if (s1 < 0 || s2 < 0 || s3 < 0) return false;
    if ((ta + tb - tc) % 2 != 0) return false;  // non-integer perimeter
    out = 0.5 * (lfact(s1) + lfact(s2) + lfact(s3) - lfact((ta + tb + tc) / 2 + 1));
    return true;
}

}  // namespace detail

// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Zero on any selection-rule failure;
// std::domain_error for negative j or |m| > j.
inline double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                       HalfInt m1, HalfInt m2, HalfInt m3) {
    const int tj1 = j1.twice, tj2 = j2.twice, tj3 = j3.twice;
    const int tm1 = m1.twice, tm2 = m2.twice, tm3 = m3.twice;
    if (tj1 < 0 || tj2 < 0 || tj3 < 0) throw std::domain_error("wigner3j: negative j");
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3)
        throw std::domain_error("wigner3j: |m| > j");
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0)
        return 0.0;  // m must differ from j by an integer
    double logdelta;
    if (!detail::log_triangle(tj1, tj2, tj3, logdelta)) return 0.0;

    // Racah sum; all indices below are plain integers (halves of even twos).
    const int t1 = (tj2 - tm1 - tj3) / 2;
    const int t2 = (tj1 + tm2 - tj3) / 2;
    const int t3 = (tj1 + tj2 - tj3) / 2;
    const int t4 = (tj1 - tm1) / 2;
    const int t5 = (tj2 + tm2) / 2;
    const int tmin = std::max({0, t1, t2});
    const int tmax = std::min({t3, t4, t5});
    if (tmin > tmax) return 0.0;

    const double logpref =
        logdelta + 0.5 * (detail::lfact((tj1 + tm1) / 2) + detail::lfact((tj1 - tm1) / 2) +
                          detail::lfact((tj2 + tm2) / 2) + detail::lfact((tj2 - tm2) / 2) +
                          detail::lfact((tj3 + tm3) / 2) + detail::lfact((tj3 - tm3) / 2));
    double sum = 0.0, comp = 0.0;  // Kahan-compensated alternating sum
    for (int t = tmin; t <= tmax; ++t) {
        const double lt = detail::lfact(t) + detail::lfact(t - t1) + detail::lfact(t - t2) +
                          detail::lfact(t3 - t) + detail::lfact(t4 - t) + detail::lfact(t5 - t);
        const double term = ((t % 2) ? -1.0 : 1.0) * std::exp(logpref - lt);
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    const int phase_t = (tj1 - tj2 - tm3) / 2;
    const double phase = (((phase_t % 2) + 2) % 2) ? -1.0 : 1.0;
    return phase * sum;
}

// Wigner 6j symbol {j1 j2 j3; l1 l2 l3}. Zero on triangle violations.
inline double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                       HalfInt l1, HalfInt l2, HalfInt l3) {
    const int a = j1.twice, b = j2.twice, c = j3.twice;
    const int d = l1.twice, e = l2.twice, f = l3.twice;
    if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0 || f < 0)
        throw std::domain_error("wigner6j: negative j");
    double d1, d2, d3, d4;
    if (!detail::log_triangle(a, b, c, d1)) return 0.0;
    if (!detail::log_triangle(a, e, f, d2)) return 0.0;
    if (!detail::log_triangle(d, b, f, d3)) return 0.0;
    if (!detail::log_triangle(d, e, c, d4)) return 0.0;

    const int s1 = (a + b + c) / 2, s2 = (a + e + f) / 2;
    const int s3 = (d + b + f) / 2, s4 = (d + e + c) / 2;
    const int q1 = (a + b + d + e) / 2, q2 = (b + c + e + f) / 2, q3 = (c + a + f + d) / 2;
    const int tmin = std::max({s1, s2, s3, s4});
    const int tmax = std::min({q1, q2, q3});
    if (tmin > tmax) return 0.0;

    const double logpref = d1 + d2 + d3 + d4;
    double sum = 0.0, comp = 0.0;
    for (int t = tmin; t <= tmax; ++t) {
        const double lt = detail::lfact(t - s1) + detail::lfact(t - s2) + detail::lfact(t - s3) +
                          detail::lfact(t - s4) + detail::lfact(q1 - t) + detail::lfact(q2 - t) +
                          detail::lfact(q3 - t) - detail::lfact(t + 1);
        const double term = ((t % 2) ? -1.0 : 1.0) * std::exp(logpref - lt);
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M>.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                             HalfInt J, HalfInt M) {
    if (m1.twice + m2.twice != M.twice) return 0.0;
    const int phase_t = (j1.twice - j2.twice + M.twice) / 2;
    const double phase = (((phase_t % 2) + 2) % 2) ? -1.0 : 1.0;
    return phase * std::sqrt(double(J.twice) + 1.0) *
           wigner3j(j1, j2, J, m1, m2, HalfInt::from_twice(-M.twice));
}

// Complex spherical harmonic Y_lm(theta, phi), Condon-Shortley phase.
inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic: |m| > l");
    const int am = std::abs(m);
    // std::sph_legendre includes the Condon-Shortley phase and normalization.
    double base = std::sph_legendre(unsigned(l), unsigned(am), theta);
    if (m < 0 && (am % 2)) base = -base;  // Y_{l,-m} = (-1)^m conj(Y_{lm})
    return base * std::complex<double>(std::cos(m * phi), std::sin(m * phi));
}

// Wigner small-d matrix element d^j_{m'm}(beta) by the explicit factorial sum.
// Used as an independent oracle for rotation/coupling tests.
inline double wigner_small_d(HalfInt j, HalfInt mp, HalfInt m, double beta) {
    const int tj = j.twice, tmp = mp.twice, tm = m.twice;
    if (std::abs(tmp) > tj || std::abs(tm) > tj) return 0.0;
    const double cb = std::cos(beta / 2), sb = std::sin(beta / 2);
    const int jpm = (tj + tm) / 2, jmm = (tj - tm) / 2;
    const int jpmp = (tj + tmp) / 2, jmmp = (tj - tmp) / 2;
    const double lognum = 0.5 * (detail::lfact(jpm) + detail::lfact(jmm) +
                                 detail::lfact(jpmp) + detail::lfact(jmmp));
    const int tmin = std::max(0, (tm - tmp) / 2);
    const int tmax = std::min(jpm, jmmp);
    double s = 0.0;
    for (int t = tmin; t <= tmax; ++t) {
        const double logden = detail::lfact(jpm - t) + detail::lfact(t) +
                              detail::lfact(jmmp - t) + detail::lfact(t + (tmp - tm) / 2);
        const int ec = tj + (tm - tmp) / 2 - 2 * t;  // cos exponent: 2j + m - m' - 2t
        const int es = 2 * t + (tmp - tm) / 2;       // sin exponent: 2t + m' - m
        const int ph = t + (tmp - tm) / 2;
        const double term = (((ph % 2) + 2) % 2 ? -1.0 : 1.0) * std::exp(lognum - logden) *
                            std::pow(cb, ec) * std::pow(sb, es);
        s += term;
    }
    return s;
}

// Full Wigner rotation matrix element D^j_{m'm}(alpha, beta, gamma) for the
// active z-y-z rotation R = Rz(alpha) Ry(beta) Rz(gamma).
inline std::complex<double> wigner_D(HalfInt j, HalfInt mp, HalfInt m,
                                     double alpha, double beta, double gamma) {
    const double mpv = mp.value(), mv = m.value();
    const std::complex<double> ea(std::cos(-mpv * alpha), std::sin(-mpv * alpha));
    const std::complex<double> eg(std::cos(-mv * gamma), std::sin(-mv * gamma));
    return ea * wigner_small_d(j, mp, m, beta) * eg;
}

}  // namespace chirascat
