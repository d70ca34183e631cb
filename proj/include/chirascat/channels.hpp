#pragma once
// Coupled-channel basis for atom + asymmetric-top scattering at fixed total
// angular momentum J and Wang block index ("parity" label).
//
// A channel is a rotor level paired with an orbital angular momentum l in the
// triangle range |J - j| .. J + j. Both l parities appear in one block: the
// parity-even r^-6 anisotropy couples equal l parity, the chiral r^-7 term
// couples opposite l parity, and the Wang index is conserved by both.
//
// Coupling matrix element (body-frame expansion coefficients a_k, a'_k'):
//   <(j' tau' l') J | sum_mu c_lam_mu Y_lam_mu(n) | (j tau l) J>
//     = (-1)^(J+lam) sqrt[(2l+1)(2l'+1)(2j+1)(2j'+1)(2lam+1)/4pi]
//       (l' lam l; 0 0 0) {j l J; l' j' lam}
//       sum_{mu k' k} a'_k' a_k c_lam_mu (-1)^k (j' lam j; k' mu -k)
// verified against an independent Wigner-D double-quadrature oracle.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "chirascat/angular.hpp"
#include "chirascat/dispersion.hpp"
#include "chirascat/rotor.hpp"
#include "chirascat/units.hpp"

namespace chirascat {

// Exact i^n for integer n (std::pow on complex goes through polar form and
// leaves roundoff in what should be exact zeros).
inline std::complex<double> unit_imag_power(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

struct Channel {
    int level_index = 0;  // into the level list used to build the basis
    int j = 0;
    int tau = 0;
    int l = 0;
    double threshold_K = 0.0;
    double k2 = 0.0;  // asymptotic wavenumber squared, a.u. (negative = closed)
    bool open() const { return k2 > 0.0; }
};

struct TruncationParams {
    int j_max = 4;              // rotor basis cutoff
    double closed_max_K = 34.0; // keep closed levels up to this much above E
};

// Default basis-truncation policy at collision energy E: retain closed levels
// up to twice the collision energy above threshold, and rotor states up to two
// quanta beyond the highest open level. Convergence under doubling of either
// cutoff is checked by the convergence suite.
inline TruncationParams default_truncation(const std::vector<RotorState>& levels,
                                           double energy_K) {
    if (energy_K <= 0.0) throw std::invalid_argument("default_truncation: E <= 0");
    int j_open = 0;
    for (const auto& lv : levels)
        if (lv.energy_K <= energy_K && lv.j > j_open) j_open = lv.j;
    return TruncationParams{j_open + 2, 2.0 * energy_K};
}

struct ChannelBasis {
    int J = 0;
    int parity = +1;  // Wang block index epsilon
    double energy_K = 0.0;
    double mstar = 0.0;
    std::vector<Channel> channels;
    std::vector<RotorState> levels;  // full level list, indexed by level_index
    int n() const { return int(channels.size()); }
    int n_open() const {
        int c = 0;
        for (const auto& ch : channels) c += ch.open() ? 1 : 0;
        return c;
    }
    const RotorState& level_of(const Channel& ch) const {
        return levels[std::size_t(ch.level_index)];
    }
};

// Deterministic channel ordering: by threshold, then j, then l. Open channels
// automatically precede closed ones because thresholds sort first.
inline ChannelBasis build_channel_basis(const std::vector<RotorState>& levels, int J,
                                        int parity, double energy_K, double mstar,
                                        const TruncationParams& trunc = {}) {
    if (J < 0) throw std::invalid_argument("build_channel_basis: J < 0");
    ChannelBasis basis;
    basis.J = J;
    basis.parity = parity;
    basis.energy_K = energy_K;
    basis.mstar = mstar;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const RotorState& lv = levels[i];
        if (lv.parity != parity || lv.j > trunc.j_max) continue;
        if (lv.energy_K > energy_K + trunc.closed_max_K) continue;
        for (int l = std::abs(J - lv.j); l <= J + lv.j; ++l) {
            Channel ch;
            ch.level_index = int(i);
            ch.j = lv.j;
            ch.tau = lv.tau;
            ch.l = l;
            ch.threshold_K = lv.energy_K;
            ch.k2 = 2.0 * mstar * units::kelvin_to_au(energy_K - lv.energy_K);
            basis.channels.push_back(ch);
        }
    }
    std::sort(basis.channels.begin(), basis.channels.end(), [](const Channel& a, const Channel& b) {
        if (a.threshold_K != b.threshold_K) return a.threshold_K < b.threshold_K;
        if (a.j != b.j) return a.j < b.j;
        return a.l < b.l;
    });
    basis.levels = levels;
    return basis;
}

// Matrix element defined in the header comment. c_mu spans mu = -lam..lam.
inline std::complex<double> coupling_element(const RotorState& lp, int llp,
                                             const RotorState& lv, int ll, int J, int lam,
                                             const std::complex<double>* c_mu) {
    const double t1 = wigner3j(llp, lam, ll, 0, 0, 0);
    if (t1 == 0.0) return 0.0;
    const double t2 = wigner6j(lv.j, ll, J, llp, lp.j, lam);
    if (t2 == 0.0) return 0.0;
    std::complex<double> ksum = 0.0;
    for (int mu = -lam; mu <= lam; ++mu) {
        const std::complex<double> cval = c_mu[std::size_t(mu + lam)];
        if (cval == std::complex<double>(0.0, 0.0)) continue;
        for (int kp = -lp.j; kp <= lp.j; ++kp) {
            const double ap = lp.coeff(kp);
            if (ap == 0.0) continue;
            const int k = kp + mu;
            if (std::abs(k) > lv.j) continue;
            const double a = lv.coeff(k);
            if (a == 0.0) continue;
            const double sgn = (((k % 2) + 2) % 2) ? -1.0 : 1.0;
            ksum += ap * a * cval * sgn * wigner3j(lp.j, lam, lv.j, kp, mu, -k);
        }
    }
    const double pref = std::sqrt((2.0 * ll + 1) * (2.0 * llp + 1) * (2.0 * lv.j + 1) *
                                  (2.0 * lp.j + 1) * (2.0 * lam + 1) / (4.0 * M_PI));
    const double phase = ((J + lam) % 2) ? -1.0 : 1.0;
    return phase * pref * t1 * t2 * ksum;
}

// Precomputed r-independent coupling matrices for one block:
//   V(r) = -(C6 I + M6)/r^6 - handedness * M7 / r^7
// with M6 hermitian from the lambda = 2 coefficients and M7 hermitian from
// the lambda = 3 (left-handed) coefficients.
struct CouplingMatrix {
    Eigen::MatrixXcd M6;  // <a| sum c2_mu Y_2mu |b>
    Eigen::MatrixXcd M7;  // <a| sum c3_mu Y_3mu |b>, L-handed coefficients
    double C6 = 0.0;
    int handedness = +1;
};

inline CouplingMatrix coupling_matrix(const ChannelBasis& basis, const PotentialSurface& surf) {
    const int n = basis.n();
    CouplingMatrix cm;
    cm.C6 = surf.C6;
    cm.handedness = static_cast<int>(surf.handedness);
    cm.M6 = Eigen::MatrixXcd::Zero(n, n);
    cm.M7 = Eigen::MatrixXcd::Zero(n, n);
    std::array<std::complex<double>, 5> c2 = surf.c2;
    std::array<std::complex<double>, 7> c3 = surf.c3;  // L-handed; sign applied later
    for (int a = 0; a < n; ++a) {
        const Channel& ca = basis.channels[std::size_t(a)];
        const RotorState& la = basis.level_of(ca);
        for (int b = 0; b < n; ++b) {
            const Channel& cb = basis.channels[std::size_t(b)];
            const RotorState& lb = basis.level_of(cb);
            cm.M6(a, b) = coupling_element(la, ca.l, lb, cb.l, basis.J, 2, c2.data());
            cm.M7(a, b) = coupling_element(la, ca.l, lb, cb.l, basis.J, 3, c3.data());
        }
    }
    const double herm6 = (cm.M6 - cm.M6.adjoint()).cwiseAbs().maxCoeff();
    const double herm7 = (cm.M7 - cm.M7.adjoint()).cwiseAbs().maxCoeff();
    if (std::max(herm6, herm7) > 1e-10)
        throw std::runtime_error("coupling_matrix: coupling not hermitian");
    return cm;
}

// Same, but for arbitrary single-lambda coefficient sets (used by the
// synthetic test system with a lambda = 1 chiral coupling).
inline CouplingMatrix coupling_matrix_custom(
    const ChannelBasis& basis, double C6, int handedness,
    const std::map<int, std::vector<std::complex<double>>>& even_terms,
    const std::map<int, std::vector<std::complex<double>>>& odd_terms) {
    const int n = basis.n();
    CouplingMatrix cm;
    cm.C6 = C6;
    cm.handedness = handedness;
    cm.M6 = Eigen::MatrixXcd::Zero(n, n);
    cm.M7 = Eigen::MatrixXcd::Zero(n, n);
    const auto accumulate = [&](const std::map<int, std::vector<std::complex<double>>>& terms,
                                Eigen::MatrixXcd& M) {
        for (const auto& [lam, cvec] : terms) {
            if (int(cvec.size()) != 2 * lam + 1)
                throw std::invalid_argument("coupling_matrix_custom: c_mu size != 2 lam + 1");
            for (int a = 0; a < n; ++a) {
                const Channel& ca = basis.channels[std::size_t(a)];
                const RotorState& la = basis.level_of(ca);
                for (int b = 0; b < n; ++b) {
                    const Channel& cb = basis.channels[std::size_t(b)];
                    const RotorState& lb = basis.level_of(cb);
                    M(a, b) += coupling_element(la, ca.l, lb, cb.l, basis.J, lam, cvec.data());
                }
            }
        }
    };
    accumulate(even_terms, cm.M6);
    accumulate(odd_terms, cm.M7);
    return cm;
}

// Asymptotic wavenumbers k_a (open) or kappa_a (closed magnitude), a.u.
inline std::vector<double> asymptotic_wavenumbers(const ChannelBasis& basis) {
    std::vector<double> k(basis.channels.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = std::sqrt(std::abs(basis.channels[i].k2));
    return k;
}

// Energy (K) and j of the lowest level reachable from the ground state
// through the chiral coupling with relative squared weight >= floor of the
// strongest channel. The tiny c3_{+-1}-driven couplings (weight ~1e-4 of the
// gateway) fall below the default floor.
struct ThresholdInfo {
    double energy_K = 0.0;
    int j = -1;
    double weight = 0.0;      // total squared coupling weight at J = lambda
    double weight_max = 0.0;  // strongest level's weight
};

// Coupled W matrix in the i^l-transformed (real symmetric) basis:
//   W~(r) = -2 m* [ (C6 I + M6r)/r^6 + M7r/r^7 ] + diag( l(l+1)/r^2 - k^2 )
// with M6r/M7r the real parts of conj(i^la) M (i^lb). M6 (real, even dl) and
// handedness*M7 (imaginary, odd dl) both become real under this transform, so
// the radial propagation can run entirely in doubles. The physical S matrix
// is recovered from S~ by S_ab = i^(la - lb) ... handled at matching time.
struct WMatrixReal {
    Eigen::MatrixXd M6r, M7r;     // real-basis coupling matrices (r-independent)
    Eigen::VectorXd centrifugal;  // l(l+1)
    Eigen::VectorXd k2;
    double C6 = 0.0;
    double mstar = 0.0;
    int n = 0;
    void eval_into(double r, Eigen::MatrixXd& W) const {
        const double r2 = r * r, r6 = r2 * r2 * r2, r7 = r6 * r;
        W = (-2.0 * mstar / r6) * M6r + (-2.0 * mstar / r7) * M7r;
        for (int a = 0; a < n; ++a)
            W(a, a) += -2.0 * mstar * C6 / r6 + centrifugal(a) / r2 - k2(a);
    }
    Eigen::MatrixXd eval(double r) const {
        Eigen::MatrixXd W(n, n);
        eval_into(r, W);
        return W;
    }
};

inline WMatrixReal real_w_matrix(const ChannelBasis& basis, const CouplingMatrix& cm) {
    const int n = basis.n();
    WMatrixReal w;
    w.n = n;
    w.C6 = cm.C6;
    w.mstar = basis.mstar;
    w.M6r.resize(n, n);
    w.M7r.resize(n, n);
    w.centrifugal.resize(n);
    w.k2.resize(n);
    for (int a = 0; a < n; ++a) {
        const int la = basis.channels[std::size_t(a)].l;
        w.centrifugal(a) = double(la) * (la + 1);
        w.k2(a) = basis.channels[std::size_t(a)].k2;
        for (int b = 0; b < n; ++b) {
            const int lb = basis.channels[std::size_t(b)].l;
            const std::complex<double> ph = unit_imag_power(lb - la);  // conj(i^la) i^lb
            const std::complex<double> m6 = ph * cm.M6(a, b);
            const std::complex<double> m7 = ph * (double(cm.handedness) * cm.M7(a, b));
            if (std::abs(m6.imag()) > 1e-10 * (1.0 + std::abs(m6)) ||
                std::abs(m7.imag()) > 1e-10 * (1.0 + std::abs(m7)))
                throw std::runtime_error("real_w_matrix: residual imaginary coupling");
            w.M6r(a, b) = m6.real();
            w.M7r(a, b) = m7.real();
        }
    }
    const double sym = std::max((w.M6r - w.M6r.transpose()).cwiseAbs().maxCoeff(),
                                (w.M7r - w.M7r.transpose()).cwiseAbs().maxCoeff());
    if (sym > 1e-10) throw std::runtime_error("real_w_matrix: not symmetric");
    return w;
}

inline ThresholdInfo lowest_coupled_threshold(const std::vector<RotorState>& levels,
                                              const PotentialSurface& surf,
                                              double floor = 0.01) {
    if (levels.empty()) throw std::invalid_argument("lowest_coupled_threshold: no levels");
    const RotorState& gnd = levels.front();
    const int lam = 3, J = lam;
    std::vector<ThresholdInfo> cands;
    for (const auto& lv : levels) {
        if (&lv == &gnd || lv.parity != gnd.parity) continue;
        double w = 0.0;
        for (int l0 = std::abs(J - gnd.j); l0 <= J + gnd.j; ++l0)
            for (int lp = std::abs(J - lv.j); lp <= J + lv.j; ++lp)
                w += std::norm(coupling_element(lv, lp, gnd, l0, J, lam, surf.c3.data()));
        if (w > 0.0) cands.push_back({lv.energy_K, lv.j, w, 0.0});
    }
    if (cands.empty()) throw std::runtime_error("lowest_coupled_threshold: no coupled level");
    double wmax = 0.0;
    for (const auto& c : cands) wmax = std::max(wmax, c.weight);
    ThresholdInfo best;
    best.energy_K = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) {
        if (c.weight >= floor * wmax && c.energy_K < best.energy_K) {
            best = c;
            best.weight_max = wmax;
        }
    }
    return best;
}

}  // namespace chirascat
