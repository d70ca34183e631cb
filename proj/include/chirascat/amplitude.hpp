#pragma once
// Scattering-amplitude route to the same observables that the partial-wave
// sums deliver: reconstruct f(n, n0) for every final orientation state on a
// product angular grid and integrate |f|^2, |f_L - f_R|^2 and Im[f_L f_R*]
// over both directions. Deliberately independent of the trace formulas in
// observables.hpp so the two routes cross-check each other.
//
//   f_{(f m_f) <- (0 m_0)}(n, n0)
//     = (2 pi / (i sqrt(k_f k_0))) sum_{J M l l0} i^{l0 - l}
//       C(j_f m_f, l M-m_f | J M) C(j_0 m_0, l0 M-m_0 | J M)
//       T^{J}_{f l, 0 l0} Y_{l, M-m_f}(n) Y*_{l0, M-m_0}(n0)

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "chirascat/angular.hpp"
#include "chirascat/matching.hpp"
#include "chirascat/numerics.hpp"
#include "chirascat/rotor.hpp"

namespace chirascat {

struct QuadratureObservables {
    double sigma_L = 0.0;
    double sigma_R = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;
};

// blocks_L[i] and blocks_R[i] must share J, parity and channel ordering.
// Angular grids: Gauss-Legendre in cos(theta), uniform in phi, for both the
// outgoing and the incoming direction (a 4-dimensional product quadrature).
inline QuadratureObservables quadrature_observables(
    const std::vector<SMatrixBlock>& blocks_L, const std::vector<SMatrixBlock>& blocks_R,
    const std::vector<RotorState>& levels, int ground_level, int ntheta = 12, int nphi = 12) {
    if (blocks_L.size() != blocks_R.size())
        throw std::invalid_argument("quadrature_observables: block lists differ");
    const RotorState& g = levels[std::size_t(ground_level)];
    const int j0 = g.j;

    // Directions and weights (weight absorbs the phi measure 2 pi / nphi).
    QuadratureRule gl = gauss_legendre(ntheta);
    const int npts = ntheta * nphi;
    std::vector<double> th(std::size_t(npts), 0.0), ph(std::size_t(npts), 0.0);
    Eigen::VectorXd wgt(npts);
    for (int it = 0; it < ntheta; ++it)
        for (int ip = 0; ip < nphi; ++ip) {
            const int p = it * nphi + ip;
            th[std::size_t(p)] = std::acos(gl.x[std::size_t(it)]);
            ph[std::size_t(p)] = 2.0 * M_PI * ip / nphi;
            wgt(p) = gl.w[std::size_t(it)] * (2.0 * M_PI / nphi);
        }

    // Open exits grouped by final level; channel k^2 per level for flux.
    std::map<int, std::set<int>> exit_ls;
    std::map<int, double> level_k2;
    double k02 = -1.0;
    int lmax = 0;
    for (const auto& blk : blocks_L) {
        if (blk.parity != g.parity) continue;
        for (const auto& ch : blk.open_channels) {
            exit_ls[ch.level_index].insert(ch.l);
            level_k2[ch.level_index] = ch.k2;
            lmax = std::max(lmax, ch.l);
            if (ch.level_index == ground_level) k02 = ch.k2;
        }
    }
    QuadratureObservables out;
    if (k02 <= 0.0) return out;
    const double k0 = std::sqrt(k02);

    std::map<std::pair<int, int>, Eigen::VectorXcd> Ygrid;
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
            Eigen::VectorXcd v(npts);
            for (int p = 0; p < npts; ++p)
                v(p) = spherical_harmonic(l, m, th[std::size_t(p)], ph[std::size_t(p)]);
            Ygrid[{l, m}] = v;
        }

    const std::complex<double> iu(0.0, 1.0);
    Eigen::MatrixXcd fL(npts, npts), fR(npts, npts);
    for (const auto& [i_f, ls] : exit_ls) {
        (void)ls;
        const int j_f = levels[std::size_t(i_f)].j;
        const double k_f = std::sqrt(level_k2[i_f]);
        const double flux = k_f / k0;
        for (int m_f = -j_f; m_f <= j_f; ++m_f)
            for (int m0 = -j0; m0 <= j0; ++m0) {
                fL.setZero();
                fR.setZero();
                for (std::size_t ib = 0; ib < blocks_L.size(); ++ib) {
                    const SMatrixBlock& BL = blocks_L[ib];
                    const SMatrixBlock& BR = blocks_R[ib];
                    if (BL.parity != g.parity) continue;
                    const int no = int(BL.open_channels.size());
                    for (int b = 0; b < no; ++b) {
                        if (BL.open_channels[std::size_t(b)].level_index != i_f) continue;
                        const int ll = BL.open_channels[std::size_t(b)].l;
                        for (int a0 = 0; a0 < no; ++a0) {
                            if (BL.open_channels[std::size_t(a0)].level_index != ground_level)
                                continue;
                            const int ll0 = BL.open_channels[std::size_t(a0)].l;
                            const std::complex<double> tL =
                                (b == a0 ? 1.0 : 0.0) - BL.S(b, a0);
                            const std::complex<double> tR =
                                (b == a0 ? 1.0 : 0.0) - BR.S(b, a0);
                            if (tL == 0.0 && tR == 0.0) continue;
                            for (int M = -BL.J; M <= BL.J; ++M) {
                                const int mlv = M - m_f, ml0 = M - m0;
                                if (std::abs(mlv) > ll || std::abs(ml0) > ll0) continue;
                                const double cc = clebsch_gordan(j_f, m_f, ll, mlv, BL.J, M) *
                                                  clebsch_gordan(j0, m0, ll0, ml0, BL.J, M);
                                if (cc == 0.0) continue;
                                const std::complex<double> base =
                                    unit_imag_power(ll0 - ll) * cc;
                                const Eigen::VectorXcd& Yn = Ygrid[{ll, mlv}];
                                Eigen::RowVectorXcd Y0c =
                                    Ygrid[{ll0, ml0}].conjugate().transpose();
                                fL.noalias() += (base * tL) * (Yn * Y0c);
                                fR.noalias() += (base * tR) * (Yn * Y0c);
                            }
                        }
                    }
                }
                const std::complex<double> pref = 2.0 * M_PI / (iu * std::sqrt(k_f * k0));
                fL *= pref;
                fR *= pref;
                const double common = flux / (2.0 * j0 + 1.0) / (4.0 * M_PI);
                out.sigma_L += common * wgt.dot(fL.cwiseAbs2() * wgt);
                out.sigma_R += common * wgt.dot(fR.cwiseAbs2() * wgt);
                out.eta += common * 0.5 * wgt.dot((fL - fR).cwiseAbs2() * wgt);
                out.epsilon +=
                    common * wgt.dot(fL.cwiseProduct(fR.conjugate()).imag().eval() * wgt);
            }
    }
    return out;
}

}  // namespace chirascat
