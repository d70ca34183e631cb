#pragma once
// Boundary matching: from the real-basis log-derivative matrix at the match
// radius to the open-channel K and S matrices.
//
// Closed channels are eliminated exactly through their decaying asymptotic
// log-derivative L_c = d/dr ln[ r k_l(kappa r) ] (modified spherical Bessel of
// the second kind, evaluated by a scaled upward recurrence so only ratios
// appear). Open channels match to Riccati-Bessel functions normalized by
// 1/sqrt(k). The K-matrix equation and the closed-channel elimination are
// solved in the i^l-transformed real basis (diagonal reference matrices are
// invariant under that transform); physical phases are restored at the end:
//   S_ab = i^(l_a - l_b) S~_ab.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "chirascat/channels.hpp"

namespace chirascat {

// Riccati-Bessel functions j^(x) = x j_l(x), n^(x) = x y_l(x) and derivatives.
inline double riccati_j(int l, double x) { return x * std::sph_bessel(unsigned(l), x); }
inline double riccati_y(int l, double x) { return x * std::sph_neumann(unsigned(l), x); }
// d/dx [x j_l(x)] = x j_{l-1}(x) - l j_l(x), with x j_{-1}(x) = cos x.
inline double riccati_jp(int l, double x) {
    const double jm1 = (l == 0) ? std::cos(x) : riccati_j(l - 1, x);
    return jm1 - (double(l) / x) * riccati_j(l, x);
}
inline double riccati_yp(int l, double x) {
    const double ym1 = (l == 0) ? std::sin(x) : riccati_y(l - 1, x);
    return ym1 - (double(l) / x) * riccati_y(l, x);
}

// d/dr ln[ r k_l(kappa r) ] at r, for the closed-channel decaying solution.
// Scaled recurrence p_l = k_l/k_0: p_{-1} = p_0 = 1, p_1 = 1 + 1/x,
// p_{l+1} = p_{l-1} + (2l+1)/x p_l; then  L = kappa ( -l/x - p_{l-1}/p_l ).
inline double closed_log_derivative(int l, double kappa, double r) {
    if (kappa <= 0.0 || r <= 0.0) throw std::domain_error("closed_log_derivative");
    const double x = kappa * r;
    double pm1 = 1.0, p0 = 1.0;  // p_{-1}, p_0
    if (l >= 1) {
        double p1 = 1.0 + 1.0 / x;
        pm1 = 1.0;
        p0 = p1;
        for (int ell = 1; ell < l; ++ell) {
            double pnext = pm1 + ((2.0 * ell + 1.0) / x) * p0;
            pm1 = p0;
            p0 = pnext;
            if (std::abs(p0) > 1e250) {  // rescale; only the ratio matters
                pm1 /= 1e250;
                p0 /= 1e250;
            }
        }
    }
    return kappa * (-double(l) / x - pm1 / p0);
}

struct SMatrixBlock {
    int J = 0;
    int parity = +1;
    double energy_K = 0.0;
    std::vector<Channel> open_channels;  // ordering matches S rows/cols
    Eigen::MatrixXcd S;        // physical phases
    Eigen::MatrixXcd S_tilde;  // i^l basis: complex symmetric when W is symmetric
    Eigen::MatrixXd K;         // real-basis reaction matrix
};

// Match the real-basis log-derivative Y~ at r_match. The channel ordering of
// Y must be the basis ordering (open channels first).
inline SMatrixBlock extract_smatrix(const ChannelBasis& basis, const Eigen::MatrixXd& Y,
                                    double r_match) {
    const int n = basis.n();
    if (Y.rows() != n || Y.cols() != n) throw std::invalid_argument("extract_smatrix: size");
    const int no = basis.n_open();
    SMatrixBlock out;
    out.J = basis.J;
    out.parity = basis.parity;
    out.energy_K = basis.energy_K;
    if (no == 0) return out;
    for (int a = 0; a < no; ++a) {
        if (!basis.channels[std::size_t(a)].open())
            throw std::logic_error("extract_smatrix: open channels not contiguous");
        out.open_channels.push_back(basis.channels[std::size_t(a)]);
    }

    Eigen::MatrixXd Yt;
    if (no == n) {
        Yt = Y;
    } else {
        const int nc = n - no;
        Eigen::MatrixXd Ycc = Y.bottomRightCorner(nc, nc);
        for (int c = 0; c < nc; ++c) {
            const Channel& ch = basis.channels[std::size_t(no + c)];
            const double kappa = std::sqrt(-ch.k2);
            Ycc(c, c) -= closed_log_derivative(ch.l, kappa, r_match);
        }
        Yt = Y.topLeftCorner(no, no) -
             Y.topRightCorner(no, nc) *
                 Ycc.partialPivLu().solve(Y.bottomLeftCorner(nc, no));
    }

    Eigen::VectorXd Jd(no), Jpd(no), Nd(no), Npd(no);
    for (int a = 0; a < no; ++a) {
        const Channel& ch = basis.channels[std::size_t(a)];
        const double k = std::sqrt(ch.k2);
        const double x = k * r_match;
        const double norm = 1.0 / std::sqrt(k);
        Jd(a) = riccati_j(ch.l, x) * norm;
        Jpd(a) = k * riccati_jp(ch.l, x) * norm;
        Nd(a) = riccati_y(ch.l, x) * norm;
        Npd(a) = k * riccati_yp(ch.l, x) * norm;
    }
    Eigen::MatrixXd lhs = Yt * Nd.asDiagonal();
    lhs -= Eigen::MatrixXd(Npd.asDiagonal());
    Eigen::MatrixXd rhs = Yt * Jd.asDiagonal();
    rhs -= Eigen::MatrixXd(Jpd.asDiagonal());
    out.K = lhs.partialPivLu().solve(rhs);

    const std::complex<double> iu(0.0, 1.0);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(no, no) - iu * out.K.cast<std::complex<double>>();
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(no, no) + iu * out.K.cast<std::complex<double>>();
    out.S_tilde = a.partialPivLu().solve(b);
    out.S.resize(no, no);
    for (int p = 0; p < no; ++p)
        for (int q = 0; q < no; ++q)
            out.S(p, q) = unit_imag_power(out.open_channels[std::size_t(p)].l -
                                          out.open_channels[std::size_t(q)].l) *
                          out.S_tilde(p, q);
    return out;
}

// Numerov two-point matching (all-open blocks): P = psi_N psi_{N-1}^{-1} in
// the real basis, grid spacing h, match radius r_match.
inline SMatrixBlock extract_smatrix_numerov(const ChannelBasis& basis, const Eigen::MatrixXd& P,
                                            double r_match, double h) {
    const int n = basis.n();
    if (basis.n_open() != n)
        throw std::invalid_argument("extract_smatrix_numerov: all channels must be open");
    SMatrixBlock out;
    out.J = basis.J;
    out.parity = basis.parity;
    out.energy_K = basis.energy_K;
    out.open_channels = basis.channels;
    const double rN = r_match, rN1 = r_match - h;
    Eigen::VectorXd JN(n), NN(n), JN1(n), NN1(n);
    for (int a = 0; a < n; ++a) {
        const Channel& ch = basis.channels[std::size_t(a)];
        const double k = std::sqrt(ch.k2);
        const double norm = 1.0 / std::sqrt(k);
        JN(a) = riccati_j(ch.l, k * rN) * norm;
        NN(a) = riccati_y(ch.l, k * rN) * norm;
        JN1(a) = riccati_j(ch.l, k * rN1) * norm;
        NN1(a) = riccati_y(ch.l, k * rN1) * norm;
    }
    Eigen::MatrixXd lhs = -P * NN1.asDiagonal();
    lhs += Eigen::MatrixXd(NN.asDiagonal());
    Eigen::MatrixXd rhs = -P * JN1.asDiagonal();
    rhs += Eigen::MatrixXd(JN.asDiagonal());
    out.K = lhs.partialPivLu().solve(rhs);
    const std::complex<double> iu(0.0, 1.0);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) - iu * out.K.cast<std::complex<double>>();
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n, n) + iu * out.K.cast<std::complex<double>>();
    out.S_tilde = a.partialPivLu().solve(b);
    out.S.resize(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            out.S(p, q) = unit_imag_power(basis.channels[std::size_t(p)].l -
                                          basis.channels[std::size_t(q)].l) *
                          out.S_tilde(p, q);
    return out;
}

}  // namespace chirascat
