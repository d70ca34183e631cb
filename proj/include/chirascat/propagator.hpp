#pragma once
// Radial propagation of the coupled-channel log-derivative matrix
// Y = psi' psi^-1 for psi'' = W(r) psi, from a hard inner wall to the
// matching radius.
//
// Each step uses the constant-reference-potential update with W evaluated at
// the interval midpoint:
//   Y(r+h) = (Wb*St + C*Y) (C + St*Y)^-1,
//   C = cosh(sqrt(Wb) h),  St = sinh(sqrt(Wb) h)/sqrt(Wb)
// evaluated either through a symmetric eigendecomposition (reference mode) or
// through the h^4-consistent polynomial expansion in M = h^2 Wb (fast mode,
// with automatic eigendecomposition fallback when ||M|| is too large for the
// expansion). A renormalized Numerov propagator is provided as an independent
// cross-check for all-open blocks.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chirascat {

struct GridSegment {
    double r0 = 0.0, r1 = 0.0;
    int steps = 0;
    double h() const { return (r1 - r0) / steps; }
};

struct RadialGrid {
    std::vector<GridSegment> segments;

    static RadialGrid uniform(double r0, double r1, int steps) {
        if (!(r1 > r0) || steps < 1) throw std::invalid_argument("RadialGrid::uniform");
        return {{{r0, r1, steps}}};
    }
    // Breakpoints with per-piece target step sizes; counts rounded up so the
    // actual step never exceeds the request.
    static RadialGrid piecewise(const std::vector<double>& breaks,
                                const std::vector<double>& target_h) {
        if (breaks.size() < 2 || target_h.size() != breaks.size() - 1)
            throw std::invalid_argument("RadialGrid::piecewise");
        RadialGrid g;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double len = breaks[i + 1] - breaks[i];
            if (!(len > 0.0) || !(target_h[i] > 0.0))
                throw std::invalid_argument("RadialGrid::piecewise: bad segment");
            const int steps = std::max(1, int(std::ceil(len / target_h[i] - 1e-12)));
            g.segments.push_back({breaks[i], breaks[i + 1], steps});
        }
        return g;
    }
    RadialGrid halved() const {
        RadialGrid g = *this;
        for (auto& s : g.segments) s.steps *= 2;
        return g;
    }
    double r_start() const { return segments.front().r0; }
    double r_match() const { return segments.back().r1; }
    long total_steps() const {
        long n = 0;
        for (const auto& s : segments) n += s.steps;
        return n;
    }
};

enum class PropagatorMode {
    poly,  // polynomial reference propagator, eigensolver fallback per step
    eigh,  // eigensolver every step (reference/port-check mode)
};

namespace detail {

// One log-derivative step via eigendecomposition of the midpoint W.
inline void logderiv_step_eigh(const Eigen::MatrixXd& Wb, double h, Eigen::MatrixXd& Y,
                               Eigen::MatrixXd& scratch_num, Eigen::MatrixXd& scratch_den) {
    const int n = int(Wb.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Wb);
    const Eigen::VectorXd& w = es.eigenvalues();
    const Eigen::MatrixXd& Q = es.eigenvectors();
    Eigen::VectorXd Cd(n), Sd(n);
    for (int i = 0; i < n; ++i) {
        const double wi = w(i);
        const double s = std::sqrt(std::abs(wi));
        const double sh = std::min(s * h, 300.0);  // saturated: ratio -> 1 regardless
        if (std::abs(wi) < 1e-14) {
            Cd(i) = 1.0;
            Sd(i) = h;
        } else if (wi > 0.0) {
            Cd(i) = std::cosh(sh);
            Sd(i) = std::sinh(sh) / s;
        } else {
            Cd(i) = std::cos(s * h);
            Sd(i) = std::sin(s * h) / s;
        }
    }
    const Eigen::MatrixXd Cm = Q * Cd.asDiagonal() * Q.transpose();
    const Eigen::MatrixXd Sm = Q * Sd.asDiagonal() * Q.transpose();
    const Eigen::MatrixXd WSm = Q * (w.cwiseProduct(Sd)).asDiagonal() * Q.transpose();
    scratch_num.noalias() = WSm + Cm * Y;
    scratch_den.noalias() = Cm + Sm * Y;
    // Y = num * den^-1  ==  solve(den^T, num^T)^T
    Y = scratch_den.transpose().partialPivLu().solve(scratch_num.transpose()).transpose();
}

// One step via the polynomial expansion (h^4-consistent like the propagator
// itself). Returns false when ||M|| is too large for the expansion.
inline bool logderiv_step_poly(const Eigen::MatrixXd& Wb, double h, Eigen::MatrixXd& Y,
                               Eigen::MatrixXd& M, Eigen::MatrixXd& M2,
                               Eigen::MatrixXd& Cm, Eigen::MatrixXd& Sm,
                               Eigen::MatrixXd& WSm, Eigen::MatrixXd& scratch_num,
                               Eigen::MatrixXd& scratch_den) {
    const int n = int(Wb.rows());
    M.noalias() = (h * h) * Wb;
    const double mnorm = M.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    if (mnorm > 0.5) return false;
    M2.noalias() = M * M;
    Cm = Eigen::MatrixXd::Identity(n, n) + 0.5 * M + (1.0 / 24.0) * M2;
    Sm = h * (Eigen::MatrixXd::Identity(n, n) + (1.0 / 6.0) * M + (1.0 / 120.0) * M2);
    // W * St = (M + M^2/6 + M^3/120)/h, reusing M2 for the cubic term.
    WSm.noalias() = (1.0 / 120.0) * (M2 * M);
    WSm += M + (1.0 / 6.0) * M2;
    WSm *= (1.0 / h);
    scratch_num.noalias() = WSm + Cm * Y;
    scratch_den.noalias() = Cm + Sm * Y;
    Y = scratch_den.transpose().partialPivLu().solve(scratch_num.transpose()).transpose();
    return true;
}

}  // namespace detail

struct PropagationStats {
    long steps = 0;
    long eigh_fallbacks = 0;  // poly mode only
};

// Propagate Y over the grid. `w_eval(r, W)` fills the symmetric real-basis
// coupling matrix at r. Initial condition is a hard wall, Y = 1e10 I.
inline Eigen::MatrixXd propagate_logderiv(
    const std::function<void(double, Eigen::MatrixXd&)>& w_eval, int n, const RadialGrid& grid,
    PropagatorMode mode = PropagatorMode::poly, PropagationStats* stats = nullptr) {
    if (n < 1) throw std::invalid_argument("propagate_logderiv: empty basis");
    Eigen::MatrixXd Y = 1e10 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Wb(n, n), M(n, n), M2(n, n), Cm(n, n), Sm(n, n), WSm(n, n), num(n, n),
        den(n, n);
    for (const auto& seg : grid.segments) {
        const double h = seg.h();
        for (int i = 0; i < seg.steps; ++i) {
            const double rmid = seg.r0 + (i + 0.5) * h;
            w_eval(rmid, Wb);
            if (stats) ++stats->steps;
            if (mode == PropagatorMode::poly) {
                if (!detail::logderiv_step_poly(Wb, h, Y, M, M2, Cm, Sm, WSm, num, den)) {
                    detail::logderiv_step_eigh(Wb, h, Y, num, den);
                    if (stats) ++stats->eigh_fallbacks;
                }
            } else {
                detail::logderiv_step_eigh(Wb, h, Y, num, den);
            }
        }
    }
    return Y;
}

// Renormalized Numerov: returns P = psi_N psi_{N-1}^{-1} for a uniform grid.
// Independent oracle for the log-derivative propagator (all-open blocks).
inline Eigen::MatrixXd numerov_ratio(const std::function<void(double, Eigen::MatrixXd&)>& w_eval,
                                     int n, double r0, double rm, int nstep, double& h_out) {
    if (nstep < 3) throw std::invalid_argument("numerov_ratio: nstep < 3");
    const double h = (rm - r0) / nstep;
    h_out = h;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd W(n, n), T(n, n), U(n, n), R(n, n);
    const auto Tat = [&](double r, Eigen::MatrixXd& dst) {
        w_eval(r, W);
        dst.noalias() = -(h * h / 12.0) * W;
    };
    Tat(r0 + h, T);
    U = 12.0 * (I + T).partialPivLu().solve(I) - 10.0 * I;
    R = U;  // R_1 = U_1: hard wall, psi_0 = 0
    for (int i = 2; i < nstep; ++i) {
        Tat(r0 + i * h, T);
        U = 12.0 * (I + T).partialPivLu().solve(I) - 10.0 * I;
        R = U - R.partialPivLu().solve(I);
    }
    Eigen::MatrixXd TN(n, n), TN1(n, n);
    Tat(r0 + nstep * h, TN);
    Tat(r0 + (nstep - 1) * h, TN1);
    return (I + TN).partialPivLu().solve(R * (I + TN1));
}

}  // namespace chirascat
