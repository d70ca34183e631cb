// Radial propagation and asymptotic matching: free-particle closed forms,
// the frozen four-channel reference block, mode cross-checks, and the
// independent Numerov propagator.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "helpers.hpp"

#include <chirascat/matching.hpp>
#include <chirascat/propagator.hpp>
#include <chirascat/solver.hpp>

using namespace chirascat;
using Catch::Approx;

namespace {
// single-channel basis with l and wavenumber k (open), by hand
ChannelBasis single_channel(int l, double k2, double mstar = 1.0) {
    ChannelBasis b;
    b.J = l;
    b.parity = +1;
    b.energy_K = 1.0;
    b.mstar = mstar;
    RotorState g;
    g.j = 0;
    g.parity = +1;
    g.coeffs = {1.0};
    b.levels = {g};
    Channel ch;
    ch.level_index = 0;
    ch.l = l;
    ch.k2 = k2;
    b.channels = {ch};
    return b;
}
}  // namespace

TEST_CASE("Radial grid construction") {
    const RadialGrid u = RadialGrid::uniform(4.0, 60.0, 7);
    CHECK(u.r_start() == 4.0);
    CHECK(u.r_match() == 60.0);
    CHECK(u.total_steps() == 7);
    CHECK(u.segments[0].h() == Approx(8.0));

    const RadialGrid p = RadialGrid::piecewise({4.0, 20.0, 60.0}, {0.3, 1.0});
    REQUIRE(p.segments.size() == 2);
    // rounded so the actual step never exceeds the request
    CHECK(p.segments[0].h() <= 0.3 + 1e-12);
    CHECK(p.segments[1].h() <= 1.0 + 1e-12);
    CHECK(p.segments[0].steps == 54);
    CHECK(p.segments[1].steps == 40);

    const RadialGrid h = p.halved();
    CHECK(h.total_steps() == 2 * p.total_steps());
    CHECK(h.segments[0].h() == Approx(0.5 * p.segments[0].h()));

    CHECK_THROWS_AS(RadialGrid::uniform(4.0, 4.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(RadialGrid::uniform(4.0, 6.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(RadialGrid::piecewise({4.0, 3.0}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(RadialGrid::piecewise({4.0, 8.0}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("Hard wall with no potential: S picks up exactly the wall phase") {
    // V = 0, l = 0: u(r) = sin(k (r - r0)) gives S = exp(-2 i k r0)
    for (double k : {0.5, 1.3}) {
        const double r0 = 2.0, rm = 40.0;
        const auto w_eval = [&](double, Eigen::MatrixXd& W) {
            W(0, 0) = -k * k;
        };
        for (PropagatorMode mode : {PropagatorMode::eigh, PropagatorMode::poly}) {
            const RadialGrid grid = RadialGrid::uniform(r0, rm, 4000);
            const Eigen::MatrixXd Y = propagate_logderiv(w_eval, 1, grid, mode);
            // analytic log-derivative at the match radius
            CHECK(Y(0, 0) == Approx(k / std::tan(k * (rm - r0))).margin(1e-6));
            const SMatrixBlock blk =
                extract_smatrix(single_channel(0, k * k), Y, rm);
            const std::complex<double> expect =
                std::exp(std::complex<double>(0.0, -2.0 * k * r0));
            CHECK(std::abs(blk.S(0, 0) - expect) < 1e-7);
            CHECK(std::abs(std::abs(blk.S(0, 0)) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("Centrifugal-only propagation reproduces the regular solution") {
    // starting deep inside the centrifugal wall, the propagated solution is
    // the regular Riccati-Bessel one: delta = 0, S = 1. (l = 0 has no wall:
    // the inner boundary then contributes its own phase -2 k r0.)
    const double k = 1.0;
    for (int l : {2, 4}) {
        const auto w_eval = [&](double r, Eigen::MatrixXd& W) {
            W(0, 0) = double(l) * (l + 1) / (r * r) - k * k;
        };
        const RadialGrid grid =
            RadialGrid::piecewise({1e-3, 2.0, 40.0}, {1e-4, 5e-4});
        const Eigen::MatrixXd Y =
            propagate_logderiv(w_eval, 1, grid, PropagatorMode::eigh);
        const double x = k * 40.0;
        CHECK(Y(0, 0) ==
              Approx(k * riccati_jp(l, x) / riccati_j(l, x)).margin(1e-6));
        const SMatrixBlock blk = extract_smatrix(single_channel(l, k * k), Y, 40.0);
        CHECK(std::abs(blk.S(0, 0) - 1.0) < 1e-6);
    }
}

TEST_CASE("Closed-channel log-derivative against the modified Bessel oracle") {
    // d/dr ln( r k_l(kappa r) ) expressed through cylinder K functions
    const auto oracle = [](int l, double kappa, double r) {
        const double x = kappa * r;
        const double nu = l + 0.5;
        const double K = std::cyl_bessel_k(nu, x);
        const double Kp = -0.5 * (std::cyl_bessel_k(nu - 1.0, x) +
                                  std::cyl_bessel_k(nu + 1.0, x));
        return kappa * (0.5 / x + Kp / K);
    };
    for (int l : {0, 1, 2, 5})
        for (double x : {0.5, 3.0, 20.0}) {
            CAPTURE(l, x);
            const double kappa = 1.7;
            const double r = x / kappa;
            CHECK(closed_log_derivative(l, kappa, r) ==
                  Approx(oracle(l, kappa, r)).epsilon(1e-10));
        }
    // l = 0 closed form: r k_0(kappa r) = exp(-kappa r)/kappa
    CHECK(closed_log_derivative(0, 2.3, 5.0) == Approx(-2.3).margin(1e-14));
    // l = 1: extra algebraic tail
    const double kap = 1.2, r = 3.0;
    CHECK(closed_log_derivative(1, kap, r) ==
          Approx(-kap - 1.0 / (r * (1.0 + kap * r))).margin(1e-12));
    CHECK_THROWS_AS(closed_log_derivative(1, -1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(closed_log_derivative(1, 1.0, 0.0), std::domain_error);
}

TEST_CASE("Frozen four-channel reference block") {
    // J = 2 block of the synthetic four-level system; values frozen from the
    // independently developed prototype of this solver (abs tol 1e-9)
    const auto levels = testfix::small_levels();
    const ChannelBasis basis = build_channel_basis(
        levels, 2, +1, 1.0, testfix::kSmallMstar, TruncationParams{1, 34.0});
    REQUIRE(basis.n() == 4);
    CHECK(basis.channels[0].j == 0);
    CHECK(basis.channels[0].l == 2);
    CHECK(basis.channels[1].j == 1);
    CHECK(basis.channels[1].l == 1);
    CHECK(basis.channels[2].l == 2);
    CHECK(basis.channels[3].l == 3);

    const CouplingMatrix cm = testfix::small_builder()(basis);
    const RadialGrid grid = make_grid(testfix::small_settings());
    const SMatrixBlock blk = solve_block(basis, cm, grid, PropagatorMode::eigh);

    using C = std::complex<double>;
    const C want[4][4] = {
        {C(9.9788749342837380e-01, 6.4915500057801293e-02),
         C(-3.6295196611764240e-04, 2.5286326804987848e-03), C(0.0, 0.0),
         C(-1.6963264144099378e-06, 5.0904252082877690e-05)},
        {C(0.0, 0.0), C(9.7585828495166427e-01, 2.1838974786794971e-01),
         C(0.0, 0.0), C(-7.0484600497043966e-08, 4.5142917517700740e-08)},
        {C(0.0, 0.0), C(0.0, 0.0),
         C(9.9987998061798933e-01, 1.5492719560135305e-02), C(0.0, 0.0)},
        {C(0.0, 0.0), C(0.0, 0.0), C(0.0, 0.0),
         C(9.9999862249220528e-01, 1.6590417608379417e-03)},
    };
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            CAPTURE(a, b);
            CHECK(std::abs(blk.S_tilde(a, b) - want[a][b]) < 1e-9);
            // complex symmetry of the transformed S matrix
            CHECK(std::abs(blk.S_tilde(a, b) - blk.S_tilde(b, a)) < 1e-10);
        }
    // unitarity
    const Eigen::MatrixXcd dev =
        blk.S_tilde.adjoint() * blk.S_tilde - Eigen::MatrixXcd::Identity(4, 4);
    CHECK(dev.cwiseAbs().maxCoeff() < 1e-10);
    // physical S differs from S~ by the i^(la-lb) phases
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const int dl = blk.open_channels[std::size_t(a)].l -
                           blk.open_channels[std::size_t(b)].l;
            CHECK(std::abs(blk.S(a, b) - unit_imag_power(dl) * blk.S_tilde(a, b)) <
                  1e-14);
        }
}

TEST_CASE("Fast polynomial mode agrees with the eigensolver mode") {
    const auto levels = testfix::small_levels();
    const ChannelBasis basis = build_channel_basis(
        levels, 2, +1, 1.0, testfix::kSmallMstar, TruncationParams{1, 34.0});
    const CouplingMatrix cm = testfix::small_builder()(basis);
    const RadialGrid grid = make_grid(testfix::small_settings());
    PropagationStats sp{}, se{};
    const SMatrixBlock e = solve_block(basis, cm, grid, PropagatorMode::eigh, &se);
    const SMatrixBlock p = solve_block(basis, cm, grid, PropagatorMode::poly, &sp);
    CHECK((e.S_tilde - p.S_tilde).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(sp.steps == grid.total_steps());
    CHECK(se.steps == grid.total_steps());
    CHECK(se.eigh_fallbacks == 0);
}

TEST_CASE("Halving the step leaves the block stable") {
    const auto levels = testfix::small_levels();
    const ChannelBasis basis = build_channel_basis(
        levels, 1, +1, 1.0, testfix::kSmallMstar, TruncationParams{1, 34.0});
    const CouplingMatrix cm = testfix::small_builder()(basis);
    const RadialGrid grid = RadialGrid::uniform(4.0, 60.0, 4000);
    const SMatrixBlock a = solve_block(basis, cm, grid, PropagatorMode::poly);
    const SMatrixBlock b = solve_block(basis, cm, grid.halved(), PropagatorMode::poly);
    CHECK((a.S_tilde - b.S_tilde).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("Independent Numerov propagator reproduces the S matrix") {
    // all channels open in this block, so the two-point Numerov matching is
    // applicable as a genuinely different discretization
    const auto levels = testfix::small_levels();
    const ChannelBasis basis = build_channel_basis(
        levels, 2, +1, 1.0, testfix::kSmallMstar, TruncationParams{1, 34.0});
    REQUIRE(basis.n_open() == basis.n());
    const CouplingMatrix cm = testfix::small_builder()(basis);
    WMatrixReal w = real_w_matrix(basis, cm);
    const auto w_eval = [&w](double r, Eigen::MatrixXd& W) { w.eval_into(r, W); };

    const RadialGrid grid = RadialGrid::uniform(4.0, 60.0, 8000);
    const SMatrixBlock ld =
        extract_smatrix(basis, propagate_logderiv(w_eval, basis.n(), grid), 60.0);
    double h = 0.0;
    const Eigen::MatrixXd P = numerov_ratio(w_eval, basis.n(), 4.0, 60.0, 8000, h);
    const SMatrixBlock nv = extract_smatrix_numerov(basis, P, 60.0, h);
    CHECK((ld.S_tilde - nv.S_tilde).cwiseAbs().maxCoeff() < 1e-5);
    CHECK_THROWS_AS(numerov_ratio(w_eval, basis.n(), 4.0, 60.0, 2, h),
                    std::invalid_argument);
}

TEST_CASE("Propagation input validation") {
    const auto w_eval = [](double, Eigen::MatrixXd& W) { W(0, 0) = -1.0; };
    CHECK_THROWS_AS(
        propagate_logderiv(w_eval, 0, RadialGrid::uniform(1.0, 2.0, 10)),
        std::invalid_argument);
}
