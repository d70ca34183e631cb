// Channel bases and potential coupling matrices: frozen matrix elements from
// an independent two-angle quadrature oracle, selection rules, basis
// bookkeeping, and the truncation policy.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <chirascat/channels.hpp>
#include <chirascat/dataset.hpp>
#include <chirascat/dispersion.hpp>
#include <chirascat/numerics.hpp>
#include <chirascat/units.hpp>

using namespace chirascat;
using Catch::Approx;

namespace {
const PotentialSurface& surf() {
    static const PotentialSurface s =
        dispersion_coefficients(default_dataset().susceptibilities());
    return s;
}
const std::vector<RotorState>& production_levels() {
    static const auto lv = rotor_levels(rotor_spec_from_geometry(), 4);
    return lv;
}
RotorState make_state(int j, int parity, std::vector<double> coeffs) {
    RotorState st;
    st.j = j;
    st.parity = parity;
    st.coeffs = std::move(coeffs);
    return st;
}
}  // namespace

TEST_CASE("Coupling elements match the frozen quadrature-oracle values") {
    const double s2 = 1.0 / std::sqrt(2.0);
    const RotorState j0 = make_state(0, +1, {1.0});
    const RotorState gate = make_state(3, +1, {0, -s2, 0, 0, 0, s2, 0});
    const RotorState j2k0 = make_state(2, +1, {0, 0, 1.0, 0, 0});
    const RotorState j1s = make_state(1, +1, {s2, 0, s2});

    const auto* c3 = surf().c3.data();
    auto el = [&](const RotorState& to, int lp, const RotorState& from, int l, int J,
                  int lam, const std::complex<double>* c) {
        return coupling_element(to, lp, from, l, J, lam, c);
    };
    CHECK(std::abs(el(gate, 2, j0, 3, 3, 3, c3) -
                   std::complex<double>(0.0, 3.4235076295946696)) < 1e-10);
    CHECK(std::abs(el(gate, 6, j0, 3, 3, 3, c3) -
                   std::complex<double>(0.0, 5.1611319428566063)) < 1e-10);
    // odd 3j(l', lam, l; 0,0,0) forbids equal-parity orbital transfer
    CHECK(std::abs(el(gate, 3, j0, 3, 3, 3, c3)) == 0.0);
    // accidental zero checked against the oracle
    CHECK(std::abs(el(j2k0, 2, gate, 3, 2, 3, c3)) < 1e-12);
    CHECK(std::abs(el(j1s, 1, j2k0, 2, 2, 3, c3) -
                   std::complex<double>(0.0, 0.0086726686233571937)) < 1e-12);

    // synthetic rank-1 coupling, pure imaginary strengths
    const std::array<std::complex<double>, 3> c1{{{0, 1.5}, {0, 0}, {0, 1.5}}};
    CHECK(std::abs(el(j1s, 2, j0, 1, 1, 1, c1.data()) -
                   std::complex<double>(0.0, 0.48860251190291987)) < 1e-10);
    CHECK(std::abs(el(j1s, 3, j1s, 2, 3, 1, c1.data())) < 1e-14);
}

TEST_CASE("Ground state has no diagonal chiral coupling") {
    const RotorState j0 = make_state(0, +1, {1.0});
    for (int l = 0; l <= 6; ++l)
        for (int lp = 0; lp <= 6; ++lp)
            for (int J : {1, 2, 3, 4})
                CHECK(std::abs(coupling_element(j0, lp, j0, l, J, 3, surf().c3.data())) ==
                      0.0);
}

TEST_CASE("Channel basis bookkeeping") {
    const auto& lv = production_levels();
    const double mstar = default_dataset().mstar;
    const double E = 8.0;
    const TruncationParams tr{4, 34.0};
    for (int parity : {+1, -1}) {
        const ChannelBasis b = build_channel_basis(lv, 3, parity, E, mstar, tr);
        REQUIRE(b.n() > 0);
        // parity purity and truncation window
        for (const auto& ch : b.channels) {
            const RotorState& l = b.level_of(ch);
            CHECK(l.parity == parity);
            CHECK(l.j <= tr.j_max);
            CHECK(l.energy_K <= E + tr.closed_max_K);
            CHECK(ch.l >= std::abs(b.J - ch.j));
            CHECK(ch.l <= b.J + ch.j);
            // asymptotic wavenumbers
            const double k2 = 2.0 * mstar * units::kelvin_to_au(E - ch.threshold_K);
            CHECK(ch.k2 == Approx(k2).margin(1e-15));
            CHECK(ch.open() == (ch.threshold_K < E));
        }
        // every admissible (level, l) combination appears exactly once
        std::size_t expected = 0;
        for (const auto& l : lv)
            if (l.parity == parity && l.j <= tr.j_max && l.energy_K <= E + tr.closed_max_K)
                expected += std::size_t(2 * std::min(l.j, b.J) + 1);
        CHECK(b.channels.size() == expected);
        // deterministic ordering: open before closed, (threshold, j, l) sorted
        for (std::size_t i = 1; i < b.channels.size(); ++i) {
            const auto& a = b.channels[i - 1];
            const auto& c = b.channels[i];
            const bool ordered = a.threshold_K < c.threshold_K ||
                                 (a.threshold_K == c.threshold_K &&
                                  (a.j < c.j || (a.j == c.j && a.l < c.l)));
            CHECK(ordered);
            CHECK(int(a.open()) >= int(c.open()));
        }
    }
}

TEST_CASE("Single-channel limit and truncation monotonicity") {
    const auto& lv = production_levels();
    const double mstar = default_dataset().mstar;
    const ChannelBasis b0 =
        build_channel_basis(lv, 0, +1, 1.0, mstar, TruncationParams{0, 1e9});
    REQUIRE(b0.n() == 1);
    CHECK(b0.channels[0].j == 0);
    CHECK(b0.channels[0].l == 0);
    CHECK(b0.channels[0].k2 == Approx(2.0 * mstar * units::kelvin_to_au(1.0)).margin(1e-18));

    // enlarging the closed-channel window never removes channels
    const ChannelBasis narrow =
        build_channel_basis(lv, 2, +1, 2.0, mstar, TruncationParams{4, 4.0});
    const ChannelBasis wide =
        build_channel_basis(lv, 2, +1, 2.0, mstar, TruncationParams{4, 16.0});
    CHECK(wide.n() >= narrow.n());
    for (const auto& ch : narrow.channels) {
        bool found = false;
        for (const auto& cw : wide.channels)
            if (cw.j == ch.j && cw.tau == ch.tau && cw.l == ch.l) found = true;
        CHECK(found);
    }
    CHECK_THROWS_AS(build_channel_basis(lv, -1, +1, 1.0, mstar, TruncationParams{}),
                    std::invalid_argument);
}

TEST_CASE("Open-channel count grows as E^1.5 across the level spectrum") {
    const auto lv = rotor_levels(rotor_spec_from_geometry(), 16);
    const double mstar = default_dataset().mstar;
    std::vector<double> logE, logN;
    for (double E : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        int n = 0;
        for (int parity : {+1, -1})
            n += build_channel_basis(lv, 40, parity, E, mstar, TruncationParams{16, 0.0})
                     .n_open();
        logE.push_back(std::log(E));
        logN.push_back(std::log(double(n)));
    }
    const auto [intercept, slope] = linear_fit(logE, logN);
    (void)intercept;
    CHECK(slope > 1.3);
    CHECK(slope < 1.7);
}

TEST_CASE("Default truncation policy follows the collision energy") {
    const auto& lv = production_levels();
    const TruncationParams t1 = default_truncation(lv, 1.0);
    CHECK(t1.j_max == 3);  // highest open level at 1 K has j = 1
    CHECK(t1.closed_max_K == Approx(2.0));
    const TruncationParams t10 = default_truncation(lv, 10.0);
    CHECK(t10.j_max == 6);  // j = 4 levels open below 10 K
    CHECK(t10.closed_max_K == Approx(20.0));
    const TruncationParams tlow = default_truncation(lv, 0.3);
    CHECK(tlow.j_max == 2);  // only the ground level is open
    CHECK_THROWS_AS(default_truncation(lv, 0.0), std::invalid_argument);
}

TEST_CASE("Coupling matrices are hermitian with the expected sparsity") {
    const auto& lv = production_levels();
    const ChannelBasis b =
        build_channel_basis(lv, 3, +1, 8.0, default_dataset().mstar, TruncationParams{4, 34.0});
    const CouplingMatrix cm = coupling_matrix(b, surf());
    REQUIRE(cm.M6.rows() == b.n());
    CHECK((cm.M6 - cm.M6.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cm.M7 - cm.M7.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    // orbital parity selection: the r^-6 part preserves (-1)^l, the chiral
    // r^-7 part flips it
    for (int a = 0; a < b.n(); ++a)
        for (int c = 0; c < b.n(); ++c) {
            const int dl = b.channels[std::size_t(a)].l + b.channels[std::size_t(c)].l;
            if (dl % 2 != 0) CHECK(std::abs(cm.M6(a, c)) < 1e-14);
            if (dl % 2 == 0) CHECK(std::abs(cm.M7(a, c)) < 1e-14);
        }
}

TEST_CASE("Real-basis W matrix: symmetry and asymptotic diagonal") {
    const auto& lv = production_levels();
    const double mstar = default_dataset().mstar;
    const ChannelBasis b = build_channel_basis(lv, 2, +1, 5.0, mstar, TruncationParams{4, 20.0});
    const WMatrixReal w = real_w_matrix(b, coupling_matrix(b, surf()));
    for (double r : {5.0, 9.0, 17.0}) {
        const Eigen::MatrixXd W = w.eval(r);
        CHECK((W - W.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
    // far out the coupling has died off: W -> l(l+1)/r^2 - k^2
    const double rfar = 1e5;
    const Eigen::MatrixXd Wfar = w.eval(rfar);
    for (int a = 0; a < b.n(); ++a) {
        const auto& ch = b.channels[std::size_t(a)];
        CHECK(Wfar(a, a) == Approx(double(ch.l) * (ch.l + 1) / (rfar * rfar) - ch.k2)
                                .margin(1e-12));
        for (int c = 0; c < b.n(); ++c)
            if (c != a) CHECK(std::abs(Wfar(a, c)) < 1e-24);
    }
    // isotropic potential only: W diagonal at every r
    PotentialSurface iso = surf();
    iso.c2.fill(0.0);
    iso.c3.fill(0.0);
    const WMatrixReal wiso = real_w_matrix(b, coupling_matrix(b, iso));
    const Eigen::MatrixXd Wiso = wiso.eval(7.0);
    for (int a = 0; a < b.n(); ++a)
        for (int c = 0; c < b.n(); ++c)
            if (c != a) CHECK(Wiso(a, c) == 0.0);
}

TEST_CASE("Lowest chirality-coupled threshold") {
    const auto& lv = production_levels();
    const ThresholdInfo info = lowest_coupled_threshold(lv, surf());
    CHECK(info.j == 3);
    CHECK(info.energy_K == Approx(17.512126094406).margin(1e-6));
    // the gateway level carries the dominant weight
    CHECK(info.weight == Approx(info.weight_max).epsilon(1e-12));

    // without the weight floor a much weaker j = 3 path opens lower
    const ThresholdInfo all = lowest_coupled_threshold(lv, surf(), 0.0);
    CHECK(all.j == 3);
    CHECK(all.energy_K == Approx(7.204507246952).margin(1e-6));
    CHECK(all.weight / all.weight_max < 1e-3);

    CHECK_THROWS_AS(lowest_coupled_threshold({}, surf()), std::invalid_argument);
}
