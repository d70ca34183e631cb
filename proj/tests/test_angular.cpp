// Angular-momentum algebra against an independent computer-algebra oracle
// (exact rational evaluations, frozen below) and internal identities.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>

#include <chirascat/angular.hpp>

using namespace chirascat;
using Catch::Approx;

namespace {
struct Fix3j {
    int j1, j2, j3, m1, m2, m3;
    double value;
};
struct Fix6j {
    int j1, j2, j3, j4, j5, j6;
    double value;
};
}  // namespace

TEST_CASE("Wigner 3j against exact-arithmetic oracle") {
    static const Fix3j cases[] = {
        {1, 1, 0, 0, 0, 0, -0.5773502691896257},
        {1, 1, 2, 1, -1, 0, 0.18257418583505536},
        {2, 3, 2, 0, 2, -2, -0.2672612419124244},
        {3, 3, 3, 1, 1, -2, 0.0},
        {2, 2, 2, 0, 0, 0, -0.23904572186687872},
        {4, 3, 2, 2, -2, 0, 0.19518001458970663},
        {5, 4, 3, -2, 3, -1, -0.16325172786566963},
        {3, 1, 3, 2, 1, -3, 0.18898223650461363},
        {6, 5, 2, 4, -3, -1, 0.03871048305693819},
        {2, 3, 1, 0, -1, 1, 0.23904572186687872},
        {3, 3, 0, 2, -2, 0, -0.37796447300922725},
        {4, 4, 4, 0, 0, 0, 0.13409704688030227},
        {1, 2, 3, 1, 1, -2, -0.3086066999241838},
        {5, 5, 2, 1, -3, 2, 0.16157730690671296},
        {2, 1, 2, -1, 1, 0, 0.31622776601683794},
    };
    for (const auto& c : cases) {
        CAPTURE(c.j1, c.j2, c.j3, c.m1, c.m2, c.m3);
        CHECK(wigner3j(c.j1, c.j2, c.j3, c.m1, c.m2, c.m3) ==
              Approx(c.value).margin(1e-13));
    }
}

TEST_CASE("Wigner 3j half-integer arguments") {
    const auto h = [](int t) { return HalfInt::from_twice(t); };
    CHECK(wigner3j(h(1), h(1), 1, h(1), h(-1), 0) == Approx(0.408248290463863).margin(1e-13));
    CHECK(wigner3j(h(3), 1, h(1), h(1), 0, h(-1)) == Approx(0.408248290463863).margin(1e-13));
    CHECK(wigner3j(h(5), h(3), 1, h(3), h(-1), -1) ==
          Approx(-0.31622776601683794).margin(1e-13));
}

TEST_CASE("Wigner 3j selection rules and symmetries") {
    // m-sum violation and triangle violation vanish.
    CHECK(wigner3j(1, 1, 1, 1, 1, 1) == 0.0);
    CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);
    // odd permutation of columns multiplies by (-1)^(j1+j2+j3)
    for (int j3 : {2, 3, 4}) {
        const double direct = wigner3j(2, 3, j3, 1, -2, 1);
        const double swapped = wigner3j(3, 2, j3, -2, 1, 1);
        CHECK(swapped == Approx(std::pow(-1.0, 2 + 3 + j3) * direct).margin(1e-14));
    }
    // orthogonality: sum_{m1 m2} (2 j3 + 1) [3j]^2 = 1 when triangle holds
    for (int j3 : {1, 2, 3}) {
        double s = 0.0;
        for (int m1 = -2; m1 <= 2; ++m1)
            for (int m2 = -1; m2 <= 1; ++m2) {
                const double w = wigner3j(2, 1, j3, m1, m2, -m1 - m2);
                s += (2 * j3 + 1) * w * w;
            }
        CHECK(s == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("Wigner 6j against exact-arithmetic oracle") {
    static const Fix6j cases[] = {
        {1, 1, 1, 1, 1, 1, 0.16666666666666666},
        {2, 2, 2, 2, 2, 2, -0.04285714285714286},
        {1, 2, 3, 3, 2, 1, 0.10690449676496976},
        {2, 3, 2, 3, 2, 3, -0.055328333517248814},
        {0, 2, 2, 1, 1, 1, 0.2581988897471611},
        {3, 3, 3, 2, 2, 2, -0.055328333517248814},
        {4, 3, 2, 2, 3, 4, -0.06317380553057904},
        {2, 2, 1, 2, 2, 1, 0.16666666666666666},
        {5, 4, 3, 2, 3, 4, -0.06590082689751418},
        {1, 1, 2, 2, 2, 1, 0.15275252316519466},
        {3, 2, 1, 2, 3, 2, 0.13997084244475302},
        {6, 4, 2, 4, 2, 4, 0.004155319955593143},
        {2, 1, 2, 1, 2, 1, 0.07453559924999299},
        {3, 1, 3, 2, 1, 2, -0.15936381457791915},
    };
    for (const auto& c : cases) {
        CAPTURE(c.j1, c.j2, c.j3, c.j4, c.j5, c.j6);
        CHECK(wigner6j(c.j1, c.j2, c.j3, c.j4, c.j5, c.j6) ==
              Approx(c.value).margin(1e-13));
    }
    const auto h = [](int t) { return HalfInt::from_twice(t); };
    CHECK(wigner6j(h(1), h(1), 1, h(1), h(1), 1) ==
          Approx(0.16666666666666666).margin(1e-13));
    CHECK(wigner6j(h(3), h(3), 1, h(1), h(1), 1) ==
          Approx(0.26352313834736496).margin(1e-13));
}

TEST_CASE("Wigner 6j column permutation symmetry") {
    const double a = wigner6j(4, 3, 2, 2, 3, 4);
    CHECK(wigner6j(3, 4, 2, 3, 2, 4) == Approx(a).margin(1e-14));
    CHECK(wigner6j(2, 4, 3, 4, 2, 3) == Approx(a).margin(1e-14));
}

TEST_CASE("Clebsch-Gordan related to 3j by the standard phase") {
    for (int j1 = 0; j1 <= 3; ++j1)
        for (int j2 = 0; j2 <= 2; ++j2)
            for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3)
                for (int m1 = -j1; m1 <= j1; ++m1)
                    for (int m2 = -j2; m2 <= j2; ++m2) {
                        const int m3 = m1 + m2;
                        if (std::abs(m3) > j3) continue;
                        const double cg = clebsch_gordan(j1, m1, j2, m2, j3, m3);
                        const double w =
                            std::pow(-1.0, j1 - j2 + m3) * std::sqrt(2.0 * j3 + 1.0) *
                            wigner3j(j1, j2, j3, m1, m2, -m3);
                        REQUIRE(cg == Approx(w).margin(1e-13));
                    }
    // anchor: coupling two spin-1 projections to the stretched state
    CHECK(clebsch_gordan(1, 1, 1, 1, 2, 2) == Approx(1.0).margin(1e-14));
    CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == Approx(std::sqrt(1.0 / 3.0)).margin(1e-14));
}

TEST_CASE("Spherical harmonics: closed forms, conjugation, addition theorem") {
    const double th = 0.83, ph = 2.17;
    const std::complex<double> i1(0.0, 1.0);
    CHECK(std::abs(spherical_harmonic(0, 0, th, ph) -
                   std::complex<double>(1.0 / std::sqrt(4.0 * M_PI))) < 1e-14);
    // Condon-Shortley pinned: Y_1^1 = -sqrt(3/8pi) sin(th) e^{i ph}
    CHECK(std::abs(spherical_harmonic(1, 1, th, ph) +
                   std::sqrt(3.0 / (8.0 * M_PI)) * std::sin(th) * std::exp(i1 * ph)) < 1e-14);
    CHECK(std::abs(spherical_harmonic(1, 0, th, ph) -
                   std::sqrt(3.0 / (4.0 * M_PI)) * std::cos(th)) < 1e-14);
    CHECK(std::abs(spherical_harmonic(2, 1, th, ph) +
                   std::sqrt(15.0 / (8.0 * M_PI)) * std::sin(th) * std::cos(th) *
                       std::exp(i1 * ph)) < 1e-14);
    for (int l : {1, 3, 5})
        for (int m = -l; m <= l; ++m) {
            const auto yp = spherical_harmonic(l, m, th, ph);
            const auto ym = spherical_harmonic(l, -m, th, ph);
            CHECK(std::abs(ym - std::pow(-1.0, m) * std::conj(yp)) < 1e-13);
        }
    for (int l : {2, 5}) {
        double s = 0.0;
        for (int m = -l; m <= l; ++m) s += std::norm(spherical_harmonic(l, m, th, ph));
        CHECK(s == Approx((2 * l + 1) / (4.0 * M_PI)).margin(1e-12));
    }
}

TEST_CASE("Wigner small-d: j = 1 closed form and orthogonality") {
    const double b = 0.7;
    CHECK(wigner_small_d(1, 0, 0, b) == Approx(std::cos(b)).margin(1e-14));
    CHECK(wigner_small_d(1, 1, 1, b) == Approx(0.5 * (1.0 + std::cos(b))).margin(1e-14));
    CHECK(wigner_small_d(1, 1, -1, b) == Approx(0.5 * (1.0 - std::cos(b))).margin(1e-14));
    CHECK(wigner_small_d(1, 1, 0, b) == Approx(-std::sin(b) / std::sqrt(2.0)).margin(1e-14));
    // rows orthonormal for j = 2
    for (int mp = -2; mp <= 2; ++mp)
        for (int mq = -2; mq <= 2; ++mq) {
            double s = 0.0;
            for (int m = -2; m <= 2; ++m)
                s += wigner_small_d(2, mp, m, b) * wigner_small_d(2, mq, m, b);
            CHECK(s == Approx(mp == mq ? 1.0 : 0.0).margin(1e-13));
        }
    // identity at zero angle
    CHECK(wigner_small_d(3, 2, 2, 0.0) == Approx(1.0).margin(1e-14));
    CHECK(wigner_small_d(3, 2, 1, 0.0) == Approx(0.0).margin(1e-14));
}

TEST_CASE("Wigner D unitarity") {
    const double al = 0.4, be = 1.1, ga = -0.6;
    for (int mp = -2; mp <= 2; ++mp)
        for (int mq = -2; mq <= 2; ++mq) {
            std::complex<double> s = 0.0;
            for (int m = -2; m <= 2; ++m)
                s += wigner_D(2, mp, m, al, be, ga) * std::conj(wigner_D(2, mq, m, al, be, ga));
            CHECK(std::abs(s - (mp == mq ? 1.0 : 0.0)) < 1e-13);
        }
}
