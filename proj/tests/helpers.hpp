#pragma once
// Shared fixtures for the unit tests: a small four-level chiral rotor whose
// scattering observables were frozen against an independent reference
// implementation (golden values below), plus its solver settings.

#include <map>
#include <vector>

#include <chirascat/chirascat.hpp>

namespace testfix {

using namespace chirascat;

// Small asymmetric top (constants in kelvin) giving exactly four levels at
// j <= 1: 0 (j0, +1), 0.40 (j1 k0, -1), 0.55 (j1 k1 sym, +1),
// 0.65 (j1 k1 antisym, -1).
inline RotorSpec small_top() { return RotorSpec{0.40, 0.25, 0.15}; }

inline std::vector<RotorState> small_levels() { return rotor_levels(small_top(), 1); }

constexpr double kSmallMstar = 2000.0;
constexpr double kSmallC6 = 8.0;

// Rank-1 chiral-style coupling c_{1,+-1} = 1.5i riding the r^-7 term; obeys
// the reality and C2 constraints (c_{1,-1} = +1.5i as well).
inline CouplingBuilder small_builder() {
    std::map<int, std::vector<std::complex<double>>> odd{
        {1, {std::complex<double>(0, 1.5), 0.0, std::complex<double>(0, 1.5)}}};
    std::map<int, std::vector<std::complex<double>>> even{};
    return [odd, even](const ChannelBasis& b) {
        return coupling_matrix_custom(b, kSmallC6, +1, even, odd);
    };
}

// Reference grid: 8000 uniform steps on [4, 60] bohr, eigenvalue stepper.
inline SolveSettings small_settings() {
    SolveSettings s;
    s.r_start = 4.0;
    s.r_match = 60.0;
    s.grid_breaks = {4.0, 60.0};
    s.grid_step_sizes = {56.0 / 8000.0};
    s.mode = PropagatorMode::eigh;
    s.J_max = 4;
    s.tail_rtol = 0.0;  // run every J up to J_max
    s.trunc.j_max = 1;
    s.trunc.closed_max_K = 34.0;
    return s;
}

inline EnergySolution small_solution(double energy_K = 1.0) {
    return solve_energy(small_levels(), 0, energy_K, kSmallMstar, small_builder(),
                        small_settings());
}

// Frozen golden observables for small_solution(1.0), J <= 4.
constexpr double kGoldenSigma = 190.0417392250;  // bohr^2, both handednesses
constexpr double kGoldenEta = 2.0655393024;      // bohr^2

}  // namespace testfix
