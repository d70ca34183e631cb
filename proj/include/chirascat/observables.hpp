#pragma once
// Cross sections from S-matrix blocks: total elastic+inelastic cross section
// per enantiomer, the decoherence cross section eta built from the difference
// of left- and right-handed T-matrices, and the coherent phase-shift area
// epsilon from their interference. All sums run over entrance channels that
// belong to the initial (ground) rotor level; partial-wave prefactor
//   pre = pi/k0^2 (2J+1)/(2 j0 + 1)
// averages over the initial level's degenerate orientations.

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "chirascat/matching.hpp"

namespace chirascat {

struct BlockObservables {
    int J = 0;
    int parity = +1;
    double sigma_L = 0.0;           // total cross section, left-handed molecule
    double sigma_R = 0.0;           // total cross section, right-handed molecule
    double eta = 0.0;               // 1/2 sum |T_L - T_R|^2 route
    double eta_parity_odd = 0.0;    // 2 sum |S_L|^2 over parity-changing exits
    double epsilon = 0.0;           // sum Im[T_L conj(T_R)]
    std::map<int, double> eta_by_level;  // final rotor level index -> eta share
};

// L and R must come from the same channel basis (same J, parity, channels).
inline BlockObservables block_observables(const SMatrixBlock& L, const SMatrixBlock& R,
                                          int ground_level, int j0) {
    const int no = int(L.open_channels.size());
    if (int(R.open_channels.size()) != no || L.J != R.J || L.parity != R.parity)
        throw std::invalid_argument("block_observables: mismatched blocks");
    BlockObservables out;
    out.J = L.J;
    out.parity = L.parity;
    if (no == 0) return out;

    std::vector<int> entrance;
    for (int a = 0; a < no; ++a)
        if (L.open_channels[std::size_t(a)].level_index == ground_level) entrance.push_back(a);
    if (entrance.empty()) return out;

    const double k02 = L.open_channels[std::size_t(entrance.front())].k2;
    const double pre = (M_PI / k02) * (2.0 * L.J + 1.0) / (2.0 * j0 + 1.0);

    for (int a : entrance) {
        out.sigma_L += pre * 2.0 * (1.0 - L.S(a, a).real());
        out.sigma_R += pre * 2.0 * (1.0 - R.S(a, a).real());
        const int l0 = L.open_channels[std::size_t(a)].l;
        for (int f = 0; f < no; ++f) {
            const std::complex<double> TL = (f == a ? 1.0 : 0.0) - L.S(f, a);
            const std::complex<double> TR = (f == a ? 1.0 : 0.0) - R.S(f, a);
            const double de = 0.5 * pre * std::norm(TL - TR);
            out.eta += de;
            out.eta_by_level[L.open_channels[std::size_t(f)].level_index] += de;
            out.epsilon += pre * (TL * std::conj(TR)).imag();
            if (((L.open_channels[std::size_t(f)].l - l0) & 1) != 0)
                out.eta_parity_odd += pre * 2.0 * std::norm(L.S(f, a));
        }
    }
    return out;
}

struct ObservableTotals {
    double sigma_L = 0.0;
    double sigma_R = 0.0;
    double eta = 0.0;
    double eta_parity_odd = 0.0;
    double epsilon = 0.0;
    std::map<int, double> eta_by_level;
    std::vector<BlockObservables> blocks;  // per (J, parity) for tail diagnostics

    void add(const BlockObservables& b) {
        sigma_L += b.sigma_L;
        sigma_R += b.sigma_R;
        eta += b.eta;
        eta_parity_odd += b.eta_parity_odd;
        epsilon += b.epsilon;
        for (const auto& [lvl, v] : b.eta_by_level) eta_by_level[lvl] += v;
        blocks.push_back(b);
    }

    // Largest |contribution| to eta and sigma over the highest-J blocks kept,
    // relative to the running totals; used for partial-wave tail convergence.
    double tail_fraction(int J_from) const {
        double t = 0.0;
        for (const auto& b : blocks)
            if (b.J >= J_from) t += b.sigma_L + b.sigma_R + b.eta;
        double tot = sigma_L + sigma_R + eta;
        return tot > 0.0 ? t / tot : 0.0;
    }
};

}  // namespace chirascat
