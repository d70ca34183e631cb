#pragma once
// Per-energy driver: loop over total angular momentum J (and the symmetry
// block of the entrance level), build the coupled channels, propagate the
// log-derivative matrix outward, match to asymptotic solutions, and collect
// the left- and right-handed S-matrix blocks plus the derived cross sections.
// The two handednesses are solved independently from their own coupling
// matrices -- no shortcut through the mirror relation -- so downstream
// comparisons of the two solutions remain a genuine consistency check.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "chirascat/channels.hpp"
#include "chirascat/matching.hpp"
#include "chirascat/observables.hpp"
#include "chirascat/propagator.hpp"

namespace chirascat {

struct SolveSettings {
    double r_start = 4.0;    // bohr; inside the repulsive-core cutoff
    double r_match = 250.0;  // bohr
    double target_h = 0.01;  // bohr; grid step (rounded to integer counts)
    PropagatorMode mode = PropagatorMode::poly;
    TruncationParams trunc;
    int J_max = 40;
    double tail_rtol = 1e-6;  // stop the J loop early once a whole-J slab
                              // contributes less than this (twice in a row);
                              // <= 0 propagates every J up to J_max
    // Optional multi-segment grid: fine step near the core, coarser outside.
    // Empty -> uniform grid with target_h.
    std::vector<double> grid_breaks;      // e.g. {r_start, 30, r_match}
    std::vector<double> grid_step_sizes;  // one per segment
};

inline RadialGrid make_grid(const SolveSettings& s) {
    if (s.grid_breaks.empty())
        return RadialGrid::piecewise({s.r_start, s.r_match}, {s.target_h});
    return RadialGrid::piecewise(s.grid_breaks, s.grid_step_sizes);
}

// Propagate one (J, parity) block for one handedness. The CouplingMatrix
// carries the handedness sign. Throws on empty basis; returns a block with
// no open channels if all channels are closed.
inline SMatrixBlock solve_block(const ChannelBasis& basis, const CouplingMatrix& cm,
                                const RadialGrid& grid, PropagatorMode mode,
                                PropagationStats* stats = nullptr) {
    const int n = basis.n();
    if (n == 0) throw std::invalid_argument("solve_block: empty basis");
    WMatrixReal w = real_w_matrix(basis, cm);
    Eigen::MatrixXd Y = propagate_logderiv(
        [&w](double r, Eigen::MatrixXd& W) { w.eval_into(r, W); }, n, grid, mode, stats);
    return extract_smatrix(basis, Y, grid.r_match());
}

struct EnergySolution {
    double energy_K = 0.0;
    int J_used = -1;               // highest J actually propagated
    bool tail_converged = false;   // early-stop criterion met before J_max
    double tail_fraction = 0.0;    // last whole-J slab / running totals
    double unitarity_max = 0.0;    // max |S~^dag S~ - I| over blocks, both hands
    double symmetry_max = 0.0;     // max |S~ - S~^T| over blocks, both hands
    PropagationStats stats;
    std::vector<SMatrixBlock> blocks_L, blocks_R;  // paired by index
    ObservableTotals totals;
};

using CouplingBuilder = std::function<CouplingMatrix(const ChannelBasis&)>;

// Builder for the production surface; handedness comes from the surface.
inline CouplingBuilder coupling_from_surface(const PotentialSurface& surf) {
    return [surf](const ChannelBasis& basis) { return coupling_matrix(basis, surf); };
}

inline EnergySolution solve_energy(const std::vector<RotorState>& levels, int ground_level,
                                   double energy_K, double mstar, const CouplingBuilder& build_L,
                                   const SolveSettings& s) {
    const RotorState& g = levels[std::size_t(ground_level)];
    if (energy_K <= g.energy_K)
        throw std::invalid_argument("solve_energy: entrance channel closed");
    EnergySolution out;
    out.energy_K = energy_K;
    const RadialGrid grid = make_grid(s);

    int quiet_streak = 0;
    for (int J = 0; J <= s.J_max; ++J) {
        ChannelBasis basis =
            build_channel_basis(levels, J, g.parity, energy_K, mstar, s.trunc);
        if (basis.n() == 0 || basis.n_open() == 0) continue;

        CouplingMatrix cmL = build_L(basis);
        CouplingMatrix cmR = cmL;
        cmR.handedness = -cmL.handedness;

        SMatrixBlock SL = solve_block(basis, cmL, grid, s.mode, &out.stats);
        SMatrixBlock SR = solve_block(basis, cmR, grid, s.mode, &out.stats);
        out.J_used = J;

        for (const SMatrixBlock* blk : {&SL, &SR}) {
            const int no = int(blk->open_channels.size());
            if (no == 0) continue;
            const Eigen::MatrixXcd& St = blk->S_tilde;
            out.unitarity_max = std::max(
                out.unitarity_max,
                (St.adjoint() * St - Eigen::MatrixXcd::Identity(no, no)).cwiseAbs().maxCoeff());
            out.symmetry_max = std::max(
                out.symmetry_max,
                (St - St.transpose()).cwiseAbs().maxCoeff());
        }

        BlockObservables bo = block_observables(SL, SR, ground_level, g.j);
        const double slab = bo.sigma_L + bo.sigma_R + bo.eta;
        out.totals.add(bo);
        out.blocks_L.push_back(std::move(SL));
        out.blocks_R.push_back(std::move(SR));

        if (s.tail_rtol > 0.0) {
            const double base = out.totals.sigma_L + out.totals.sigma_R + out.totals.eta;
            out.tail_fraction = base > 0.0 ? slab / base : 1.0;
            if (out.tail_fraction < s.tail_rtol)
                ++quiet_streak;
            else
                quiet_streak = 0;
            if (quiet_streak >= 2) {
                out.tail_converged = true;
                break;
            }
        }
    }
    if (s.tail_rtol <= 0.0) out.tail_converged = true;
    // Amplitude-difference triangle inequality; a violation means the two
    // handedness solutions did not come from mirror potentials.
    if (out.totals.eta > 2.0 * (out.totals.sigma_L + out.totals.sigma_R) *
                             (1.0 + 1e-12) + 1e-30)
        throw std::runtime_error("solve_energy: eta exceeds amplitude bound");
    return out;
}

}  // namespace chirascat
