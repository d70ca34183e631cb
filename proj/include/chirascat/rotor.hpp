#pragma once
// Asymmetric-top rotor levels in the symmetric-top basis |j k>, k = -j..j.
//
// The Hamiltonian H = A Jz^2 + B Jy^2 + C Jx^2 (constants descending; z is
// the least-inertia a axis, y the intermediate b axis, matching the canonical
// body frame) is assembled and diagonalized inside Wang symmetry blocks. Each eigenstate carries the exact Wang index epsilon = +-1 defined
// through a_{-k} = epsilon (-1)^(j+k) a_k; for k = 0 states this forces
// epsilon = (-1)^j. The index is conserved by the collision couplings used
// downstream, so it doubles as the channel-block label.
//
// Sign convention for eigenvectors: the dominant coefficient (largest
// magnitude; ties resolved toward positive k) is made positive.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "chirascat/geometry.hpp"
#include "chirascat/units.hpp"

namespace chirascat {

struct RotorSpec {
    double A_K = 0.0;  // rotational constants in kelvin, A >= B >= C
    double B_K = 0.0;
    double C_K = 0.0;
};

struct RotorState {
    int j = 0;
    int tau = 0;      // energy order within j: -j (lowest) .. +j (highest)
    int m = 0;        // space-fixed projection; levels are (2j+1)-fold degenerate
    double energy_K = 0.0;
    int parity = +1;  // Wang index epsilon
    std::vector<double> coeffs;  // a_k, k = -j..j
    double coeff(int k) const { return coeffs[std::size_t(k + j)]; }
    int k_dominant = 0;
};

inline RotorSpec rotor_spec_from_geometry(const GeometryParams& g = {}) {
    const BodyFrame bf = body_frame(d2s2_atoms(g));
    return {bf.rot_consts_K(0), bf.rot_consts_K(1), bf.rot_consts_K(2)};
}

// All levels with j <= j_max, sorted by (energy, j, tau). Energies in kelvin.
inline std::vector<RotorState> rotor_levels(const RotorSpec& spec, int j_max) {
    if (j_max < 0) throw std::invalid_argument("rotor_levels: j_max < 0");
    const double A = spec.A_K, B = spec.B_K, C = spec.C_K;
    if (!(A > 0.0) || !(B > 0.0) || !(C > 0.0))
        throw std::domain_error("rotor_levels: rotational constants must be positive");

    const auto diag = [&](int j, int k) {
        const double jj = double(j) * (j + 1);
        return A * k * k + 0.5 * (B + C) * (jj - double(k) * k);
    };
    // <k+2|H|k>, valid for any integer k with |k|, |k+2| <= j. The canonical
    // frame has y = b axis and x = c axis, so the coefficient is (C - B)/4;
    // checked against an explicit body-frame J-operator construction.
    const auto offd = [&](int j, int k) {
        const double jj = double(j) * (j + 1);
        return 0.25 * (C - B) *
               std::sqrt((jj - double(k) * (k + 1)) * (jj - double(k + 1) * (k + 2)));
    };

    std::vector<RotorState> out;
    for (int j = 0; j <= j_max; ++j) {
        std::vector<RotorState> states_j;
        for (int eps : {+1, -1}) {
            // Wang block basis: k = 0 only when (-1)^j = eps, then all k = 1..j.
            std::vector<int> ks;
            if (((j % 2 == 0) ? +1 : -1) == eps) ks.push_back(0);
            for (int k = 1; k <= j; ++k) ks.push_back(k);
            if (ks.empty()) continue;

            const int n = int(ks.size());
            Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                const int k = ks[std::size_t(i)];
                H(i, i) = diag(j, k);
                if (k == 1) {
                    // |1,s> = (|1> + s|-1>)/sqrt2 picks up s <1|H|-1>.
                    const int s = eps * (((j + 1) % 2 == 0) ? +1 : -1);
                    H(i, i) += s * offd(j, -1);
                }
                for (int i2 = i + 1; i2 < n; ++i2) {
                    if (ks[std::size_t(i2)] != k + 2) continue;
                    const double f = offd(j, k);
                    H(i, i2) = H(i2, i) = (k == 0) ? std::sqrt(2.0) * f : f;
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
            for (int t = 0; t < n; ++t) {
                RotorState st;
                st.j = j;
                st.parity = eps;
                st.energy_K = es.eigenvalues()(t);
                st.coeffs.assign(std::size_t(2 * j + 1), 0.0);
                for (int i = 0; i < n; ++i) {
                    const int k = ks[std::size_t(i)];
                    const double w = es.eigenvectors()(i, t);
                    if (k == 0) {
                        st.coeffs[std::size_t(j)] = w;
                    } else {
                        const int s = eps * (((j + k) % 2 == 0) ? +1 : -1);
                        st.coeffs[std::size_t(k + j)] = w / std::sqrt(2.0);
                        st.coeffs[std::size_t(-k + j)] = s * w / std::sqrt(2.0);
                    }
                }
                // Dominant component positive; ties resolved toward positive k.
                int imax = 0;
                for (int i = 0; i < 2 * j + 1; ++i)
                    if (std::abs(st.coeffs[std::size_t(i)]) >
                        std::abs(st.coeffs[std::size_t(imax)]) + 1e-14 ||
                        (std::abs(std::abs(st.coeffs[std::size_t(i)]) -
                                  std::abs(st.coeffs[std::size_t(imax)])) <= 1e-14 &&
                         i > imax))
                        imax = i;
                if (st.coeffs[std::size_t(imax)] < 0.0)
                    for (auto& c : st.coeffs) c = -c;
                st.k_dominant = imax - j;
                states_j.push_back(std::move(st));
            }
        }
        std::sort(states_j.begin(), states_j.end(), [](const RotorState& a, const RotorState& b) {
            if (a.energy_K != b.energy_K) return a.energy_K < b.energy_K;
            if (a.parity != b.parity) return a.parity < b.parity;
            return a.k_dominant < b.k_dominant;
        });
        for (int t = 0; t < int(states_j.size()); ++t) states_j[std::size_t(t)].tau = t - j;
        out.insert(out.end(), states_j.begin(), states_j.end());
    }
    std::sort(out.begin(), out.end(), [](const RotorState& a, const RotorState& b) {
        if (a.energy_K != b.energy_K) return a.energy_K < b.energy_K;
        if (a.j != b.j) return a.j < b.j;
        return a.tau < b.tau;
    });
    return out;
}

// Thermal occupation weights including the (2j+1) spatial degeneracy,
// normalized over the supplied levels.
inline std::vector<double> boltzmann_weights(const std::vector<RotorState>& levels,
                                             double temperature_K) {
    if (temperature_K <= 0.0) throw std::domain_error("boltzmann_weights: T <= 0");
    if (levels.empty()) return {};
    double e0 = levels.front().energy_K;
    for (const auto& l : levels) e0 = std::min(e0, l.energy_K);
    std::vector<double> w(levels.size());
    double z = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        w[i] = (2.0 * levels[i].j + 1.0) *
               std::exp(-(levels[i].energy_K - e0) / temperature_K);
        z += w[i];
    }
    for (auto& x : w) x /= z;
    return w;
}

}  // namespace chirascat
