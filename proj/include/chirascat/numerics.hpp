#pragma once
// Shared numerical utilities: Gauss-Legendre rules, sequence acceleration for
// slowly convergent oscillatory sums, and small least-squares helpers.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chirascat {

struct QuadratureRule {
    std::vector<double> x;  // nodes
    std::vector<double> w;  // weights
};

// Gauss-Legendre rule on [-1, 1] by Newton iteration on the Legendre recurrence.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    QuadratureRule q;
    q.x.resize(std::size_t(n));
    q.w.resize(std::size_t(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess for the i-th positive root.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        q.x[std::size_t(i)] = -z;
        q.x[std::size_t(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        q.w[std::size_t(i)] = w;
        q.w[std::size_t(n - 1 - i)] = w;
    }
    return q;
}

// Affine map of a [-1, 1] rule onto [a, b].
inline QuadratureRule map_interval(const QuadratureRule& base, double a, double b) {
    QuadratureRule q = base;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        q.x[i] = mid + half * base.x[i];
        q.w[i] = half * base.w[i];
    }
    return q;
}

// Wynn epsilon algorithm: accelerated limit of a sequence of partial sums.
// Returns the most refined even-column entry; robust for alternating tails.
inline double wynn_epsilon(const std::vector<double>& partial) {
    const std::size_t n = partial.size();
    if (n == 0) throw std::invalid_argument("wynn_epsilon: empty sequence");
    if (n == 1) return partial[0];
    // Columns of the epsilon table: eps[k][j+1] = eps[k+1][j-1] + 1/(eps[k+1][j] - eps[k][j]).
    std::vector<double> colm1(n + 1, 0.0);  // column -1 is identically zero
    std::vector<double> col0 = partial;     // column 0: the raw partial sums
    double best = partial.back();
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<double> col1(n - j);
        for (std::size_t k = 0; k + j < n; ++k) {
            const double diff = col0[k + 1] - col0[k];
            if (std::abs(diff) < 1e-300) {
                if (j % 2 == 1) return col0[k + 1];  // partial sums converged exactly
                col1[k] = colm1[k + 1];              // singular rule (auxiliary column)
            } else {
                col1[k] = colm1[k + 1] + 1.0 / diff;
            }
        }
        if (j % 2 == 0 && !col1.empty()) best = col1.back();  // even columns estimate the limit
        colm1 = std::move(col0);
        col0 = std::move(col1);
    }
    return best;
}

// Ordinary least squares: coefficients minimizing ||A c - y||_2.
inline Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    return A.colPivHouseholderQr().solve(y);
}

// Straight-line fit y = a + b x; returns {a, b}.
inline std::pair<double, double> linear_fit(const std::vector<double>& x,
                                            const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching points");
    Eigen::MatrixXd A(long(x.size()), 2);
    Eigen::VectorXd b(long(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        A(long(i), 0) = 1.0;
        A(long(i), 1) = x[i];
        b(long(i)) = y[i];
    }
    const Eigen::VectorXd c = least_squares(A, b);
    return {c(0), c(1)};
}

// FNV-1a 64-bit hash, used to fingerprint run configurations in outputs.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace chirascat
