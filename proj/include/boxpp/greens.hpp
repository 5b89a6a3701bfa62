#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "boxpp/ratmatrix.hpp"

namespace boxpp {

// The Fourier form of the Green's function, prod_j (w_j)^-1 with
// w_j = xi_j . omega, is not separable in omega. It can be rewritten level by
// level as a sum of separable terms c * w^-alpha by trading one power of w_j
// against the others along a null-space direction of Xi. This header builds
// those levels and realizes the final level as spatial truncated-power terms.

// One separable term: coeff * w^-alpha, alpha a nonnegative multi-index.
struct GreensAtom {
    Rational coeff;
    std::vector<int> alpha;

    bool operator==(const GreensAtom& o) const = default;
};

using GreensLevel = std::vector<GreensAtom>;

// Null-space vector of Xi that vanishes wherever alpha vanishes, plus the
// index of its first nonzero entry (0-based).
struct AdaptedKernelVector {
    VecQ nu;
    std::size_t leading;
};

namespace detail {

inline std::size_t support_size(const std::vector<int>& alpha) {
    std::size_t z = 0;
    for (int a : alpha) z += a != 0;
    return z;
}

inline AdaptedKernelVector adapted_kernel_vector(const RatMatrix& kernel,
                                                 const std::vector<int>& alpha) {
    const std::size_t n = kernel.rows();
    VecQ nu;
    if (support_size(alpha) == n) {
        if (kernel.cols() == 0) throw NoSuchVector("adapted_kernel_vector: trivial kernel");
        nu = kernel.col(0);
    } else {
        std::vector<std::size_t> zero_rows;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] == 0) zero_rows.push_back(j);
        RatMatrix c(zero_rows.size(), kernel.cols());
        for (std::size_t i = 0; i < zero_rows.size(); ++i)
            for (std::size_t j = 0; j < kernel.cols(); ++j)
                c.at(i, j) = kernel.at(zero_rows[i], j);
        RatMatrix kc = kernel_column_echelon(c);
        if (kc.cols() == 0)
            throw NoSuchVector("adapted_kernel_vector: no null vector for this multi-index");
        nu = kernel.mul(kc.col(0));
    }
    for (std::size_t j = 0; j < n; ++j)
        if (alpha[j] == 0 && nu[j] != 0)
            throw NoSuchVector("adapted_kernel_vector: vector does not vanish with alpha");
    std::size_t m = 0;
    while (m < n && nu[m] == 0) ++m;
    if (m == n) throw NoSuchVector("adapted_kernel_vector: zero vector");
    return {std::move(nu), m};
}

}  // namespace detail

inline AdaptedKernelVector adapted_kernel_vector(const RatMatrix& xi,
                                                 const std::vector<int>& alpha) {
    if (rank(xi) != xi.rows()) throw DegenerateMatrix("adapted_kernel_vector: rank-deficient matrix");
    return detail::adapted_kernel_vector(kernel_column_echelon(xi), alpha);
}

// Move one unit of exponent from position j onto the leading position m.
inline std::vector<int> transfer_power(std::vector<int> alpha, std::size_t m, std::size_t j) {
    ++alpha[m];
    --alpha[j];
    return alpha;
}

// Levels 0 .. n-s of the separable decomposition. Level 0 is the single term
// w^-(1,...,1); each following level trades one exponent away along an
// adapted null vector. Like terms are collected at every level and collected
// zeros are pruned; atoms come out ordered lexicographically by alpha.
inline std::vector<GreensLevel> greens_levels(const RatMatrix& xi) {
    const std::size_t s = xi.rows(), n = xi.cols();
    if (rank(xi) != s) throw DegenerateMatrix("greens_levels: degenerate direction matrix");
    RatMatrix kernel = kernel_column_echelon(xi);

    std::vector<GreensLevel> levels;
    levels.push_back({GreensAtom{Rational(1), std::vector<int>(n, 1)}});
    for (std::size_t k = 1; k + s <= n; ++k) {
        std::map<std::vector<int>, Rational> next;
        for (const auto& atom : levels.back()) {
            auto [nu, m] = detail::adapted_kernel_vector(kernel, atom.alpha);
            for (std::size_t j = m + 1; j < n; ++j) {
                if (nu[j] == 0) continue;
                next[transfer_power(atom.alpha, m, j)] += -atom.coeff * nu[j] / nu[m];
            }
        }
        GreensLevel level;
        for (auto& [alpha, c] : next)
            if (c != 0) level.push_back({std::move(c), alpha});
        levels.push_back(std::move(level));
    }
    return levels;
}

// Exact check of the separable rewrite at one frequency sample: the level-k
// sum of c * w^-alpha must equal prod_j w_j^-1. The imaginary unit in
// w_j = i xi_j . omega cancels between both sides, so the whole test runs in Q.
inline bool fourier_identity_holds(const RatMatrix& xi, std::size_t level, const VecQ& omega) {
    const std::size_t n = xi.cols();
    VecQ w(n);
    Rational target = 1;
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = dot(xi.col(j), omega);
        if (w[j] == 0) throw PoleAtOmega("fourier_identity_holds: omega hits a pole");
        target /= w[j];
    }
    auto levels = greens_levels(xi);
    if (level >= levels.size()) throw Error("fourier_identity_holds: level out of range");
    Rational sum = 0;
    for (const auto& atom : levels[level]) {
        Rational t = atom.coeff;
        for (std::size_t j = 0; j < n; ++j)
            for (int e = 0; e < atom.alpha[j]; ++e) t /= w[j];
        sum += t;
    }
    return sum == target;
}

// A term of the spatial Green's function:
//   coeff * prod_j ((inv . x)_j)_+^(exponents_j) / exponents_j!
// where inv is the inverse of the column selection named by support_cols.
struct SpatialGreensTerm {
    Rational coeff;           // c / |det Xi_alpha|
    RatMatrix xi_alpha;       // selected columns, s x s
    RatMatrix inv;            // exact inverse of xi_alpha
    std::vector<int> exponents;
    std::vector<std::size_t> support_cols;  // 0-based, strictly increasing
};

// Realize the last-level atoms spatially. Every alpha must have exactly s
// nonzero entries, and the selected columns are invertible by construction;
// a singular selection indicates a broken invariant upstream.
inline std::vector<SpatialGreensTerm> spatial_terms(const RatMatrix& xi,
                                                    const GreensLevel& last_level) {
    const std::size_t s = xi.rows();
    std::vector<SpatialGreensTerm> terms;
    terms.reserve(last_level.size());
    for (const auto& atom : last_level) {
        std::vector<std::size_t> sigma;
        std::vector<int> mu;
        for (std::size_t j = 0; j < atom.alpha.size(); ++j)
            if (atom.alpha[j] != 0) {
                sigma.push_back(j);
                mu.push_back(atom.alpha[j]);
            }
        if (sigma.size() != s)
            throw Error("spatial_terms: atom does not select s columns");
        RatMatrix sel = xi.select_columns(sigma);
        Rational d = det(sel);
        if (d == 0) throw SingularSelection("spatial_terms: singular column selection");
        std::vector<int> expo(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) expo[i] = mu[i] - 1;
        terms.push_back({atom.coeff / abs_rational(d), sel, inverse(sel), std::move(expo),
                         std::move(sigma)});
    }
    return terms;
}

}  // namespace boxpp
