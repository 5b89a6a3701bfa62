#pragma once

#include <map>
#include <utility>
#include <vector>

#include "boxpp/ratmatrix.hpp"

namespace boxpp {

// One term of the spatial difference operator: coeff * delta(. - shift).
struct ShiftAtom {
    Rational coeff;
    VecQ shift;

    bool operator==(const ShiftAtom& o) const = default;
};

// Midpoint of the support, Xi * (1,...,1) / 2. Subtracting it from every
// shift (and from the support geometry) centers the spline on the origin.
inline VecQ center_shift(const RatMatrix& xi) {
    VecQ half(xi.rows(), Rational(0));
    for (std::size_t i = 0; i < xi.rows(); ++i)
        for (std::size_t j = 0; j < xi.cols(); ++j) half[i] += xi.at(i, j) / 2;
    return half;
}

// Spatial support of the difference operator, built by peeling one column at
// a time: each column doubles the atom count (2^n raw atoms), then like terms
// are collected by exact shift equality. Output is ordered lexicographically
// by shift. keep_zero retains atoms whose collected coefficient is 0.
inline std::vector<ShiftAtom> difference_support(const RatMatrix& xi, bool centered,
                                                 bool keep_zero = false) {
    std::map<VecQ, Rational, VecQLess> acc;
    acc[VecQ(xi.rows(), Rational(0))] = 1;
    for (std::size_t j = 0; j < xi.cols(); ++j) {
        VecQ column = xi.col(j);
        std::map<VecQ, Rational, VecQLess> next;
        for (const auto& [p, c] : acc) {
            next[p] += c;
            next[vadd(p, column)] -= c;
        }
        acc = std::move(next);
    }
    VecQ offset(xi.rows(), Rational(0));
    if (centered) offset = center_shift(xi);
    std::vector<ShiftAtom> out;
    for (const auto& [p, c] : acc) {
        if (c == 0 && !keep_zero) continue;
        out.push_back({c, vsub(p, offset)});
    }
    return out;
}

// Apply the operator to a function: sum of coeff * f(x - shift). Exact when
// f returns Rational.
template <class F>
auto apply_difference(const std::vector<ShiftAtom>& atoms, F&& f, const VecQ& x) {
    using V = decltype(f(x));
    V total{};
    for (const auto& a : atoms) {
        if constexpr (std::is_same_v<V, Rational>) {
            total += a.coeff * f(vsub(x, a.shift));
        } else {
            total += to_double(a.coeff) * f(vsub(x, a.shift));
        }
    }
    return total;
}

}  // namespace boxpp
