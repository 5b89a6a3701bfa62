#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "boxpp/diffop.hpp"
#include "boxpp/geometry.hpp"

namespace boxpp {

// Independent numerical evaluator, straight from the recursive convolution
// definition: peel columns one at a time, each contributing a 1-D integral
// over [0,1], down to the normalized indicator of an invertible column block.
//
// The integrand at every level is piecewise polynomial with kinks where the
// shifted argument crosses the mesh of the reduced spline, so plain
// Gauss-Legendre stalls at low accuracy. The reference configuration splits
// each integral at the exact crossing parameters (between crossings the
// integrand is a polynomial of degree <= n-s, which the rule integrates to
// rounding error) and does the innermost indicator integral in closed form.
// The naive configuration (no splitting, quadrature all the way down) is kept
// for convergence studies.
struct QuadratureSpec {
    int nodes_per_level = 32;        // Gauss-Legendre points per (sub)interval
    bool split_at_breakpoints = true;
    bool analytic_last = true;       // integrate the indicator level in closed form
    int uniform_panels = 1;          // uniform subdivision when not splitting
};

namespace detail {

template <class F>
double gauss_on(const F& f, double a, double b, int order) {
    using boost::math::quadrature::gauss;
    if (order <= 4) return gauss<double, 4>::integrate(f, a, b);
    if (order <= 8) return gauss<double, 8>::integrate(f, a, b);
    if (order <= 16) return gauss<double, 16>::integrate(f, a, b);
    if (order <= 32) return gauss<double, 32>::integrate(f, a, b);
    if (order <= 64) return gauss<double, 64>::integrate(f, a, b);
    return gauss<double, 128>::integrate(f, a, b);
}

struct OracleLevelPlanes {
    std::vector<std::vector<double>> normals;
    std::vector<double> offsets;
};

}  // namespace detail

class ConvolutionOracle {
public:
    ConvolutionOracle(const RatMatrix& xi, bool centered, QuadratureSpec spec = {})
        : spec_(spec), s_(xi.rows()) {
        if (spec_.nodes_per_level < 2) throw Error("ConvolutionOracle: need order >= 2");
        const std::size_t n = xi.cols();
        if (rank(xi) != s_) throw DegenerateMatrix("ConvolutionOracle: degenerate direction matrix");

        // greedy invertible basis; remaining columns get peeled
        std::vector<std::size_t> basis, peel;
        for (std::size_t j = 0; j < n; ++j) {
            if (basis.size() < s_) {
                auto cand = basis;
                cand.push_back(j);
                if (rank(xi.select_columns(cand)) == cand.size()) {
                    basis = cand;
                    continue;
                }
            }
            peel.push_back(j);
        }
        RatMatrix b = xi.select_columns(basis);
        RatMatrix binv = inverse(b);
        inv_det_ = std::abs(to_double(det(b)));
        for (std::size_t i = 0; i < s_; ++i) binv_rows_.push_back(to_double(binv.row(i)));
        for (auto j : peel) peel_dirs_.push_back(to_double(xi.col(j)));

        // mesh planes of each reduced spline, for breakpoint subdivision
        for (std::size_t lvl = 0; lvl < peel.size(); ++lvl) {
            std::vector<std::size_t> rest(peel.begin() + static_cast<std::ptrdiff_t>(lvl) + 1,
                                          peel.end());
            rest.insert(rest.end(), basis.begin(), basis.end());
            detail::OracleLevelPlanes lp;
            for (const auto& h : knot_planes(xi.select_columns(rest))) {
                lp.normals.push_back(to_double(h.normal));
                lp.offsets.push_back(to_double(h.offset));
            }
            level_planes_.push_back(std::move(lp));
        }

        shift_.assign(s_, 0.0);
        if (centered) shift_ = to_double(center_shift(xi));
    }

    double operator()(std::vector<double> x) const {
        for (std::size_t i = 0; i < s_; ++i) x[i] += shift_[i];
        return level(0, x);
    }

private:
    double base(const std::vector<double>& y) const {
        for (std::size_t i = 0; i < s_; ++i) {
            double u = 0;
            for (std::size_t j = 0; j < s_; ++j) u += binv_rows_[i][j] * y[j];
            if (u < 0 || u >= 1) return 0;
        }
        return 1.0 / inv_det_;
    }

    // closed-form integral over t in [0,1] of base(y - t * dir)
    double last_level_exact(const std::vector<double>& y, const std::vector<double>& dir) const {
        double lo = 0, hi = 1;
        for (std::size_t i = 0; i < s_; ++i) {
            double u = 0, v = 0;
            for (std::size_t j = 0; j < s_; ++j) {
                u += binv_rows_[i][j] * y[j];
                v += binv_rows_[i][j] * dir[j];
            }
            // 0 <= u - t v < 1
            if (v == 0) {
                if (u < 0 || u >= 1) return 0;
            } else if (v > 0) {
                lo = std::max(lo, (u - 1) / v);
                hi = std::min(hi, u / v);
            } else {
                lo = std::max(lo, u / v);
                hi = std::min(hi, (u - 1) / v);
            }
        }
        return hi > lo ? (hi - lo) / inv_det_ : 0.0;
    }

    double level(std::size_t lvl, const std::vector<double>& y) const {
        if (lvl == peel_dirs_.size()) return base(y);
        const auto& dir = peel_dirs_[lvl];
        if (spec_.analytic_last && lvl + 1 == peel_dirs_.size())
            return last_level_exact(y, dir);

        std::vector<double> cuts{0.0, 1.0};
        if (spec_.split_at_breakpoints) {
            const auto& lp = level_planes_[lvl];
            for (std::size_t p = 0; p < lp.normals.size(); ++p) {
                double nd = 0, ny = 0;
                for (std::size_t i = 0; i < s_; ++i) {
                    nd += lp.normals[p][i] * dir[i];
                    ny += lp.normals[p][i] * y[i];
                }
                if (nd == 0) continue;
                double t = (ny - lp.offsets[p]) / nd;
                if (t > 0 && t < 1) cuts.push_back(t);
            }
        } else if (spec_.uniform_panels > 1) {
            for (int k = 1; k < spec_.uniform_panels; ++k)
                cuts.push_back(static_cast<double>(k) / spec_.uniform_panels);
        }
        std::sort(cuts.begin(), cuts.end());

        auto f = [&](double t) {
            std::vector<double> z(s_);
            for (std::size_t i = 0; i < s_; ++i) z[i] = y[i] - t * dir[i];
            return level(lvl + 1, z);
        };
        double total = 0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] - cuts[k] < 1e-14) continue;
            total += detail::gauss_on(f, cuts[k], cuts[k + 1], spec_.nodes_per_level);
        }
        return total;
    }

    QuadratureSpec spec_;
    std::size_t s_;
    double inv_det_ = 1;
    std::vector<std::vector<double>> binv_rows_;
    std::vector<std::vector<double>> peel_dirs_;
    std::vector<detail::OracleLevelPlanes> level_planes_;
    std::vector<double> shift_;
};

inline double eval_convolution(const RatMatrix& xi, const std::vector<double>& x,
                               const QuadratureSpec& spec = {}, bool centered = false) {
    return ConvolutionOracle(xi, centered, spec)(x);
}

}  // namespace boxpp
