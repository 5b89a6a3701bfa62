#pragma once

#include <utility>
#include <vector>

#include "boxpp/diffop.hpp"
#include "boxpp/geometry.hpp"
#include "boxpp/greens.hpp"
#include "boxpp/polynomial.hpp"

namespace boxpp {

// Explicit piecewise-polynomial form of the spline: the global distributional
// sum (difference atoms x spatial Green's terms) plus one collected polynomial
// per mesh cell.

namespace detail {

// The product over a (Green's term, shift atom) pair expands to a fixed
// polynomial gated by the sign pattern of inv * (center - shift); both parts
// are region-independent, so they are precomputed once and reused per region.
struct GatedTerm {
    VecQ inv_shift;       // inv * shift
    Rational det_coeff;   // b * c / |det|
    MultiPoly poly;       // det_coeff * prod_j ((inv x - inv_shift)_j)^e_j / e_j!
    const SpatialGreensTerm* term;
};

inline std::vector<GatedTerm> expand_pairs(const std::vector<SpatialGreensTerm>& terms,
                                           const std::vector<ShiftAtom>& atoms) {
    std::vector<GatedTerm> pairs;
    pairs.reserve(terms.size() * atoms.size());
    for (const auto& t : terms) {
        const std::size_t s = t.inv.rows();
        std::vector<MultiPoly> rows;
        for (std::size_t j = 0; j < s; ++j) rows.push_back(MultiPoly::linear(t.inv.row(j), 0));
        for (const auto& a : atoms) {
            VecQ ip = t.inv.mul(a.shift);
            MultiPoly p = MultiPoly::constant(s, a.coeff * t.coeff);
            for (std::size_t j = 0; j < s; ++j) {
                if (t.exponents[j] == 0) continue;
                MultiPoly lin = rows[j];
                lin.add_term(MultiPoly::Exps(s, 0), -ip[j]);
                p = p * lin.pow(static_cast<unsigned>(t.exponents[j]));
                p *= Rational(1, 1) / Rational(factorial(static_cast<unsigned>(t.exponents[j])));
            }
            pairs.push_back({std::move(ip), a.coeff * t.coeff, std::move(p), &t});
        }
    }
    return pairs;
}

inline MultiPoly region_polynomial_from(const std::vector<GatedTerm>& pairs, const VecQ& center) {
    const std::size_t s = center.size();
    MultiPoly sum(s);
    for (const auto& g : pairs) {
        VecQ ic = g.term->inv.mul(center);
        bool open = true;
        for (std::size_t j = 0; j < s; ++j) {
            Rational z = ic[j] - g.inv_shift[j];
            if (z == 0)
                throw CenterOnKnotPlane("region_polynomial: center lies on a knot plane");
            if (z < 0) {
                open = false;
                break;
            }
        }
        if (open) sum += g.poly;
    }
    return sum;
}

}  // namespace detail

// Polynomial valid on the mesh cell whose (strictly interior) center is c_R:
// every one-sided factor is opened or closed by its sign at the center, the
// factorial normalization staying with the polynomial part.
inline MultiPoly region_polynomial(const std::vector<SpatialGreensTerm>& terms,
                                   const std::vector<ShiftAtom>& atoms, const VecQ& center) {
    return detail::region_polynomial_from(detail::expand_pairs(terms, atoms), center);
}

struct PPForm {
    RatMatrix xi;
    bool centered = false;
    std::vector<ShiftAtom> atoms;            // difference support
    std::vector<SpatialGreensTerm> terms;    // spatial Green's terms
    Polyhedron support;
    std::vector<Hyperplane> planes;          // knot planes meeting the support
    std::vector<std::pair<Region, MultiPoly>> regions;  // ordered by center

    // region containing x strictly, if any
    const std::pair<Region, MultiPoly>* find_region(const VecQ& x) const {
        for (const auto& r : regions) {
            bool inside = true;
            for (const auto& h : r.first.polyhedron.halfspaces)
                if (!h.contains_strict(x)) {
                    inside = false;
                    break;
                }
            if (inside) return &r;
        }
        return nullptr;
    }
};

inline PPForm build_ppform(const RatMatrix& xi, bool centered) {
    if (rank(xi) != xi.rows()) throw DegenerateMatrix("build_ppform: degenerate direction matrix");
    PPForm pp;
    pp.xi = xi;
    pp.centered = centered;
    pp.atoms = difference_support(xi, centered);
    pp.terms = spatial_terms(xi, greens_levels(xi).back());
    pp.support = support_zonotope(xi);
    std::vector<Hyperplane> planes = knot_planes(xi);
    if (centered) {
        VecQ t = vscale(center_shift(xi), Rational(-1));
        pp.support.translate(t);
        for (auto& h : planes) h.offset += dot(h.normal, t);
    }
    pp.planes = std::move(planes);
    auto regions = enumerate_regions_of(pp.support, pp.planes);
    auto pairs = detail::expand_pairs(pp.terms, pp.atoms);
    pp.regions.reserve(regions.size());
    for (auto& r : regions) {
        MultiPoly p = detail::region_polynomial_from(pairs, r.center);
        pp.regions.emplace_back(std::move(r), std::move(p));
    }
    return pp;
}

// Evaluate the distributional sum directly with one-sided powers. Valid only
// off the mesh; on a knot plane the sum may disagree with the spline, so that
// case is rejected rather than answered.
inline Rational eval_pp_distributional(const PPForm& pp, const VecQ& x) {
    for (const auto& h : pp.support.halfspaces)
        if (!h.contains(x)) return 0;  // strictly outside the support
    for (const auto& plane : pp.planes)
        if (plane.eval(x) == 0)
            throw OnKnotPlane("eval_pp_distributional: point lies on a knot plane");
    Rational total = 0;
    const std::size_t s = pp.xi.rows();
    for (const auto& t : pp.terms) {
        for (const auto& a : pp.atoms) {
            VecQ z = t.inv.mul(vsub(x, a.shift));
            Rational factor = a.coeff * t.coeff;
            bool open = true;
            for (std::size_t j = 0; j < s; ++j) {
                if (z[j] == 0)
                    throw OnKnotPlane("eval_pp_distributional: point lies on a shifted knot plane");
                if (z[j] < 0) {
                    open = false;
                    break;
                }
                for (int e = 0; e < t.exponents[j]; ++e) factor *= z[j];
                factor /= Rational(factorial(static_cast<unsigned>(t.exponents[j])));
            }
            if (open) total += factor;
        }
    }
    return total;
}

inline double eval_pp_distributional(const PPForm& pp, const std::vector<double>& x) {
    double total = 0;
    const std::size_t s = pp.xi.rows();
    if (!pp.support.contains(x)) return 0;
    for (const auto& t : pp.terms) {
        std::vector<std::vector<double>> inv_rows(s);
        for (std::size_t j = 0; j < s; ++j) inv_rows[j] = to_double(t.inv.row(j));
        double coeff = to_double(t.coeff);
        for (const auto& a : pp.atoms) {
            double factor = to_double(a.coeff) * coeff;
            bool open = true;
            for (std::size_t j = 0; j < s && open; ++j) {
                double z = 0;
                for (std::size_t i = 0; i < s; ++i)
                    z += inv_rows[j][i] * (x[i] - to_double(a.shift[i]));
                if (z == 0) throw OnKnotPlane("eval_pp_distributional: on a shifted knot plane");
                if (z < 0) {
                    open = false;
                    break;
                }
                for (int e = 0; e < t.exponents[j]; ++e) factor *= z;
                factor /= to_double(Rational(factorial(static_cast<unsigned>(t.exponents[j]))));
            }
            if (open) total += factor;
        }
    }
    return total;
}

// Human-readable region table, one line per region.
inline std::string polynomial_table_text(const PPForm& pp) {
    std::string out;
    for (std::size_t i = 0; i < pp.regions.size(); ++i) {
        out += "R" + std::to_string(i) + "  center=" + to_string(pp.regions[i].first.center) +
               "  P(x) = " + pp.regions[i].second.str() + "\n";
    }
    return out;
}

}  // namespace boxpp
