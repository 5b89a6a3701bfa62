#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "boxpp/polynomial.hpp"
#include "boxpp/ratmatrix.hpp"

namespace boxpp {

// Exact polytope geometry at desk scale (s <= 3, a few dozen planes). Both
// representations are kept: halfspaces for membership and splitting, vertices
// for volumes and centers.

// The plane { x : normal . x = offset }. The normal is a primitive integer
// vector with positive leading entry, so equal planes compare equal.
struct Hyperplane {
    VecQ normal;
    Rational offset;

    static Hyperplane canonical(const VecQ& n, const Rational& d) {
        VecQ p = primitivize(n);
        if (is_zero(p)) throw Error("Hyperplane: zero normal");
        // primitivize rescales by a positive factor; apply the same one to d
        std::size_t i = 0;
        while (n[i] == 0) ++i;
        return {p, d * p[i] / n[i]};
    }

    Rational eval(const VecQ& x) const { return dot(normal, x) - offset; }

    double eval(const std::vector<double>& x) const {
        double v = -to_double(offset);
        for (std::size_t i = 0; i < normal.size(); ++i) v += to_double(normal[i]) * x[i];
        return v;
    }

    bool operator==(const Hyperplane& o) const = default;
    bool operator<(const Hyperplane& o) const {
        if (normal != o.normal) return lex_less(normal, o.normal);
        return offset < o.offset;
    }
};

struct Halfspace {
    Hyperplane plane;
    int side;  // -1: plane.eval(x) <= 0,  +1: plane.eval(x) >= 0

    bool contains(const VecQ& x) const {
        Rational v = plane.eval(x);
        return side < 0 ? v <= 0 : v >= 0;
    }
    bool contains_strict(const VecQ& x) const {
        Rational v = plane.eval(x);
        return side < 0 ? v < 0 : v > 0;
    }
};

struct Polyhedron {
    std::vector<Halfspace> halfspaces;
    std::vector<VecQ> vertices;

    std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().size(); }

    bool contains(const VecQ& x) const {
        for (const auto& h : halfspaces)
            if (!h.contains(x)) return false;
        return true;
    }

    bool contains(const std::vector<double>& x) const {
        for (const auto& h : halfspaces) {
            double v = h.plane.eval(x);
            if (h.side < 0 ? v > 0 : v < 0) return false;
        }
        return true;
    }

    VecQ vertex_centroid() const {
        VecQ c(dim(), Rational(0));
        for (const auto& v : vertices) c = vadd(c, v);
        Rational k(1, static_cast<long long>(vertices.size()));
        return vscale(c, k);
    }

    void translate(const VecQ& t) {
        for (auto& v : vertices) v = vadd(v, t);
        for (auto& h : halfspaces) h.plane.offset += dot(h.plane.normal, t);
    }
};

// An open evaluation cell: no knot plane meets its interior, and the center
// (vertex centroid) is strictly inside.
struct Region {
    Polyhedron polyhedron;
    VecQ center;
};

namespace detail {

// primitive normal orthogonal to the span of the given columns, or nullopt
// if they do not span an (s-1)-dimensional subspace
inline std::optional<VecQ> facet_normal(const RatMatrix& xi, const std::vector<std::size_t>& cols) {
    const std::size_t s = xi.rows();
    RatMatrix sub(cols.size(), s);
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t r = 0; r < s; ++r) sub.at(i, r) = xi.at(r, cols[i]);
    if (rank(sub) != s - 1) return std::nullopt;
    RatMatrix k = kernel_column_echelon(sub);
    if (k.cols() != 1) return std::nullopt;
    VecQ n = primitivize(k.col(0));
    return n;
}

inline void enumerate_subsets(std::size_t n, std::size_t k, std::vector<std::size_t>& cur,
                              std::size_t start, std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        enumerate_subsets(n, k, cur, i + 1, out);
        cur.pop_back();
    }
}

// all distinct primitive facet-normal directions of the mesh of xi
inline std::vector<VecQ> normal_directions(const RatMatrix& xi) {
    const std::size_t s = xi.rows(), n = xi.cols();
    std::set<VecQ, VecQLess> seen;
    if (s == 1) {
        seen.insert(VecQ{Rational(1)});
    } else {
        std::vector<std::vector<std::size_t>> subsets;
        std::vector<std::size_t> cur;
        enumerate_subsets(n, s - 1, cur, 0, subsets);
        for (const auto& sub : subsets) {
            auto nrm = facet_normal(xi, sub);
            if (nrm) seen.insert(*nrm);
        }
    }
    return {seen.begin(), seen.end()};
}

inline std::vector<std::vector<bool>> vertex_facet_incidence(const Polyhedron& q) {
    std::vector<std::vector<bool>> inc(q.vertices.size(),
                                       std::vector<bool>(q.halfspaces.size(), false));
    for (std::size_t v = 0; v < q.vertices.size(); ++v)
        for (std::size_t f = 0; f < q.halfspaces.size(); ++f)
            inc[v][f] = q.halfspaces[f].plane.eval(q.vertices[v]) == 0;
    return inc;
}

// Vertex pairs sharing at least s-1 facets are exactly the edges of a convex
// polytope with deduplicated facet planes.
inline std::vector<std::pair<std::size_t, std::size_t>> edges(
    const Polyhedron& q, const std::vector<std::vector<bool>>& inc) {
    const std::size_t s = q.dim();
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t a = 0; a < q.vertices.size(); ++a)
        for (std::size_t b = a + 1; b < q.vertices.size(); ++b) {
            std::size_t shared = 0;
            for (std::size_t f = 0; f < q.halfspaces.size(); ++f) shared += inc[a][f] && inc[b][f];
            if (shared + 1 >= s) e.emplace_back(a, b);
        }
    return e;
}

// drop halfspaces that are not facets (fewer than s incident vertices) and
// duplicate vertices
inline void tidy(Polyhedron& q) {
    const std::size_t s = q.dim();
    std::set<VecQ, VecQLess> vs(q.vertices.begin(), q.vertices.end());
    q.vertices.assign(vs.begin(), vs.end());
    std::vector<Halfspace> kept;
    for (const auto& h : q.halfspaces) {
        std::size_t active = 0;
        for (const auto& v : q.vertices) active += h.plane.eval(v) == 0;
        if (active >= s) kept.push_back(h);
    }
    q.halfspaces = std::move(kept);
}

// order the vertices of a convex polygon (given in its plane) around their
// centroid; 2-d coordinates, exact sign comparisons
inline std::vector<std::size_t> order_polygon(const std::vector<std::array<Rational, 2>>& pts) {
    std::array<Rational, 2> c{Rational(0), Rational(0)};
    for (const auto& p : pts) {
        c[0] += p[0];
        c[1] += p[1];
    }
    Rational k(1, static_cast<long long>(pts.size()));
    c[0] *= k;
    c[1] *= k;
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto half = [&](std::size_t i) {
        Rational dy = pts[i][1] - c[1], dx = pts[i][0] - c[0];
        if (dy != 0) return dy > 0 ? 0 : 1;
        return dx > 0 ? 0 : 1;
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        Rational cross = (pts[a][0] - c[0]) * (pts[b][1] - c[1]) -
                         (pts[b][0] - c[0]) * (pts[a][1] - c[1]);
        return cross > 0;
    });
    return idx;
}

}  // namespace detail

// Decompose a full-dimensional convex polytope into simplices: fan around the
// vertex centroid, over each facet (facet fans around its first vertex in
// angular order). Supports s in {1, 2, 3}.
inline std::vector<std::vector<VecQ>> simplicial_decomposition(const Polyhedron& q) {
    const std::size_t s = q.dim();
    std::vector<std::vector<VecQ>> simplices;
    if (q.vertices.empty()) return simplices;
    if (s == 1) {
        auto [mn, mx] = std::minmax_element(q.vertices.begin(), q.vertices.end(), lex_less);
        simplices.push_back({*mn, *mx});
        return simplices;
    }
    if (s == 2) {
        std::vector<std::array<Rational, 2>> pts;
        for (const auto& v : q.vertices) pts.push_back({v[0], v[1]});
        auto order = detail::order_polygon(pts);
        for (std::size_t i = 1; i + 1 < order.size(); ++i)
            simplices.push_back(
                {q.vertices[order[0]], q.vertices[order[i]], q.vertices[order[i + 1]]});
        return simplices;
    }
    if (s != 3) throw Error("simplicial_decomposition: only s <= 3 supported");
    VecQ c = q.vertex_centroid();
    for (const auto& h : q.halfspaces) {
        std::vector<VecQ> face;
        for (const auto& v : q.vertices)
            if (h.plane.eval(v) == 0) face.push_back(v);
        if (face.size() < 3) continue;
        // drop the dominant axis of the normal to get plane coordinates
        std::size_t drop = 0;
        for (std::size_t i = 1; i < 3; ++i)
            if (abs_rational(h.plane.normal[i]) > abs_rational(h.plane.normal[drop])) drop = i;
        std::vector<std::array<Rational, 2>> pts;
        for (const auto& v : face) {
            std::array<Rational, 2> p;
            std::size_t k = 0;
            for (std::size_t i = 0; i < 3; ++i)
                if (i != drop) p[k++] = v[i];
            pts.push_back(p);
        }
        auto order = detail::order_polygon(pts);
        for (std::size_t i = 1; i + 1 < order.size(); ++i)
            simplices.push_back({c, face[order[0]], face[order[i]], face[order[i + 1]]});
    }
    return simplices;
}

inline Rational simplex_volume(const std::vector<VecQ>& verts) {
    const std::size_t s = verts.size() - 1;
    RatMatrix m(s, s);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i = 0; i < s; ++i) m.at(i, j) = verts[j + 1][i] - verts[0][i];
    return abs_rational(det(m)) / Rational(factorial(static_cast<unsigned>(s)));
}

inline Rational volume(const Polyhedron& q) {
    Rational total = 0;
    for (const auto& simplex : simplicial_decomposition(q)) total += simplex_volume(simplex);
    return total;
}

inline Rational integrate(const MultiPoly& p, const Polyhedron& q) {
    Rational total = 0;
    for (const auto& simplex : simplicial_decomposition(q)) total += integrate_over_simplex(p, simplex);
    return total;
}

// Support of the spline: the Minkowski sum of the column segments
// { t xi_j : t in [0,1] }. Facets come from the (s-1)-subsets of columns that
// span a hyperplane; vertices are the subset sums that lie on s facets with
// independent normals.
inline Polyhedron support_zonotope(const RatMatrix& xi) {
    const std::size_t s = xi.rows(), n = xi.cols();
    if (rank(xi) != s) throw DegenerateMatrix("support_zonotope: degenerate direction matrix");

    Polyhedron q;
    for (const auto& nrm : detail::normal_directions(xi)) {
        Rational hi = 0, lo = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Rational d = dot(nrm, xi.col(j));
            if (d > 0) hi += d;
            else lo += d;
        }
        q.halfspaces.push_back({Hyperplane{nrm, hi}, -1});
        q.halfspaces.push_back({Hyperplane{nrm, lo}, +1});
    }

    std::set<VecQ, VecQLess> sums;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        VecQ p(s, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1) p = vadd(p, xi.col(j));
        sums.insert(p);
    }
    for (const auto& p : sums) {
        std::vector<VecQ> rows;
        for (const auto& h : q.halfspaces)
            if (h.plane.eval(p) == 0) rows.push_back(h.plane.normal);
        if (rows.size() < s) continue;
        RatMatrix m(rows.size(), s);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < s; ++j) m.at(i, j) = rows[i][j];
        if (rank(m) == s) q.vertices.push_back(p);
    }
    detail::tidy(q);
    return q;
}

// All mesh planes that meet the support: for each facet-normal direction the
// reachable offsets are the integer combinations of { normal . xi_j }, i.e.
// the multiples of their gcd, clipped to the support's extent (boundary
// planes included). Output is deduplicated and canonically ordered.
inline std::vector<Hyperplane> knot_planes(const RatMatrix& xi) {
    const std::size_t n = xi.cols();
    if (rank(xi) != xi.rows()) throw DegenerateMatrix("knot_planes: degenerate direction matrix");
    std::vector<Hyperplane> out;
    for (const auto& nrm : detail::normal_directions(xi)) {
        Rational g = 0, hi = 0, lo = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Rational d = dot(nrm, xi.col(j));
            g = rational_gcd(g, d);
            if (d > 0) hi += d;
            else lo += d;
        }
        if (g == 0) continue;
        for (Int k = ceil_rational(lo / g); k <= floor_rational(hi / g); ++k)
            out.push_back({nrm, g * Rational(k)});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool strictly_splits(const Polyhedron& q, const Hyperplane& h) {
    bool neg = false, pos = false;
    for (const auto& v : q.vertices) {
        Rational e = h.eval(v);
        neg |= e < 0;
        pos |= e > 0;
        if (neg && pos) return true;
    }
    return false;
}

// Cut q into the closed halves A = q & {h <= 0}, B = q & {h >= 0}. Vertices
// are carried over by sign and new ones placed exactly at edge crossings.
inline std::pair<Polyhedron, Polyhedron> split_polyhedron(const Polyhedron& q,
                                                          const Hyperplane& h) {
    if (!strictly_splits(q, h))
        throw NoSplit("split_polyhedron: plane does not cut the interior");
    auto inc = detail::vertex_facet_incidence(q);
    std::vector<Rational> val(q.vertices.size());
    for (std::size_t i = 0; i < q.vertices.size(); ++i) val[i] = h.eval(q.vertices[i]);

    std::vector<VecQ> cuts;
    for (auto [a, b] : detail::edges(q, inc)) {
        if ((val[a] < 0 && val[b] > 0) || (val[a] > 0 && val[b] < 0)) {
            Rational t = val[a] / (val[a] - val[b]);
            cuts.push_back(vadd(q.vertices[a], vscale(vsub(q.vertices[b], q.vertices[a]), t)));
        }
    }

    Polyhedron a, b;
    a.halfspaces = q.halfspaces;
    a.halfspaces.push_back({h, -1});
    b.halfspaces = q.halfspaces;
    b.halfspaces.push_back({h, +1});
    for (std::size_t i = 0; i < q.vertices.size(); ++i) {
        if (val[i] <= 0) a.vertices.push_back(q.vertices[i]);
        if (val[i] >= 0) b.vertices.push_back(q.vertices[i]);
    }
    for (const auto& c : cuts) {
        a.vertices.push_back(c);
        b.vertices.push_back(c);
    }
    detail::tidy(a);
    detail::tidy(b);
    return {std::move(a), std::move(b)};
}

namespace detail {

inline void split_all(const Polyhedron& q, std::vector<Hyperplane> planes,
                      std::vector<Polyhedron>& leaves) {
    for (std::size_t i = 0; i < planes.size(); ++i) {
        if (!strictly_splits(q, planes[i])) continue;
        Hyperplane h = planes[i];
        planes.erase(planes.begin() + static_cast<std::ptrdiff_t>(i));
        // keep only planes that can still cut a descendant
        auto [a, b] = split_polyhedron(q, h);
        auto prune = [&](const Polyhedron& child) {
            std::vector<Hyperplane> kept;
            for (const auto& p : planes)
                if (strictly_splits(child, p)) kept.push_back(p);
            return kept;
        };
        split_all(a, prune(a), leaves);
        split_all(b, prune(b), leaves);
        return;
    }
    leaves.push_back(q);
}

}  // namespace detail

// Cut the support by every knot plane; the leaves are the open evaluation
// cells. Regions are ordered lexicographically by center so indices are
// reproducible.
inline std::vector<Region> enumerate_regions_of(const Polyhedron& support,
                                                const std::vector<Hyperplane>& planes) {
    std::vector<Polyhedron> leaves;
    detail::split_all(support, planes, leaves);
    std::vector<Region> regions;
    regions.reserve(leaves.size());
    for (auto& q : leaves) {
        VecQ c = q.vertex_centroid();
        regions.push_back({std::move(q), std::move(c)});
    }
    std::sort(regions.begin(), regions.end(),
              [](const Region& a, const Region& b) { return lex_less(a.center, b.center); });
    return regions;
}

inline std::vector<Region> enumerate_regions(const RatMatrix& xi) {
    return enumerate_regions_of(support_zonotope(xi), knot_planes(xi));
}

}  // namespace boxpp
