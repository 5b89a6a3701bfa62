#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "boxpp/ppform.hpp"

namespace boxpp {

// Binary space partitioning over the support: internal nodes test one knot
// plane, leaves hold the cell polynomial. The tree is immutable once built
// and carries cached double-precision copies for the fast evaluation path.

struct BspNode {
    // internal
    Hyperplane plane;
    std::vector<double> normal_d;
    double offset_d = 0;
    std::unique_ptr<BspNode> left;   // plane side <= 0
    std::unique_ptr<BspNode> right;  // plane side >= 0

    // leaf
    MultiPoly poly;
    VecQ center;
    std::size_t region_id = 0;

    bool is_leaf() const { return !left; }
};

struct BspTree {
    RatMatrix xi;
    bool centered = false;
    Polyhedron support;
    std::unique_ptr<BspNode> root;
    std::size_t leaf_count = 0;

    std::vector<std::vector<double>> support_normals_d;
    std::vector<double> support_offsets_d;
    std::vector<int> support_sides;

    void cache_doubles() {
        support_normals_d.clear();
        support_offsets_d.clear();
        support_sides.clear();
        for (const auto& h : support.halfspaces) {
            support_normals_d.push_back(to_double(h.plane.normal));
            support_offsets_d.push_back(to_double(h.plane.offset));
            support_sides.push_back(h.side);
        }
    }
};

// Balance heuristic: among the planes that strictly split q, pick the one
// whose two sides have the closest exact volumes; ties go to the canonically
// smallest plane. Returns nothing when no plane splits q.
inline std::optional<Hyperplane> choose_split(const std::vector<Hyperplane>& planes,
                                              const Polyhedron& q) {
    std::optional<Hyperplane> best;
    Rational best_gap = 0;
    Rational total = volume(q);
    for (const auto& h : planes) {
        if (!strictly_splits(q, h)) continue;
        auto [a, b] = split_polyhedron(q, h);
        Rational gap = abs_rational(volume(a) * 2 - total);
        if (!best || gap < best_gap || (gap == best_gap && h < *best)) {
            best = h;
            best_gap = gap;
        }
    }
    return best;
}

namespace detail {

inline std::unique_ptr<BspNode> build_bsp_node(const Polyhedron& q,
                                               const std::vector<Hyperplane>& planes,
                                               const std::vector<GatedTerm>& pairs) {
    auto chosen = choose_split(planes, q);
    if (!chosen) {
        auto leaf = std::make_unique<BspNode>();
        leaf->center = q.vertex_centroid();
        leaf->poly = region_polynomial_from(pairs, leaf->center);
        return leaf;
    }
    auto [a, b] = split_polyhedron(q, *chosen);
    auto keep = [&](const Polyhedron& child) {
        std::vector<Hyperplane> kept;
        for (const auto& p : planes)
            if (!(p == *chosen) && strictly_splits(child, p)) kept.push_back(p);
        return kept;
    };
    auto node = std::make_unique<BspNode>();
    node->plane = *chosen;
    node->normal_d = to_double(chosen->normal);
    node->offset_d = to_double(chosen->offset);
    node->left = build_bsp_node(a, keep(a), pairs);
    node->right = build_bsp_node(b, keep(b), pairs);
    return node;
}

inline void collect_leaves(BspNode* node, std::vector<BspNode*>& out) {
    if (node->is_leaf()) {
        out.push_back(node);
        return;
    }
    collect_leaves(node->left.get(), out);
    collect_leaves(node->right.get(), out);
}

}  // namespace detail

inline BspTree build_bsp(const RatMatrix& xi, bool centered) {
    if (rank(xi) != xi.rows()) throw DegenerateMatrix("build_bsp: degenerate direction matrix");
    BspTree tree;
    tree.xi = xi;
    tree.centered = centered;
    tree.support = support_zonotope(xi);
    std::vector<Hyperplane> planes = knot_planes(xi);
    if (centered) {
        VecQ t = vscale(center_shift(xi), Rational(-1));
        tree.support.translate(t);
        for (auto& h : planes) h.offset += dot(h.normal, t);
    }
    auto pairs = detail::expand_pairs(spatial_terms(xi, greens_levels(xi).back()),
                                      difference_support(xi, centered));
    tree.root = detail::build_bsp_node(tree.support, planes, pairs);

    // region ids follow the lexicographic order of leaf centers, matching
    // enumerate_regions
    std::vector<BspNode*> leaves;
    detail::collect_leaves(tree.root.get(), leaves);
    std::vector<std::size_t> order(leaves.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lex_less(leaves[a]->center, leaves[b]->center);
    });
    for (std::size_t i = 0; i < order.size(); ++i) leaves[order[i]]->region_id = i;
    tree.leaf_count = leaves.size();
    tree.cache_doubles();
    return tree;
}

// Fast path: cached doubles, total on all inputs (0 outside the support; on a
// knot plane the traversal lands in a touching region, which is consistent by
// continuity).
inline double eval_bsp(const std::vector<double>& x, const BspTree& tree) {
    for (std::size_t f = 0; f < tree.support_normals_d.size(); ++f) {
        double v = -tree.support_offsets_d[f];
        for (std::size_t i = 0; i < x.size(); ++i) v += tree.support_normals_d[f][i] * x[i];
        if (tree.support_sides[f] < 0 ? v > 0 : v < 0) return 0;
    }
    const BspNode* node = tree.root.get();
    while (!node->is_leaf()) {
        double v = -node->offset_d;
        for (std::size_t i = 0; i < x.size(); ++i) v += node->normal_d[i] * x[i];
        node = v <= 0 ? node->left.get() : node->right.get();
    }
    return node->poly.eval(x);
}

// Exact path.
inline Rational eval_bsp(const VecQ& x, const BspTree& tree) {
    if (!tree.support.contains(x)) return 0;
    const BspNode* node = tree.root.get();
    while (!node->is_leaf()) {
        node = node->plane.eval(x) <= 0 ? node->left.get() : node->right.get();
    }
    return node->poly.eval(x);
}

inline std::size_t tree_depth(const BspNode* node) {
    if (node->is_leaf()) return 0;
    return 1 + std::max(tree_depth(node->left.get()), tree_depth(node->right.get()));
}

}  // namespace boxpp
