#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "boxpp/bsp.hpp"
#include "boxpp/ppform.hpp"

namespace boxpp {

// JSON import/export. All rationals travel as "num/den" strings so nothing
// ever loses exactness on the wire; re-exporting an imported document is
// byte-identical.

using json = nlohmann::ordered_json;

// ---- direction matrix spec ----

struct XiSpec {
    RatMatrix xi;
    bool centered = false;
};

inline XiSpec parse_xi_spec(const json& j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw ParseError("xi spec: need rows, cols, entries");
    std::size_t rows = j["rows"].get<std::size_t>();
    std::size_t cols = j["cols"].get<std::size_t>();
    if (rows < 1 || cols < rows) throw ParseError("xi spec: need n >= s >= 1");
    const auto& e = j["entries"];
    if (e.size() != rows) throw ParseError("xi spec: wrong number of entry rows");
    RatMatrix xi(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (e[i].size() != cols) throw ParseError("xi spec: wrong number of entry columns");
        for (std::size_t c = 0; c < cols; ++c)
            xi.at(i, c) = parse_rational(e[i][c].get<std::string>());
    }
    bool centered = j.value("centered", false);
    return {std::move(xi), centered};
}

inline json xi_spec_to_json(const RatMatrix& xi, bool centered) {
    json e = json::array();
    for (std::size_t i = 0; i < xi.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < xi.cols(); ++c) row.push_back(to_string(xi.at(i, c)));
        e.push_back(row);
    }
    return {{"rows", xi.rows()}, {"cols", xi.cols()}, {"entries", e}, {"centered", centered}};
}

// ---- building blocks ----

inline json vecq_to_json(const VecQ& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

inline VecQ vecq_from_json(const json& a) {
    VecQ v;
    for (const auto& x : a) v.push_back(parse_rational(x.get<std::string>()));
    return v;
}

inline json shift_atoms_to_json(const std::vector<ShiftAtom>& atoms) {
    json a = json::array();
    for (const auto& s : atoms) a.push_back({{"c", to_string(s.coeff)}, {"p", vecq_to_json(s.shift)}});
    return a;
}

inline std::vector<ShiftAtom> shift_atoms_from_json(const json& a) {
    std::vector<ShiftAtom> out;
    for (const auto& s : a)
        out.push_back({parse_rational(s["c"].get<std::string>()), vecq_from_json(s["p"])});
    return out;
}

inline json greens_levels_to_json(const std::vector<GreensLevel>& levels) {
    json ls = json::array();
    for (const auto& level : levels) {
        json l = json::array();
        for (const auto& atom : level)
            l.push_back({{"c", to_string(atom.coeff)}, {"alpha", atom.alpha}});
        ls.push_back(l);
    }
    return ls;
}

inline json poly_to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back({{"exps", e}, {"coeff", to_string(c)}});
    return terms;
}

inline MultiPoly poly_from_json(const json& terms, std::size_t num_vars) {
    MultiPoly p(num_vars);
    for (const auto& t : terms)
        p.add_term(t["exps"].get<MultiPoly::Exps>(), parse_rational(t["coeff"].get<std::string>()));
    return p;
}

inline json hyperplane_to_json(const Hyperplane& h) {
    return {{"normal", vecq_to_json(h.normal)}, {"offset", to_string(h.offset)}};
}

inline Hyperplane hyperplane_from_json(const json& j) {
    return {vecq_from_json(j["normal"]), parse_rational(j["offset"].get<std::string>())};
}

inline json polyhedron_to_json(const Polyhedron& q) {
    json hs = json::array();
    for (const auto& h : q.halfspaces)
        hs.push_back({{"plane", hyperplane_to_json(h.plane)}, {"side", h.side}});
    json vs = json::array();
    for (const auto& v : q.vertices) vs.push_back(vecq_to_json(v));
    return {{"halfspaces", hs}, {"vertices", vs}};
}

inline Polyhedron polyhedron_from_json(const json& j) {
    Polyhedron q;
    for (const auto& h : j["halfspaces"])
        q.halfspaces.push_back({hyperplane_from_json(h["plane"]), h["side"].get<int>()});
    for (const auto& v : j["vertices"]) q.vertices.push_back(vecq_from_json(v));
    return q;
}

inline json spatial_terms_to_json(const std::vector<SpatialGreensTerm>& terms) {
    json a = json::array();
    for (const auto& t : terms)
        a.push_back({{"c", to_string(t.coeff)},
                     {"cols", t.support_cols},
                     {"exponents", t.exponents}});
    return a;
}

inline std::vector<SpatialGreensTerm> spatial_terms_from_json(const json& a, const RatMatrix& xi) {
    std::vector<SpatialGreensTerm> terms;
    for (const auto& t : a) {
        SpatialGreensTerm term;
        term.coeff = parse_rational(t["c"].get<std::string>());
        term.support_cols = t["cols"].get<std::vector<std::size_t>>();
        term.exponents = t["exponents"].get<std::vector<int>>();
        term.xi_alpha = xi.select_columns(term.support_cols);
        term.inv = inverse(term.xi_alpha);
        terms.push_back(std::move(term));
    }
    return terms;
}

// ---- whole PP-form ----

inline json ppform_to_json(const PPForm& pp) {
    json regions = json::array();
    for (const auto& [region, poly] : pp.regions) {
        json r = polyhedron_to_json(region.polyhedron);
        r["center"] = vecq_to_json(region.center);
        r["poly"] = poly_to_json(poly);
        regions.push_back(r);
    }
    json planes = json::array();
    for (const auto& h : pp.planes) planes.push_back(hyperplane_to_json(h));
    return {{"xi", xi_spec_to_json(pp.xi, pp.centered)},
            {"difference_support", shift_atoms_to_json(pp.atoms)},
            {"spatial_terms", spatial_terms_to_json(pp.terms)},
            {"support", polyhedron_to_json(pp.support)},
            {"knot_planes", planes},
            {"regions", regions}};
}

inline PPForm ppform_from_json(const json& j) {
    PPForm pp;
    auto spec = parse_xi_spec(j["xi"]);
    pp.xi = spec.xi;
    pp.centered = spec.centered;
    pp.atoms = shift_atoms_from_json(j["difference_support"]);
    pp.terms = spatial_terms_from_json(j["spatial_terms"], pp.xi);
    pp.support = polyhedron_from_json(j["support"]);
    for (const auto& h : j["knot_planes"]) pp.planes.push_back(hyperplane_from_json(h));
    for (const auto& r : j["regions"]) {
        Region region{polyhedron_from_json(r), vecq_from_json(r["center"])};
        MultiPoly poly = poly_from_json(r["poly"], pp.xi.rows());
        pp.regions.emplace_back(std::move(region), std::move(poly));
    }
    return pp;
}

// ---- BSP tree ----

inline json bsp_node_to_json(const BspNode* node) {
    if (node->is_leaf())
        return {{"region_id", node->region_id},
                {"center", vecq_to_json(node->center)},
                {"poly", poly_to_json(node->poly)}};
    return {{"plane", hyperplane_to_json(node->plane)},
            {"left", bsp_node_to_json(node->left.get())},
            {"right", bsp_node_to_json(node->right.get())}};
}

inline std::unique_ptr<BspNode> bsp_node_from_json(const json& j, std::size_t num_vars) {
    auto node = std::make_unique<BspNode>();
    if (j.contains("plane")) {
        node->plane = hyperplane_from_json(j["plane"]);
        node->normal_d = to_double(node->plane.normal);
        node->offset_d = to_double(node->plane.offset);
        node->left = bsp_node_from_json(j["left"], num_vars);
        node->right = bsp_node_from_json(j["right"], num_vars);
    } else {
        node->region_id = j["region_id"].get<std::size_t>();
        node->center = vecq_from_json(j["center"]);
        node->poly = poly_from_json(j["poly"], num_vars);
    }
    return node;
}

inline json bsp_to_json(const BspTree& tree) {
    return {{"xi", xi_spec_to_json(tree.xi, tree.centered)},
            {"support", polyhedron_to_json(tree.support)},
            {"tree", bsp_node_to_json(tree.root.get())}};
}

inline BspTree bsp_from_json(const json& j) {
    BspTree tree;
    auto spec = parse_xi_spec(j["xi"]);
    tree.xi = spec.xi;
    tree.centered = spec.centered;
    tree.support = polyhedron_from_json(j["support"]);
    tree.root = bsp_node_from_json(j["tree"], tree.xi.rows());
    std::vector<BspNode*> leaves;
    detail::collect_leaves(tree.root.get(), leaves);
    tree.leaf_count = leaves.size();
    tree.cache_doubles();
    return tree;
}

}  // namespace boxpp
