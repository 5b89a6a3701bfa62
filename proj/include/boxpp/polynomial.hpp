#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "boxpp/ratmatrix.hpp"

namespace boxpp {

// Sparse multivariate polynomial over Q. Terms map an exponent vector to a
// nonzero coefficient; the map keeps one entry per exponent vector, so the
// representation is canonical and comparison is plain equality.
class MultiPoly {
public:
    using Exps = std::vector<unsigned>;

    MultiPoly() = default;
    explicit MultiPoly(std::size_t num_vars) : nvars_(num_vars) {}

    static MultiPoly constant(std::size_t num_vars, const Rational& c) {
        MultiPoly p(num_vars);
        p.add_term(Exps(num_vars, 0), c);
        return p;
    }

    static MultiPoly variable(std::size_t num_vars, std::size_t i) {
        MultiPoly p(num_vars);
        Exps e(num_vars, 0);
        e[i] = 1;
        p.add_term(e, 1);
        return p;
    }

    // c0 + sum_i c_i x_i
    static MultiPoly linear(const VecQ& coeffs, const Rational& c0) {
        MultiPoly p(coeffs.size());
        p.add_term(Exps(coeffs.size(), 0), c0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            Exps e(coeffs.size(), 0);
            e[i] = 1;
            p.add_term(e, coeffs[i]);
        }
        return p;
    }

    std::size_t num_vars() const { return nvars_; }
    const std::map<Exps, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exps& e, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else if ((it->second += c) == 0) {
            terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    MultiPoly& operator-=(const MultiPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    MultiPoly operator*(const MultiPoly& o) const {
        MultiPoly r(nvars_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) {
                Exps e(nvars_);
                for (std::size_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    MultiPoly& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }

    MultiPoly pow(unsigned k) const {
        MultiPoly r = constant(nvars_, 1);
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    bool operator==(const MultiPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) {
            unsigned t = 0;
            for (unsigned x : e) t += x;
            d = std::max(d, t);
        }
        return d;
    }

    Rational eval(const VecQ& x) const {
        Rational total = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
            total += t;
        }
        return total;
    }

    double eval(const std::vector<double>& x) const {
        double total = 0;
        for (const auto& [e, c] : terms_) {
            double t = to_double(c);
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
            total += t;
        }
        return total;
    }

    // substitute x -> A x + b, expanded and collected
    MultiPoly compose_affine(const RatMatrix& a, const VecQ& b) const {
        std::vector<MultiPoly> subs;
        subs.reserve(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) subs.push_back(MultiPoly::linear(a.row(i), b[i]));
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            MultiPoly t = constant(nvars_, c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i] > 0) t = t * subs[i].pow(e[i]);
            r += t;
        }
        return r;
    }

    // variable names x, y, z for up to three variables, x1.. beyond
    std::string str() const {
        if (terms_.empty()) return "0";
        // highest total degree first, then lexicographic exponents
        std::vector<std::pair<Exps, Rational>> ts(terms_.begin(), terms_.end());
        std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
            unsigned da = 0, db = 0;
            for (unsigned x : a.first) da += x;
            for (unsigned x : b.first) db += x;
            if (da != db) return da > db;
            return a.first > b.first;
        });
        std::string out;
        for (const auto& [e, c] : ts) {
            Rational a = abs_rational(c);
            if (out.empty()) {
                if (c < 0) out += "-";
            } else {
                out += c < 0 ? " - " : " + ";
            }
            bool has_var = false;
            for (unsigned x : e) has_var |= x > 0;
            if (a != 1 || !has_var) {
                out += to_string(a);
                if (has_var) out += "*";
            }
            bool first = true;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                if (!first) out += "*";
                first = false;
                out += var_name(i);
                if (e[i] > 1) out += "^" + std::to_string(e[i]);
            }
        }
        return out;
    }

    std::string var_name(std::size_t i) const {
        static const char* xyz[] = {"x", "y", "z"};
        if (nvars_ <= 3) return xyz[i];
        return "x" + std::to_string(i + 1);
    }

private:
    std::size_t nvars_ = 0;
    std::map<Exps, Rational> terms_;
};

// Exact integral of p over the simplex with the given s+1 vertices.
// Maps the standard simplex onto it and uses
//   int_std u^beta du = prod beta_i! / (s + sum beta_i)!
inline Rational integrate_over_simplex(const MultiPoly& p, const std::vector<VecQ>& verts) {
    const std::size_t s = p.num_vars();
    if (verts.size() != s + 1) throw Error("integrate_over_simplex: need s+1 vertices");
    RatMatrix jac(s, s);
    for (std::size_t j = 0; j + 1 < verts.size(); ++j)
        for (std::size_t i = 0; i < s; ++i) jac.at(i, j) = verts[j + 1][i] - verts[0][i];
    Rational jdet = abs_rational(det(jac));
    if (jdet == 0) return 0;
    MultiPoly q = p.compose_affine(jac, verts[0]);
    Rational total = 0;
    for (const auto& [e, c] : q.terms()) {
        unsigned dsum = 0;
        Rational f = c;
        for (unsigned x : e) {
            dsum += x;
            f *= Rational(factorial(x));
        }
        total += f / Rational(factorial(static_cast<unsigned>(s) + dsum));
    }
    return total * jdet;
}

}  // namespace boxpp
