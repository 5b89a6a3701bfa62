#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "boxpp/errors.hpp"

namespace boxpp {

// Arbitrary-precision exact scalars. cpp_rational keeps values canonical:
// gcd(|num|, den) = 1 and den > 0, which is exactly the invariant we need.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using VecQ = std::vector<Rational>;

inline Int num(const Rational& q) { return numerator(q); }
inline Int den(const Rational& q) { return denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Accepts "p", "-p", "p/q". Anything else (notably decimal literals) is
// rejected so no inexact value can sneak into a derivation.
inline Rational parse_rational(std::string_view s) {
    auto bad = [&] { throw ParseError("not a rational literal: '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
    if (digits == 0) bad();
    if (i == s.size()) return Rational(Int(std::string(s)));
    if (s[i] != '/') bad();
    Int n(std::string(s.substr(0, i)));
    std::string_view d = s.substr(i + 1);
    if (d.empty()) bad();
    for (char c : d)
        if (c < '0' || c > '9') bad();
    Int dv{std::string(d)};
    if (dv == 0) bad();
    return Rational(n, dv);
}

inline std::string to_string(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline Int floor_rational(const Rational& q) {
    Int n = num(q), d = den(q);
    Int t = n / d;
    if (n < 0 && t * d != n) --t;
    return t;
}

inline Int ceil_rational(const Rational& q) { return -floor_rational(-q); }

inline Rational abs_rational(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// gcd over Q: largest g > 0 with every value an integer multiple of g.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return abs_rational(b);
    if (b == 0) return abs_rational(a);
    Int l = lcm(den(a), den(b));
    Int na = num(a) * (l / den(a));
    Int nb = num(b) * (l / den(b));
    return Rational(gcd(abs(na), abs(nb)), l);
}

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

// ---- small exact-vector helpers ----

inline Rational dot(const VecQ& a, const VecQ& b) {
    Rational r = 0;
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

inline VecQ vsub(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline VecQ vadd(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline VecQ vscale(const VecQ& a, const Rational& c) {
    VecQ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

inline bool is_zero(const VecQ& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

inline bool lex_less(const VecQ& a, const VecQ& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

struct VecQLess {
    bool operator()(const VecQ& a, const VecQ& b) const { return lex_less(a, b); }
};

inline std::vector<double> to_double(const VecQ& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
    return r;
}

inline std::string to_string(const VecQ& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v[i]);
    }
    return s + ")";
}

}  // namespace boxpp
