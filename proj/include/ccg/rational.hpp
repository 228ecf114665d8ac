// Exact integer and rational arithmetic used throughout the library.
// No floating point appears anywhere; comparisons must be decidable exactly.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Domain errors (bad arguments, kind mismatches, unsupported inputs).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Errors while reading text input; carries a 1-based position.
struct parse_error : error {
    int line;
    int column;
    parse_error(int line_, int column_, const std::string& reason)
        : error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) +
                ": " + reason),
          line(line_),
          column(column_) {}
};

inline std::string int_str(const Int& n) { return n.str(); }

/// Canonical rational rendering: "p" when the denominator is 1, else "p/q" in lowest terms.
inline std::string rat_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline std::optional<Int> try_parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) return std::nullopt;
    Int value = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        value = value * 10 + (s[i] - '0');
    }
    return neg ? Int(-value) : value;
}

inline std::optional<Rat> try_parse_rat(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        auto n = try_parse_int(s);
        if (!n) return std::nullopt;
        return Rat(*n);
    }
    auto num = try_parse_int(s.substr(0, slash));
    auto den = try_parse_int(s.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rat(*num, *den);
}

inline Int parse_int(std::string_view s) {
    auto v = try_parse_int(s);
    if (!v) throw error("invalid integer literal '" + std::string(s) + "'");
    return *v;
}

inline Rat parse_rat(std::string_view s) {
    auto v = try_parse_rat(s);
    if (!v) throw error("invalid rational literal '" + std::string(s) + "'");
    return *v;
}

/// Floor of a rational as an integer.
inline Int rat_floor(const Rat& r) {
    Int q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

/// Euclidean remainder in [0, m) for m > 0.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

/// Floor division for m > 0.
inline Int div_floor(const Int& a, const Int& m) { return (a - mod_floor(a, m)) / m; }

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

/// gcd of rationals: the positive generator of the subgroup of (Q,+) generated by a and b.
/// gcd(p1/q1, p2/q2) = gcd(p1*q2, p2*q1) / (q1*q2).
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return b < 0 ? Rat(-b) : b;
    if (b == 0) return a < 0 ? Rat(-a) : a;
    Int q1 = denominator(a), q2 = denominator(b);
    Int g = int_gcd(numerator(a) * q2, numerator(b) * q1);
    if (g < 0) g = -g;
    return Rat(g, q1 * q2);
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Int factorial(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace ccg
