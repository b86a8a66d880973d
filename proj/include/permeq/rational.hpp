#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

#include "permeq/errors.hpp"

namespace permeq {

// Exact arithmetic everywhere a metric identity or probability law is asserted.
// Floating point appears only in Monte Carlo estimates and heuristics.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return static_cast<double>(r); }

// Canonical "p/q" form, denominator always printed so the format is uniform.
inline std::string rat_to_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_pow(const Rat& base, unsigned long exp) {
    Rat acc(1);
    Rat b = base;
    while (exp > 0) {
        if (exp & 1) acc *= b;
        b *= b;
        exp >>= 1;
    }
    return acc;
}

namespace detail {

// Strict base-10 integer. cpp_int's string constructor honors C-style octal
// and hex prefixes, so "025" must never reach it directly.
inline BigInt parse_decimal_int(const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
    if (i == s.size()) throw ParseError("missing digits in '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9')
            throw ParseError("non-digit '" + std::string(1, s[j]) + "' in '" + s + "'");
    std::size_t nz = s.find_first_not_of('0', i);
    BigInt v(nz == std::string::npos ? "0" : s.substr(nz));
    return s[0] == '-' ? BigInt(-v) : v;
}

} // namespace detail

// Accepts "p/q", an integer, or a plain decimal such as "0.05" (read exactly).
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt p = detail::parse_decimal_int(text.substr(0, slash));
            BigInt q = detail::parse_decimal_int(text.substr(slash + 1));
            if (q == 0) throw ParseError("zero denominator in '" + text + "'");
            return Rat(p, q);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rat(detail::parse_decimal_int(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        if (frac_len == 0 || dot == 0 || (dot == 1 && (text[0] == '+' || text[0] == '-')))
            throw ParseError("malformed decimal '" + text + "'");
        BigInt p = detail::parse_decimal_int(digits);
        BigInt q = 1;
        for (std::size_t i = 0; i < frac_len; ++i) q *= 10;
        return Rat(p, q);
    } catch (const std::runtime_error& e) {
        throw ParseError("malformed rational '" + text + "': " + e.what());
    }
}

/// Exact fixed-point decimal rendering (round half away from zero). Used for
/// machine-readable outputs that must be byte-identical across runs.
inline std::string format_fixed(const Rat& r, unsigned places) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    const bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = 1;
    for (unsigned i = 0; i < places; ++i) scale *= 10;
    BigInt q = (num * scale * 2 + den) / (den * 2);
    std::string digits = q.str();
    if (digits.size() < places + 1) digits.insert(0, places + 1 - digits.size(), '0');
    std::string out = neg && q != 0 ? "-" : "";
    out += digits.substr(0, digits.size() - places);
    if (places > 0) {
        out += '.';
        out += digits.substr(digits.size() - places);
    }
    return out;
}

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

inline std::uint64_t factorial_saturating(std::uint64_t n) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f = saturating_mul(f, i);
    return f;
}

} // namespace detail

} // namespace permeq
