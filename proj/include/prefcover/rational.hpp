#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace prefcover {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline BigInt rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

// floor(a/b) for exact b > 0
inline BigInt floor_big(const Rational& q) {
    BigInt a = rat_num(q), b = rat_den(q);
    BigInt d = a / b;
    if (a < 0 && d * b != a) --d;
    return d;
}

inline BigInt ceil_big(const Rational& q) {
    BigInt a = rat_num(q), b = rat_den(q);
    BigInt d = a / b;
    if (a > 0 && d * b != a) ++d;
    return d;
}

inline long long ceil_ll(const Rational& q) { return ceil_big(q).convert_to<long long>(); }
inline long long floor_ll(const Rational& q) { return floor_big(q).convert_to<long long>(); }

inline std::string rat_str(const Rational& q) {
    if (rat_den(q) == 1) return rat_num(q).str();
    return rat_num(q).str() + "/" + rat_den(q).str();
}

// Accepts "a/b", "a", or a plain decimal such as "0.25" / "-1.5e-3".
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt a(s.substr(0, slash));
        BigInt b(s.substr(slash + 1));
        if (b == 0) throw std::invalid_argument("rational with zero denominator: " + s);
        return Rational(a, b);
    }
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('E') == std::string::npos) {
        return Rational(BigInt(s));
    }
    // decimal form: mantissa + optional exponent
    std::string body = s;
    long long exp10 = 0;
    auto epos = body.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stoll(body.substr(epos + 1));
        body = body.substr(0, epos);
    }
    auto dot = body.find('.');
    std::string digits = body;
    if (dot != std::string::npos) {
        digits = body.substr(0, dot) + body.substr(dot + 1);
        exp10 -= static_cast<long long>(body.size() - dot - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("bad rational literal: " + s);
    Rational q{BigInt(digits)};
    BigInt ten(10);
    for (long long i = 0; i < (exp10 > 0 ? exp10 : -exp10); ++i) {
        if (exp10 > 0) q *= ten; else q /= ten;
    }
    return q;
}

// Errors carrying the spec'd exit-code semantics through the CLI layer.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace prefcover
