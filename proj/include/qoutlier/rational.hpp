#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "qoutlier/errors.hpp"

namespace qoutlier {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^e as an exact rational, e may be negative.
inline Rational pow2(long e) {
    if (e >= 0) {
        return Rational(BigInt(1) << e, 1);
    }
    return Rational(1, BigInt(1) << (-e));
}

// Largest e with 2^e <= q. Requires q > 0.
inline long floor_log2(const Rational& q) {
    if (q <= 0) {
        throw DomainError("floor_log2: argument must be positive");
    }
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    long e = static_cast<long>(boost::multiprecision::msb(num)) -
             static_cast<long>(boost::multiprecision::msb(den));
    // candidate can be off by one either way
    auto le_pow2 = [&](long k) {
        // 2^k <= num/den ?
        return k >= 0 ? (den << k) <= num : den <= (num << (-k));
    };
    while (!le_pow2(e)) --e;
    while (le_pow2(e + 1)) ++e;
    return e;
}

// Smallest e with 2^e >= q. Requires q > 0.
inline long ceil_log2(const Rational& q) {
    const long f = floor_log2(q);
    return pow2(f) == q ? f : f + 1;
}

inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(s), 1);
        }
        const BigInt num(s.substr(0, slash));
        const BigInt den(s.substr(slash + 1));
        if (den == 0) throw IoError("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw IoError("cannot parse rational: " + s);
    }
}

inline std::string rational_to_string(const Rational& q) {
    return boost::multiprecision::numerator(q).str() + "/" +
           boost::multiprecision::denominator(q).str();
}

} // namespace qoutlier
