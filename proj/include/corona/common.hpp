#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corona {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using VertexId = std::uint32_t;

/// A caller-visible contract was violated (bad argument, odd strength, ...).
class precondition_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A closed form or recursion disagreed with itself (inexact division,
/// multiplicity sum mismatch). Signals a formula or implementation bug.
class consistency_error : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Argument outside the domain where a closed form is defined.
class domain_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Size guard on a dense or exact oracle was exceeded.
class guard_error : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Iterative numerical method failed to converge or hit a singular system.
class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class overflow_error : public std::overflow_error {
  public:
    using std::overflow_error::overflow_error;
};

inline u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("u64 addition overflow");
    return r;
}

inline u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("u64 multiplication overflow");
    return r;
}

inline u64 checked_pow(u64 base, u64 exp) {
    u64 r = 1;
    for (u64 i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

inline u128 checked_mul(u128 a, u128 b) {
    if (a != 0 && b > std::numeric_limits<u128>::max() / a)
        throw overflow_error("u128 multiplication overflow");
    return a * b;
}

inline u64 narrow(u128 v) {
    if (v > std::numeric_limits<u64>::max()) throw overflow_error("value exceeds 64 bits");
    return static_cast<u64>(v);
}

/// num / den, throwing consistency_error unless the division is exact.
inline u64 exact_div(u128 num, u128 den, const char* what) {
    if (den == 0 || num % den != 0)
        throw consistency_error(std::string("inexact division in ") + what);
    return narrow(num / den);
}

/// Non-negative rational in lowest terms. Enough arithmetic for exact
/// comparisons of clustering coefficients and distribution masses.
struct Fraction {
    u64 num = 0;
    u64 den = 1;

    Fraction() = default;
    Fraction(u64 n, u64 d) : num(n), den(d) {
        if (d == 0) throw domain_error("fraction with zero denominator");
        const u64 g = std::gcd(n, d);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    [[nodiscard]] double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Fraction& a, const Fraction& b) {
        return static_cast<u128>(a.num) * b.den < static_cast<u128>(b.num) * a.den;
    }
    friend std::ostream& operator<<(std::ostream& os, const Fraction& f) {
        return os << f.num << '/' << f.den;
    }
};

}  // namespace corona
