#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace sandnet {

/// Exact rational with a positive denominator. Components stay small
/// (node counts times heights), comparisons widen to 128 bits so the
/// decision boundary is never a floating-point artifact.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational reduced() const {
        const std::int64_t g = std::gcd(num, den);
        return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// Fixed-point rendering, rounding half away from zero.
    std::string decimal(int digits = 1) const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const __int128 lhs = static_cast<__int128>(a.num) * b.den;
        const __int128 rhs = static_cast<__int128>(b.num) * a.den;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

Rational subtract(const Rational& a, const Rational& b);

} // namespace sandnet
