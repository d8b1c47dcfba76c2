#include "sandnet/rational.hpp"

#include "sandnet/error.hpp"

#include <cstdlib>
#include <limits>

namespace sandnet {

std::string Rational::decimal(int digits) const {
    if (den <= 0) fail(ErrorCode::ValidationError, "rational with nonpositive denominator");
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;

    const bool negative = num < 0;
    const std::uint64_t mag = negative ? -static_cast<std::uint64_t>(num) : num;
    const __int128 scaled = static_cast<__int128>(mag) * scale;
    std::uint64_t q = static_cast<std::uint64_t>(scaled / den);
    const std::uint64_t r = static_cast<std::uint64_t>(scaled % den);
    if (2 * r >= static_cast<std::uint64_t>(den)) ++q; // half away from zero

    std::string out = negative && q != 0 ? "-" : "";
    out += std::to_string(q / scale);
    if (digits > 0) {
        std::string frac = std::to_string(q % scale);
        out += "." + std::string(digits - frac.size(), '0') + frac;
    }
    return out;
}

Rational subtract(const Rational& a, const Rational& b) {
    const __int128 num = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
    const __int128 den = static_cast<__int128>(a.den) * b.den;
    const std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    const std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi)
        fail(ErrorCode::ValidationError, "rational difference overflows 64 bits");
    return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)}.reduced();
}

} // namespace sandnet
