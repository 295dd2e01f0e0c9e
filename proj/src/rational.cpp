#include "ptl/rational.hpp"

#include <algorithm>

#include "ptl/error.hpp"

namespace ptl {

std::string to_string(i128 v) {
    if (v == 0) return "0";
    const bool negative = v < 0;
    // Work in the unsigned domain so the minimum value does not overflow on negation.
    u128 u = negative ? u128(0) - static_cast<u128>(v) : static_cast<u128>(v);
    std::string digits;
    while (u) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

namespace {

i128 mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("rational arithmetic overflows 128 bits");
    return r;
}

i128 add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("rational arithmetic overflows 128 bits");
    return r;
}

}  // namespace

Rational::Rational(i128 num, i128 den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = mul(num, -1);
        den = mul(den, -1);
    }
    const i128 g = gcd_i128(num, den);
    num_ = g > 1 ? num / g : num;
    den_ = g > 1 ? den / g : den;
}

double Rational::to_double() const {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rational::to_string() const {
    if (den_ == 1) return ptl::to_string(num_);
    return ptl::to_string(num_) + "/" + ptl::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    const i128 g = gcd_i128(a.den_, b.den_);
    const i128 da = a.den_ / g;
    const i128 db = b.den_ / g;
    return Rational(add(mul(a.num_, db), mul(b.num_, da)), mul(a.den_, db));
}

Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(mul(b.num_, -1), b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first so intermediate products stay as small as possible.
    const i128 g1 = gcd_i128(a.num_, b.den_);
    const i128 g2 = gcd_i128(b.num_, a.den_);
    const i128 an = g1 ? a.num_ / g1 : a.num_;
    const i128 bd = g1 ? b.den_ / g1 : b.den_;
    const i128 bn = g2 ? b.num_ / g2 : b.num_;
    const i128 ad = g2 ? a.den_ / g2 : a.den_;
    return Rational(mul(an, bn), mul(ad, bd));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return mul(a.num_, b.den_) <=> mul(b.num_, a.den_);
}

}  // namespace ptl
