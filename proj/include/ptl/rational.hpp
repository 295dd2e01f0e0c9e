#pragma once

#include <compare>
#include <string>

#include "ptl/numeric.hpp"

namespace ptl {

/// Exact rational with 128-bit numerator and denominator, always in lowest
/// terms with a positive denominator. Arithmetic throws OverflowError rather
/// than losing precision.
class Rational {
public:
    Rational() = default;
    Rational(i128 num, i128 den = 1);  // NOLINT: integers convert implicitly

    i128 num() const { return num_; }
    i128 den() const { return den_; }

    double to_double() const;
    std::string to_string() const;  // "p/q", or "p" when q = 1

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    i128 num_ = 0;
    i128 den_ = 1;
};

}  // namespace ptl
