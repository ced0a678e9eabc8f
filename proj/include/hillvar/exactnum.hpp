#pragma once

/// @file hillvar/exactnum.hpp
/// @brief Exact rationals, rational enclosures of irrational reals, and
/// sign-tagged decimal rendering.
///
/// Every quantity the library certifies is either an exact Rational or a
/// RationalInterval whose endpoints are exact. Nothing here touches binary
/// floating point except the explicit `to_double` used for diagnostics.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hillvar {

/// Raised for malformed numeric text and violated numeric preconditions.
class NumericError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}
    Rational(int v) : v_(static_cast<long>(v)) {}
    Rational(long num, long den);
    explicit Rational(mpq_class v);

    static Rational from_integers(const mpz_class& num, const mpz_class& den);

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rational abs() const;
    Rational pow(int e) const;
    /// Largest integer not above this value.
    mpz_class floor() const;

    /// Diagnostics only; certification paths never consume this.
    double to_double() const { return v_.get_d(); }
    /// "num/den", or "num" for integers.
    std::string str() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class v_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

/// 10^-k as an exact rational.
Rational pow10_neg(int k);

/// Parses "123", "-0.0808", "1/7", "1e-4", "2.5E+3" exactly.
/// Decimal text is read as an exact rational over a power of ten.
Rational parse_rational(std::string_view text);

/// Closed interval [lo, hi] with exact rational endpoints.
class RationalInterval {
public:
    RationalInterval() = default;
    RationalInterval(Rational point);  // NOLINT: a point is a degenerate interval
    RationalInterval(Rational lo, Rational hi);

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational mid() const { return (lo_ + hi_) / Rational(2); }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RationalInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool strictly_positive() const { return lo_.sign() > 0; }
    bool strictly_negative() const { return hi_.sign() < 0; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }

    /// Outward rounding of both endpoints onto the grid 2^-bits. Keeps
    /// endpoint sizes bounded in long iterative computations.
    RationalInterval widened_to_grid(unsigned bits) const;

    RationalInterval operator-() const;
    RationalInterval& operator+=(const RationalInterval& o);
    RationalInterval& operator-=(const RationalInterval& o);
    RationalInterval& operator*=(const RationalInterval& o);
    RationalInterval& operator/=(const RationalInterval& o);

    friend RationalInterval operator+(RationalInterval a, const RationalInterval& b) { return a += b; }
    friend RationalInterval operator-(RationalInterval a, const RationalInterval& b) { return a -= b; }
    friend RationalInterval operator*(RationalInterval a, const RationalInterval& b) { return a *= b; }
    friend RationalInterval operator/(RationalInterval a, const RationalInterval& b) { return a /= b; }

    friend bool operator==(const RationalInterval&, const RationalInterval&) = default;

private:
    Rational lo_;
    Rational hi_;
};

std::ostream& operator<<(std::ostream& os, const RationalInterval& x);

RationalInterval hull(const RationalInterval& a, const RationalInterval& b);

/// Rounds r down (toward -inf) / up (toward +inf) onto the grid 2^-bits.
Rational round_down(const Rational& r, unsigned bits);
Rational round_up(const Rational& r, unsigned bits);

/// Enclosure of sqrt over x on a dyadic grid of spacing <= tol, from exact
/// integer roots. Perfect squares come back as exact points. Throws
/// NumericError for x.lo < 0 or tol <= 0.
RationalInterval interval_sqrt(const RationalInterval& x, const Rational& tol);

/// Enclosure of the real cube root over x (odd; negative inputs allowed).
RationalInterval interval_cbrt(const RationalInterval& x, const Rational& tol);

/// Enclosure of pi of width <= tol (Machin's formula with alternating-series
/// remainder bounds).
RationalInterval pi_enclosure(const Rational& tol);

/// Enclosures of sin / cos over an interval argument, width <= tol + 2*width(x).
RationalInterval sin_enclosure(const RationalInterval& x, const Rational& tol);
RationalInterval cos_enclosure(const RationalInterval& x, const Rational& tol);

/// Enclosures of cos(k*pi), sin(k*pi) for rational k. Exact for the values
/// where the result is rational (k a multiple of 1/2 or 1/3).
RationalInterval cos_pi_multiple(const Rational& k, const Rational& tol);
RationalInterval sin_pi_multiple(const Rational& k, const Rational& tol);

enum class DecimalTag { exact, minus, plus };

/// A decimal printed to a fixed number of fractional digits plus a tag giving
/// the sign of |exact| - |printed|: minus means the exact value is smaller in
/// absolute value than what is printed, plus means larger.
struct TaggedDecimal {
    std::string text;
    DecimalTag tag = DecimalTag::exact;

    /// "-", "+" or "=".
    std::string tag_symbol() const;
    /// text followed by "(-)" / "(+)"; exact values carry no suffix.
    std::string str() const;

    friend bool operator==(const TaggedDecimal&, const TaggedDecimal&) = default;
};

std::ostream& operator<<(std::ostream& os, const TaggedDecimal& d);

/// Rounds |x| half-up to `digits` fractional digits, restores the sign, and
/// tags the result. digits must be >= 1.
TaggedDecimal render_tagged(const Rational& x, int digits);

/// Renders an enclosure when both endpoints render identically; nullopt when
/// the enclosure is too wide to decide the printed digits or the tag.
std::optional<TaggedDecimal> render_tagged(const RationalInterval& x, int digits);

/// Exact rational value of the printed decimal text.
Rational parse_decimal_value(const TaggedDecimal& d);

}  // namespace hillvar
