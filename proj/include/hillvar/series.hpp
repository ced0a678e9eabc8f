#pragma once

/// @file hillvar/series.hpp
/// @brief Truncated series in the grading parameter lambda and the
/// oscillation variable E = exp(2 i tau).
///
/// A FourierSlice of order r holds the coefficients of E^sigma for
/// sigma in {-r, -r+2, ..., r}; frequencies are stored in units of 2 tau.
/// A GradedSeries holds one slice per power of lambda, the grade-j slice
/// having order j, so the parity law sigma = j (mod 2) holds by construction.

#include <utility>
#include <vector>

#include "hillvar/exactnum.hpp"

namespace hillvar {

class FourierSlice {
public:
    FourierSlice() : coeffs_(1) {}
    explicit FourierSlice(int order);

    /// The single-term slice c * E^sigma (order |sigma|).
    static FourierSlice monomial(int sigma, Rational c);

    int order() const { return order_; }
    /// Coefficient of E^sigma; zero outside the support.
    Rational at(int sigma) const;
    /// Sets the coefficient of E^sigma. Throws if sigma is outside the
    /// support of this order or has the wrong parity.
    void set(int sigma, Rational v);
    bool in_support(int sigma) const;

    bool is_zero() const;
    /// Same values embedded in a larger order of the same parity.
    FourierSlice padded(int order) const;
    /// Multiplication by E^shift.
    FourierSlice shifted(int shift) const;

    /// Dense coefficients, index (sigma + order) / 2.
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    FourierSlice& operator+=(const FourierSlice& o);
    FourierSlice& operator-=(const FourierSlice& o);
    FourierSlice& operator*=(const Rational& k);

    friend FourierSlice operator+(FourierSlice a, const FourierSlice& b) { return a += b; }
    friend FourierSlice operator-(FourierSlice a, const FourierSlice& b) { return a -= b; }
    friend FourierSlice operator*(FourierSlice a, const Rational& k) { return a *= k; }
    friend FourierSlice operator*(const Rational& k, FourierSlice a) { return a *= k; }

    /// Equality of the represented Laurent polynomials (order padding ignored).
    friend bool operator==(const FourierSlice& a, const FourierSlice& b);

private:
    int order_ = 0;
    std::vector<Rational> coeffs_;
};

/// Convolution of two slices; the result has order a.order() + b.order().
FourierSlice slice_mul(const FourierSlice& a, const FourierSlice& b);

/// sigma -> -sigma (tau -> -tau).
FourierSlice reflect(const FourierSlice& s);

class GradedSeries {
public:
    /// The zero series truncated at grade `truncation`.
    explicit GradedSeries(int truncation = 0);

    int truncation() const { return static_cast<int>(slices_.size()) - 1; }
    /// Grade-j slice (order j). Grades above the truncation read as zero.
    const FourierSlice& grade(int j) const;
    void set_grade(int j, const FourierSlice& s);
    void add_to_grade(int j, const FourierSlice& s);

    /// The series truncated (or zero-extended) to a new truncation.
    GradedSeries truncated(int truncation) const;
    /// Highest grade g such that every grade 0..g is zero; -1 if grade 0 is not.
    int zero_through() const;

    GradedSeries& operator+=(const GradedSeries& o);
    GradedSeries& operator-=(const GradedSeries& o);
    GradedSeries& operator*=(const Rational& k);

    friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
    friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
    friend GradedSeries operator*(GradedSeries a, const Rational& k) { return a *= k; }
    friend GradedSeries operator*(const Rational& k, GradedSeries a) { return a *= k; }

    friend bool operator==(const GradedSeries& a, const GradedSeries& b);

private:
    std::vector<FourierSlice> slices_;
};

/// Product truncated at grade J.
GradedSeries graded_mul(const GradedSeries& a, const GradedSeries& b, int J);

/// (1 - S)^e through grade J. S must have a zero grade-0 slice.
/// Uses the recurrence (1 - S) W' = -e S' W in the grading parameter.
GradedSeries binomial_power(const GradedSeries& s, const Rational& e, int J);

/// Nonlinear remainders of the inverse-distance factors:
///   P = (1-p)^(-1/2) (1-q)^(-3/2) - 1 - p/2 - 3q/2
///   Q = (1-p)^(-3/2) (1-q)^(-1/2) - 1 - 3p/2 - q/2
/// truncated at grade J. Both start at grade 2.
std::pair<GradedSeries, GradedSeries> remainder_series(const GradedSeries& p, const GradedSeries& q, int J);

/// Truncated univariate power series c_0 + c_1 t + ... + c_n t^n.
class PowerSeries {
public:
    explicit PowerSeries(int truncation = 0) : c_(static_cast<std::size_t>(truncation) + 1) {}
    explicit PowerSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {}

    int truncation() const { return static_cast<int>(c_.size()) - 1; }
    Rational at(int k) const { return k >= 0 && k <= truncation() ? c_[static_cast<std::size_t>(k)] : Rational(); }
    void set(int k, Rational v) { c_.at(static_cast<std::size_t>(k)) = std::move(v); }
    const std::vector<Rational>& coefficients() const { return c_; }

    /// Sum of all stored coefficients (the value at t = 1).
    Rational sum() const;

    PowerSeries& operator+=(const PowerSeries& o);
    PowerSeries& operator-=(const PowerSeries& o);
    PowerSeries& operator*=(const Rational& k);

    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator*(PowerSeries a, const Rational& k) { return a *= k; }
    friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

private:
    std::vector<Rational> c_;
};

/// Product truncated at the smaller of the two truncations.
PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b);

/// (3 - 2z) z^2 / (1 - z)^2 = sum_{k>=2} (k+1) z^k composed with z(t),
/// truncated at z's truncation. z must have zero constant term.
PowerSeries cubic_kernel(const PowerSeries& z);

}  // namespace hillvar
