#pragma once

/// @file hillvar/polynomial.hpp
/// @brief Dense univariate polynomials over the rationals with Sturm
/// sequences for exact root counting.

#include <initializer_list>
#include <vector>

#include "hillvar/exactnum.hpp"

namespace hillvar {

class Polynomial {
public:
    Polynomial() = default;
    /// Coefficients in ascending order of degree.
    explicit Polynomial(std::vector<Rational> coeffs);
    Polynomial(std::initializer_list<Rational> coeffs) : Polynomial(std::vector<Rational>(coeffs)) {}

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    Rational coeff(int k) const;
    const std::vector<Rational>& coefficients() const { return c_; }

    Rational eval(const Rational& x) const;
    Polynomial derivative() const;

    /// Remainder of division by a nonzero divisor.
    Polynomial mod(const Polynomial& divisor) const;
    /// Quotient when the division is exact; throws otherwise.
    Polynomial divided_exactly(const Polynomial& divisor) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Rational& k);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;

    std::vector<Rational> c_;
};

/// p, p', then negated remainders until a constant.
std::vector<Polynomial> sturm_chain(const Polynomial& p);

/// Sign changes of the chain evaluated at x, zeros skipped.
int sign_variations(const std::vector<Polynomial>& chain, const Rational& x);

/// Distinct real roots of p in (a, b], a < b, for p(a) != 0.
int sturm_count(const Polynomial& p, const Rational& a, const Rational& b);

}  // namespace hillvar
