#pragma once

/// @file hillvar/hill_coeffs.hpp
/// @brief Exact coefficients a_{j,sigma} of the variational orbit, built order
/// by order in lambda.
///
/// The deviation series are
///   p = sum_j lambda^j sum_sigma a_{j,sigma} E^sigma,   q = p with sigma -> -sigma,
/// with E = exp(2 i tau). For each order r the pair (a_{r,sigma}, a_{r,-sigma})
/// solves
///   [4 sigma^2 + 4(1+m) sigma + 3l/2] a_{r,sigma} + (3l/2) a_{r,-sigma} + A_{r,sigma} = 0
/// where the forcing A_r collects everything of order below r.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hillvar/exactnum.hpp"
#include "hillvar/series.hpp"

namespace hillvar {

/// l = 1 + 2m + 3m^2/2.
Rational l_of(const Rational& m);

struct ModelParams {
    Rational m;
    Rational l;
    Rational lambda;
    Rational a{1};
    /// k = a^3 l; reported, never used in evaluation.
    Rational k;

    /// lambda defaults to m^2 (the physical value) when not given.
    static ModelParams make(const Rational& m);
    static ModelParams make(const Rational& m, const Rational& lambda, const Rational& a = Rational(1));
};

class CoeffTable {
public:
    CoeffTable(Rational m, std::vector<FourierSlice> orders);

    const Rational& m() const { return m_; }
    const Rational& l() const { return l_; }
    int J() const { return static_cast<int>(orders_.size()); }

    /// a_{j,sigma}; zero outside the triangle.
    Rational at(int j, int sigma) const;
    /// The order-j slice (1 <= j <= J).
    const FourierSlice& order(int j) const;

    /// p and q as graded series through grade J (grade 0 is zero).
    GradedSeries p_series() const;
    GradedSeries q_series() const;

    /// Copy with one entry replaced; used to exercise the residual checks.
    CoeffTable with_entry(int j, int sigma, const Rational& v) const;
    /// The first J orders only.
    CoeffTable truncated(int J) const;

private:
    Rational m_;
    Rational l_;
    std::vector<FourierSlice> orders_;
};

struct FirstOrder {
    Rational a11;   ///< a_{1,1}
    Rational a1m1;  ///< a_{1,-1}
};

/// Closed forms of the order-1 coefficients.
FirstOrder first_order(const Rational& m);

/// The order-1 forcing {sigma=-1: -3/2, sigma=1: 0}.
FourierSlice forcing_seed();

/// A_r = (3/2) q_{r-1} E^-1 + l P_r, assembled from orders 1..r-1 of the table.
/// r = 1 returns the seed. Throws if the table stops before r-1.
FourierSlice forcing_order(const CoeffTable& table, int r);

/// Solves the order-r system for a given forcing slice.
FourierSlice solve_order(const FourierSlice& forcing, const Rational& m, int r);

/// Full table through order J >= 1.
CoeffTable build_table(const Rational& m, int J);

struct Order2 {
    Rational a20;
    Rational a22;
    Rational a2m2;
};

/// Order-2 coefficients from Hill's brackets and the order-1 values.
Order2 closed_form_order2(const Rational& m);

/// Hill's [j, s]. Throws for j = 0.
Rational hill_bracket(int j, int s, const Rational& m);
/// [j] / m^2.
Rational hill_bracket_sq(int j, const Rational& m);
/// (j) / m^2.
Rational hill_bracket_rd(int j, const Rational& m);

/// Fourier coefficients a_0 and a_{+-sigma} of Hill's series, keyed by the
/// signed index, for orbit scale a. Sums run through the table order.
std::map<int, Rational> fourier_coefficients(const CoeffTable& table, const Rational& lambda,
                                             const Rational& a = Rational(1));

struct OdeResidual {
    GradedSeries p_equation;
    GradedSeries q_equation;
    /// Highest grade g with both residuals zero in grades 0..g.
    int zero_through = -1;
};

/// Substitutes the truncated p and q into the two second-order equations
/// (with the inverse-distance factors expanded in lambda) and returns the
/// residuals through grade J.
OdeResidual ode_residual(const CoeffTable& table, int J);

/// Number of (r, sigma) entries for which the order-r linear system fails,
/// with each forcing assembled independently from the table. Zero means
/// every entry is consistent.
int defining_system_violations(const CoeffTable& table);

enum class DeterminantStatus { zero, nonzero, indeterminate };

struct PeriodicityDeterminant {
    RationalInterval value;
    RationalInterval chi;
    DeterminantStatus status = DeterminantStatus::indeterminate;
};

/// Enclosure of -16 pi (1+m) chi [chi + 2(1+m)]^2 sin^2(pi chi) with
/// chi = sqrt(1 + 2m - m^2/2). Throws NumericError for a negative radicand.
PeriodicityDeterminant periodicity_determinant(const Rational& m, const Rational& tol);

/// Table export. JSON: {"m": "num/den", "J": int, "entries": [{"j", "sigma", "value"}]}.
std::string table_to_json(const CoeffTable& table);
/// CSV with header j,sigma,value.
std::string table_to_csv(const CoeffTable& table);

}  // namespace hillvar
