#pragma once

/// @file hillvar/majorant_cert.hpp
/// @brief Convergence certificates for the lambda series via a termwise
/// majorant.
///
/// Replacing every signed coefficient by an upper bound of its modulus turns
/// the order recursion into one whose row sums Z_r solve
///   z = eps (1 + z) + h phi(z),   phi(z) = (3 - 2z) z^2 / (1 - z)^2,
/// with the reduced parameters
///   eps = 3(22 + 20m + 9m^2) lambda / (8(6 - 4m + m^2)),
///   h   = (22 + 20m + 9m^2) l / (4(6 - 4m + m^2)).
/// The series converge when this equation has a root in [0, 1).

#include <optional>
#include <string>
#include <vector>

#include "hillvar/exactnum.hpp"
#include "hillvar/hill_coeffs.hpp"
#include "hillvar/series.hpp"

namespace hillvar {

struct ConvergenceParams {
    Rational m;
    Rational lambda;
    Rational epsilon;
    Rational h;

    /// Parameters given directly by (eps, h); m and lambda are left at zero.
    static ConvergenceParams reduced(const Rational& epsilon, const Rational& h);
};

/// Exact eps and h for (m, lambda). Throws for lambda < 0.
ConvergenceParams reduce_params(const Rational& m, const Rational& lambda);

enum class Condition { sufficient, quadratic, exact, complex_disc };
enum class Verdict { pass, fail, indeterminate };

std::string to_string(Condition c);
std::string to_string(Verdict v);

struct Certificate {
    Condition condition = Condition::exact;
    Verdict verdict = Verdict::indeterminate;
    /// Enclosure of the slack; positive means room to spare.
    RationalInterval margin;
    ConvergenceParams inputs;

    bool passed() const { return verdict == Verdict::pass; }
};

/// JSON object with condition, verdict, margin_lo, margin_hi, m, lambda, epsilon, h.
std::string certificate_to_json(const Certificate& c);

/// eps <= 1 / (6(1 + 2h)), exact.
Certificate sufficient_check(const ConvergenceParams& p);

struct QuadraticMajorant {
    /// Smallest root of the quadratic majorant, present when the check passes.
    std::optional<RationalInterval> root;
    Certificate cert;
};

/// Passes iff 9 - 6(7 + 18h) eps + 49 eps^2 >= 0 and 49 eps <= 3(7 + 18h).
/// The root is [3 + eps - sqrt(disc)] / (2(4 + 9h - 4 eps)).
QuadraticMajorant quadratic_majorant(const ConvergenceParams& p, const Rational& tol);

/// eps <= (2 - w - w^2) / (4 + w + w^2) with w = (2h / (1 - eps + 2h))^(1/3).
/// Enclosures are refined until the margin separates from zero or the
/// refinement cap is hit (then indeterminate). Throws for eps >= 1 or eps < 0.
Certificate exact_condition(const ConvergenceParams& p, const Rational& tol, int max_refinements = 8);

/// Majorant coefficients through order J.
class MajorantTable {
public:
    MajorantTable(Rational m, std::vector<FourierSlice> orders);

    const Rational& m() const { return m_; }
    int J() const { return static_cast<int>(orders_.size()); }
    Rational at(int r, int sigma) const;
    const FourierSlice& order(int r) const;
    /// sum over sigma of the order-r entries.
    Rational row_sum(int r) const;

private:
    Rational m_;
    std::vector<FourierSlice> orders_;
};

/// Majorant recursion for modulus m (or a disc radius M) through order J.
/// Throws for m <= 0 or J < 1.
MajorantTable majorant_table(const Rational& m, int J);

/// Power series in t of the root of z = f(t) + c t z + h phi(z) with f(0) = 0,
/// through t^n.
PowerSeries implicit_root_series(const PowerSeries& forcing, const Rational& c, const Rational& h, int n);

/// Row sums of the majorant as a power series in lambda: the root of
/// z = eps(1 + z) + h phi(z) with eps = (eps / lambda) t, through t^n.
PowerSeries majorant_series(const Rational& m, int n);

/// Smallest root in [0, 1) of z = eps(1 + z) + h phi(z), width <= tol.
/// Requires a certified exact condition; throws NumericError otherwise.
RationalInterval majorant_root(const ConvergenceParams& p, const Rational& tol);

/// Number of distinct roots of z = eps(1 + z) + h phi(z) in the open
/// interval (0, 1), by a Sturm sequence on the cleared cubic.
int roots_in_unit_interval(const ConvergenceParams& p);

/// Bracket [lo, hi] with m = lo certified convergent (lambda = m^2) and
/// m = hi certified not, width <= tol. Searches inside [1/7, 1/6].
RationalInterval critical_m(const Rational& tol);

/// Convergence for every complex m with |m| <= M: needs (1 - M)^2 >= 1/3 and
/// the exact condition at (M, lambda).
Certificate complex_disc_certify(const Rational& M, const Rational& lambda, const Rational& tol = pow10_neg(12));

/// min over complex |x| <= M of |a - 2bx + cx^2|, which equals
/// a - 2bM + cM^2 when a, b, c > 0, ac > b^2 and M does not exceed the
/// smaller root of x^2/a - 2x/b + 1/c. Returns nullopt when these do not hold.
std::optional<Rational> quadratic_modulus_floor(const Rational& a, const Rational& b, const Rational& c,
                                                const Rational& M);

}  // namespace hillvar
