#pragma once

/// @file hillvar/error_bounds.hpp
/// @brief Truncation-error bounds for the lambda series.
///
/// The orders j <= N enter with their exact magnitudes S_j = sum |a_{j,sigma}| lambda^j,
/// orders above N with the majorant. The combined majorant root z solves
///   z = eps' + eps z + h phi(z),  equivalently  z = delta + g phi(z),
/// with delta = eps' / (1 - eps) and g = h / (1 - eps). Its lambda expansion
/// sum l_j lambda^j starts with the exact magnitudes, so z - sum_{j<=n} l_j lambda^j
/// bounds everything beyond order n.

#include <optional>
#include <string>
#include <vector>

#include "hillvar/exactnum.hpp"
#include "hillvar/hill_coeffs.hpp"
#include "hillvar/majorant_cert.hpp"
#include "hillvar/series.hpp"

namespace hillvar {

/// sum_sigma |a_{r,sigma}| lambda^r. Throws for r outside 1..J.
Rational order_magnitude(const CoeffTable& table, int r, const Rational& lambda);

struct RefinedParams {
    int N = 2;
    Rational eps_prime;
    Rational delta;
    Rational g;
    ConvergenceParams base;
    /// eps' as a polynomial in t (lambda = t); coefficient j is per unit lambda^j.
    PowerSeries eps_prime_series;
};

/// Threshold-N parameters. Needs N >= 2, table.J() >= N, eps < 1.
RefinedParams refined_params(const CoeffTable& table, const ConvergenceParams& p, int N);

/// l_j lambda^j for j = 1..n: the lambda expansion of the combined root.
std::vector<Rational> l_series(const CoeffTable& table, const ConvergenceParams& p, int N, int n);

/// (1 + 2g) z^3 - (2 + delta + 3g) z^2 + (1 + 2delta) z - delta, which is
/// (z - delta - g phi(z)) (1 - z)^2.
Rational cleared_cubic(const Rational& delta, const Rational& g, const Rational& z);

struct FixedPointTrace {
    std::vector<Rational> lower;  ///< iterates from 0
    std::vector<Rational> upper;  ///< iterates from (1 + 2delta) / (3(1 + 2g))
};

/// Two-sided monotone iteration z <- delta + g phi(z) for the smallest root.
/// Lower iterates are rounded down and upper iterates up onto a dyadic grid.
/// Throws NumericError if the start bound is not below 1, if the upper start
/// does not map below itself, or if the iteration stalls above tol.
RationalInterval fixed_point_root(const Rational& delta, const Rational& g, const Rational& tol,
                                  FixedPointTrace* trace = nullptr, int max_iterations = 100000);
RationalInterval fixed_point_root(const RefinedParams& r, const Rational& tol, FixedPointTrace* trace = nullptr);

struct ErrorBoundReport {
    int N = 2;
    int n = 0;
    std::vector<Rational> l_terms;
    RationalInterval z;
    /// z - sum_{j<=n} l_terms[j-1].
    RationalInterval bound;
};

ErrorBoundReport truncation_bound(const RationalInterval& z, const std::vector<Rational>& l_terms, int n, int N = 2);

/// One printed quantity of the worked lunar example.
struct ReportEntry {
    std::string key;
    std::string label;
    TaggedDecimal value;
    std::string note;
};

struct WorkedReport {
    Rational m;
    Rational lambda;
    int digits = 10;
    std::vector<ReportEntry> entries;

    const ReportEntry* find(const std::string& key) const;
};

/// Every quantity of the worked example at (m, lambda = m^2) with N = 2:
/// order-1 and order-2 coefficients, eps, eps1, h, l_j, eps', delta, g, the
/// root z (8 digits), the bounds for n = 1, 2, 3 (8 digits), eps2, order-3
/// products and entries, the tail estimate above order 2 and the combined
/// n = 1 bound (8 digits, rounded up), and the first- and second-order
/// approximations of xi and eta (5 digits) with their global error limits.
WorkedReport worked_report(const Rational& m, int digits = 10);

std::string report_to_json(const WorkedReport& r);
std::string report_to_text(const WorkedReport& r);

}  // namespace hillvar
