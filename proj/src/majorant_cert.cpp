#include "hillvar/majorant_cert.hpp"

#include <stdexcept>

#include "json.hpp"
#include "hillvar/polynomial.hpp"

namespace hillvar {

namespace {

const Rational kThreeHalves(3, 2);

Rational quad_d(const Rational& m) { return Rational(6) - Rational(4) * m + m * m; }
Rational quad_k(const Rational& m) { return Rational(22) + Rational(20) * m + Rational(9) * m * m; }

Verdict verdict_of(const RationalInterval& margin) {
    if (margin.is_point()) return margin.lo().sign() >= 0 ? Verdict::pass : Verdict::fail;
    if (margin.lo().sign() > 0) return Verdict::pass;
    if (margin.hi().sign() < 0) return Verdict::fail;
    return Verdict::indeterminate;
}

// (eps(1+z) - z)(1-z)^2 + h(3-2z)z^2: the fixed-point equation with the
// denominator (1-z)^2 cleared.
Polynomial cleared_majorant(const ConvergenceParams& p) {
    const Polynomial lin({p.epsilon, p.epsilon - Rational(1)});
    const Polynomial one_minus({Rational(1), Rational(-1)});
    const Polynomial kernel({Rational(0), Rational(0), Rational(3) * p.h, Rational(-2) * p.h});
    return lin * one_minus * one_minus + kernel;
}

// (2 - w - w^2) / (4 + w + w^2), decreasing for w >= 0.
Rational exact_bound_at(const Rational& w) {
    return (Rational(2) - w - w * w) / (Rational(4) + w + w * w);
}

}  // namespace

ConvergenceParams ConvergenceParams::reduced(const Rational& epsilon, const Rational& h) {
    ConvergenceParams p;
    p.epsilon = epsilon;
    p.h = h;
    return p;
}

ConvergenceParams reduce_params(const Rational& m, const Rational& lambda) {
    if (lambda.sign() < 0) throw std::invalid_argument("lambda must be nonnegative");
    ConvergenceParams p;
    p.m = m;
    p.lambda = lambda;
    const Rational d = quad_d(m);
    p.epsilon = Rational(3) * quad_k(m) * lambda / (Rational(8) * d);
    p.h = quad_k(m) * l_of(m) / (Rational(4) * d);
    return p;
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::sufficient: return "sufficient";
        case Condition::quadratic: return "quadratic";
        case Condition::exact: return "exact";
        case Condition::complex_disc: return "complex_disc";
    }
    return "unknown";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "unknown";
}

std::string certificate_to_json(const Certificate& c) {
    nlohmann::ordered_json j;
    j["condition"] = to_string(c.condition);
    j["verdict"] = to_string(c.verdict);
    j["margin_lo"] = c.margin.lo().str();
    j["margin_hi"] = c.margin.hi().str();
    j["m"] = c.inputs.m.str();
    j["lambda"] = c.inputs.lambda.str();
    j["epsilon"] = c.inputs.epsilon.str();
    j["h"] = c.inputs.h.str();
    return j.dump(2);
}

Certificate sufficient_check(const ConvergenceParams& p) {
    Certificate c;
    c.condition = Condition::sufficient;
    c.inputs = p;
    c.margin = RationalInterval(Rational(1) / (Rational(6) * (Rational(1) + Rational(2) * p.h)) - p.epsilon);
    c.verdict = verdict_of(c.margin);
    return c;
}

QuadraticMajorant quadratic_majorant(const ConvergenceParams& p, const Rational& tol) {
    const Rational& e = p.epsilon;
    const Rational b = Rational(7) + Rational(18) * p.h;
    const Rational disc = Rational(9) - Rational(6) * b * e + Rational(49) * e * e;
    const bool pass = disc.sign() >= 0 && Rational(49) * e <= Rational(3) * b;

    QuadraticMajorant out;
    out.cert.condition = Condition::quadratic;
    out.cert.inputs = p;
    out.cert.verdict = pass ? Verdict::pass : Verdict::fail;
    // Slack against the threshold 3 / (b + sqrt(b^2 - 49)).
    const RationalInterval root_b = interval_sqrt(RationalInterval(b * b - Rational(49)), tol / Rational(16));
    const RationalInterval threshold = RationalInterval(Rational(3)) / (RationalInterval(b) + root_b);
    out.cert.margin = threshold - RationalInterval(e);
    if (pass) {
        const RationalInterval sd = interval_sqrt(RationalInterval(disc), tol / Rational(4));
        const RationalInterval num = RationalInterval(Rational(3) + e) - sd;
        const Rational den = Rational(2) * (Rational(4) + Rational(9) * p.h - Rational(4) * e);
        out.root = num / RationalInterval(den);
    }
    return out;
}

Certificate exact_condition(const ConvergenceParams& p, const Rational& tol, int max_refinements) {
    if (p.epsilon.sign() < 0 || p.epsilon >= Rational(1))
        throw NumericError("exact condition needs 0 <= eps < 1, got eps = " + p.epsilon.str());
    if (p.h.sign() < 0) throw NumericError("exact condition needs h >= 0");
    Certificate c;
    c.condition = Condition::exact;
    c.inputs = p;
    const Rational x = Rational(2) * p.h / (Rational(1) - p.epsilon + Rational(2) * p.h);
    Rational t = tol;
    for (int k = 0; k <= max_refinements; ++k) {
        const RationalInterval w = interval_cbrt(RationalInterval(x), t);
        // The bound decreases in w.
        c.margin = RationalInterval(exact_bound_at(w.hi()) - p.epsilon, exact_bound_at(w.lo()) - p.epsilon);
        c.verdict = verdict_of(c.margin);
        if (c.verdict != Verdict::indeterminate) return c;
        t = t * pow10_neg(12);
    }
    return c;
}

// ---------------------------------------------------------- MajorantTable

MajorantTable::MajorantTable(Rational m, std::vector<FourierSlice> orders)
    : m_(std::move(m)), orders_(std::move(orders)) {}

Rational MajorantTable::at(int r, int sigma) const {
    if (r < 1 || r > J()) return Rational();
    return orders_[static_cast<std::size_t>(r - 1)].at(sigma);
}

const FourierSlice& MajorantTable::order(int r) const {
    if (r < 1 || r > J()) throw std::out_of_range("majorant order outside the table");
    return orders_[static_cast<std::size_t>(r - 1)];
}

Rational MajorantTable::row_sum(int r) const {
    Rational s;
    for (const auto& c : order(r).coefficients()) s += c;
    return s;
}

MajorantTable majorant_table(const Rational& m, int J) {
    if (m.sign() <= 0) throw std::invalid_argument("majorant needs a positive modulus");
    if (J < 1) throw std::invalid_argument("majorant order must be at least 1");
    const Rational l = l_of(m);
    const Rational c = kThreeHalves * l;
    const Rational diag = Rational(8) + Rational(4) * m + c;
    const Rational den = Rational(2) * quad_d(m);

    std::vector<FourierSlice> orders;
    GradedSeries p(J), q(J);
    for (int r = 1; r <= J; ++r) {
        FourierSlice A(r);
        if (r == 1) {
            A.set(-1, kThreeHalves);
        } else {
            A = q.grade(r - 1).shifted(-1) * kThreeHalves;
            // Grades r and above of p, q are still zero here.
            A += remainder_series(p, q, r).first.grade(r) * l;
        }
        FourierSlice a(r);
        for (int sigma = -r; sigma <= r; sigma += 2) a.set(sigma, (c * A.at(-sigma) + diag * A.at(sigma)) / den);
        p.set_grade(r, a);
        q.set_grade(r, reflect(a));
        orders.push_back(std::move(a));
    }
    return MajorantTable(m, std::move(orders));
}

PowerSeries implicit_root_series(const PowerSeries& forcing, const Rational& c, const Rational& h, int n) {
    if (!forcing.at(0).is_zero()) throw std::invalid_argument("forcing must vanish at t = 0");
    PowerSeries f(n);
    for (int k = 1; k <= n; ++k) f.set(k, forcing.at(k));
    PowerSeries z(n);
    // Each pass fixes one more coefficient.
    for (int pass = 0; pass < n; ++pass) {
        PowerSeries tz(n);
        for (int k = 1; k <= n; ++k) tz.set(k, z.at(k - 1));
        z = f + tz * c + cubic_kernel(z) * h;
    }
    return z;
}

PowerSeries majorant_series(const Rational& m, int n) {
    const ConvergenceParams unit = reduce_params(m, Rational(1));
    PowerSeries f(n);
    if (n >= 1) f.set(1, unit.epsilon);
    return implicit_root_series(f, unit.epsilon, unit.h, n);
}

int roots_in_unit_interval(const ConvergenceParams& p) {
    Polynomial g = cleared_majorant(p);
    if (g.is_zero()) throw NumericError("degenerate majorant equation");
    const Polynomial z({Rational(0), Rational(1)});
    const Polynomial z_minus_1({Rational(-1), Rational(1)});
    while (g.eval(Rational(0)).is_zero()) g = g.divided_exactly(z);
    while (g.eval(Rational(1)).is_zero()) g = g.divided_exactly(z_minus_1);
    return sturm_count(g, Rational(0), Rational(1));
}

RationalInterval majorant_root(const ConvergenceParams& p, const Rational& tol) {
    if (tol.sign() <= 0) throw NumericError("tolerance must be positive");
    if (p.epsilon.is_zero()) return RationalInterval(Rational(0));
    const Certificate cert = exact_condition(p, pow10_neg(20));
    if (!cert.passed()) throw NumericError("majorant root requested without a certified exact condition");
    const Polynomial g = cleared_majorant(p);
    const std::vector<Polynomial> chain = sturm_chain(g);
    // Keep the smallest root in (lo, hi].
    Rational lo(0), hi(1);
    const int v_lo = sign_variations(chain, lo);
    if (v_lo - sign_variations(chain, hi) < 1) throw NumericError("no majorant root in (0, 1)");
    while (hi - lo > tol) {
        const Rational mid = (lo + hi) / Rational(2);
        // No root in (0, lo], so the count from lo stays v_lo.
        if (v_lo - sign_variations(chain, mid) >= 1) hi = mid;
        else lo = mid;
    }
    return {lo, hi};
}

RationalInterval critical_m(const Rational& tol) {
    if (tol.sign() <= 0) throw NumericError("tolerance must be positive");
    const Rational inner = pow10_neg(30);
    auto verdict = [&](const Rational& m) { return exact_condition(reduce_params(m, m * m), inner).verdict; };
    Rational lo(1, 7), hi(1, 6);
    if (verdict(lo) != Verdict::pass || verdict(hi) != Verdict::fail)
        throw NumericError("critical m is not bracketed by 1/7 and 1/6");
    while (hi - lo > tol) {
        const Rational mid = (lo + hi) / Rational(2);
        const Verdict v = verdict(mid);
        if (v == Verdict::indeterminate) throw NumericError("exact condition indeterminate at m = " + mid.str());
        if (v == Verdict::pass) lo = mid;
        else hi = mid;
    }
    return {lo, hi};
}

Certificate complex_disc_certify(const Rational& M, const Rational& lambda, const Rational& tol) {
    if (M.sign() <= 0) throw std::invalid_argument("disc radius must be positive");
    const ConvergenceParams p = reduce_params(M, lambda);
    const Rational slack = (Rational(1) - M) * (Rational(1) - M) - Rational(1, 3);
    Certificate c;
    c.condition = Condition::complex_disc;
    c.inputs = p;
    if (M >= Rational(1) || slack.sign() < 0) {
        c.margin = RationalInterval(slack);
        c.verdict = Verdict::fail;
        return c;
    }
    if (p.epsilon >= Rational(1)) {
        c.margin = RationalInterval(Rational(1) - p.epsilon);
        c.verdict = Verdict::fail;
        return c;
    }
    const Certificate inner = exact_condition(p, tol);
    c.margin = inner.margin;
    c.verdict = inner.verdict;
    return c;
}

std::optional<Rational> quadratic_modulus_floor(const Rational& a, const Rational& b, const Rational& c,
                                                const Rational& M) {
    if (a.sign() <= 0 || b.sign() <= 0 || c.sign() <= 0 || M.sign() < 0) return std::nullopt;
    if (a * c <= b * b) return std::nullopt;
    // Smaller root of x^2/a - 2x/b + 1/c is a/b - a sqrt(1/b^2 - 1/(ac)).
    const Rational gap = a / b - M;
    if (gap.sign() < 0) return std::nullopt;
    if (a * a * (Rational(1) / (b * b) - Rational(1) / (a * c)) > gap * gap) return std::nullopt;
    return a - Rational(2) * b * M + c * M * M;
}

}  // namespace hillvar
