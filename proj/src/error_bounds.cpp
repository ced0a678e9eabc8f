#include "hillvar/error_bounds.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hillvar {

namespace {

unsigned grid_bits(const Rational& tol) {
    const mpz_class inv = (tol.denominator() + tol.numerator() - 1) / tol.numerator();
    return static_cast<unsigned>(mpz_sizeinbase(inv.get_mpz_t(), 2)) + 20;
}

// delta + g (3 - 2z) z^2 / (1 - z)^2
Rational fixed_point_map(const Rational& delta, const Rational& g, const Rational& z) {
    const Rational w = Rational(1) - z;
    return delta + g * (Rational(3) - Rational(2) * z) * z * z / (w * w);
}

// Smallest multiple of 10^-digits not below x (x >= 0).
Rational ceil_decimal(const Rational& x, int digits) {
    const Rational scale = pow10_neg(digits);
    const Rational q = x / scale;
    mpz_class c = q.floor();
    if (!q.is_integer()) c += 1;
    return Rational::from_integers(c, mpz_class(1)) * scale;
}

Rational sum_abs(const FourierSlice& s) {
    Rational total;
    for (const Rational& c : s.coefficients()) total += abs(c);
    return total;
}

// eps / lambda, which does not depend on lambda.
Rational unit_epsilon(const ConvergenceParams& p) {
    if (!p.lambda.is_zero()) return p.epsilon / p.lambda;
    return reduce_params(p.m, Rational(1)).epsilon;
}

}  // namespace

Rational order_magnitude(const CoeffTable& table, int r, const Rational& lambda) {
    if (r < 1 || r > table.J()) throw std::out_of_range("order outside the table");
    return sum_abs(table.order(r)) * lambda.pow(r);
}

RefinedParams refined_params(const CoeffTable& table, const ConvergenceParams& p, int N) {
    if (N < 2) throw std::invalid_argument("threshold order N must be at least 2");
    if (table.J() < N) throw std::invalid_argument("table is shorter than the threshold order");
    if (p.epsilon >= Rational(1)) throw NumericError("eps must be below 1");

    PowerSeries z(N);
    for (int j = 1; j <= N; ++j) z.set(j, sum_abs(table.order(j)));
    PowerSeries tz(N);
    for (int j = 1; j <= N; ++j) tz.set(j, z.at(j - 1));
    const PowerSeries lower = tz * unit_epsilon(p) + cubic_kernel(z) * p.h;

    RefinedParams r;
    r.N = N;
    r.base = p;
    r.eps_prime_series = z - lower;
    Rational lp(1);
    for (int j = 1; j <= N; ++j) {
        lp *= p.lambda;
        r.eps_prime += r.eps_prime_series.at(j) * lp;
    }
    const Rational one_minus = Rational(1) - p.epsilon;
    r.delta = r.eps_prime / one_minus;
    r.g = p.h / one_minus;
    return r;
}

std::vector<Rational> l_series(const CoeffTable& table, const ConvergenceParams& p, int N, int n) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    const RefinedParams r = refined_params(table, p, N);
    const PowerSeries root = implicit_root_series(r.eps_prime_series, unit_epsilon(p), p.h, n);
    std::vector<Rational> out;
    Rational lp(1);
    for (int j = 1; j <= n; ++j) {
        lp *= p.lambda;
        out.push_back(root.at(j) * lp);
    }
    return out;
}

Rational cleared_cubic(const Rational& delta, const Rational& g, const Rational& z) {
    const Rational z2 = z * z;
    return (Rational(1) + Rational(2) * g) * z2 * z - (Rational(2) + delta + Rational(3) * g) * z2 +
           (Rational(1) + Rational(2) * delta) * z - delta;
}

RationalInterval fixed_point_root(const Rational& delta, const Rational& g, const Rational& tol,
                                  FixedPointTrace* trace, int max_iterations) {
    if (tol.sign() <= 0) throw NumericError("tolerance must be positive");
    if (delta.sign() < 0 || g.sign() < 0) throw NumericError("delta and g must be nonnegative");
    const Rational start = (Rational(1) + Rational(2) * delta) / (Rational(3) * (Rational(1) + Rational(2) * g));
    if (start >= Rational(1)) throw NumericError("start bound (1 + 2delta) / (3(1 + 2g)) is not below 1");
    if (fixed_point_map(delta, g, start) > start) throw NumericError("no root below the start bound");

    const unsigned bits = grid_bits(tol);
    Rational lo(0), hi = start;
    if (trace) {
        trace->lower = {lo};
        trace->upper = {hi};
    }
    for (int k = 0; hi - lo > tol; ++k) {
        if (k >= max_iterations) throw NumericError("fixed-point iteration did not reach the tolerance");
        const Rational next_lo = max(lo, round_down(fixed_point_map(delta, g, lo), bits));
        const Rational next_hi = min(hi, round_up(fixed_point_map(delta, g, hi), bits));
        if (next_lo > next_hi) throw std::logic_error("fixed-point iterates crossed");
        if (next_lo == lo && next_hi == hi) throw NumericError("fixed-point iteration stalled above the tolerance");
        lo = next_lo;
        hi = next_hi;
        if (trace) {
            trace->lower.push_back(lo);
            trace->upper.push_back(hi);
        }
    }
    if (cleared_cubic(delta, g, lo).sign() > 0 || cleared_cubic(delta, g, hi).sign() < 0)
        throw NumericError("cleared cubic does not change sign across the enclosure");
    return {lo, hi};
}

RationalInterval fixed_point_root(const RefinedParams& r, const Rational& tol, FixedPointTrace* trace) {
    return fixed_point_root(r.delta, r.g, tol, trace);
}

ErrorBoundReport truncation_bound(const RationalInterval& z, const std::vector<Rational>& l_terms, int n, int N) {
    if (n < 0 || static_cast<std::size_t>(n) > l_terms.size()) throw std::invalid_argument("not enough l terms");
    ErrorBoundReport out;
    out.N = N;
    out.n = n;
    out.l_terms.assign(l_terms.begin(), l_terms.begin() + n);
    out.z = z;
    Rational s;
    for (const Rational& t : out.l_terms) s += t;
    out.bound = z - RationalInterval(s);
    return out;
}

const ReportEntry* WorkedReport::find(const std::string& key) const {
    for (const ReportEntry& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

WorkedReport worked_report(const Rational& m, int digits) {
    WorkedReport rep;
    rep.m = m;
    rep.lambda = m * m;
    rep.digits = digits;
    const Rational& lam = rep.lambda;
    const Rational lam2 = lam * lam;
    const Rational lam3 = lam2 * lam;

    const CoeffTable table = build_table(m, 3);
    const ConvergenceParams p = reduce_params(m, lam);
    const RefinedParams r = refined_params(table, p, 2);
    const std::vector<Rational> l = l_series(table, p, 2, 3);
    const RationalInterval z = fixed_point_root(r, pow10_neg(15));

    auto add = [&](const std::string& key, const std::string& label, const Rational& v, int d,
                   const std::string& note = "") {
        rep.entries.push_back({key, label, render_tagged(v, d), note});
    };
    auto add_interval = [&](const std::string& key, const std::string& label, const RationalInterval& v, int d) {
        const std::optional<TaggedDecimal> t = render_tagged(v, d);
        if (!t) throw NumericError("enclosure too wide to render " + key);
        rep.entries.push_back({key, label, *t, ""});
    };

    add("a1m1_lambda", "a_{1,-1} lambda", table.at(1, -1) * lam, digits);
    add("a11_lambda", "a_{1,1} lambda", table.at(1, 1) * lam, digits);
    add("epsilon", "eps", p.epsilon, digits);
    add("a2m2_lambda2", "a_{2,-2} lambda^2", table.at(2, -2) * lam2, digits);
    add("a20_lambda2", "a_{2,0} lambda^2", table.at(2, 0) * lam2, digits);
    add("a22_lambda2", "a_{2,2} lambda^2", table.at(2, 2) * lam2, digits);
    const Rational eps1 = order_magnitude(table, 2, lam);
    add("epsilon1", "eps1", eps1, digits);
    add("h", "h", p.h, digits);
    add("l1_lambda", "l_1 lambda", l[0], digits);
    add("l2_lambda2", "l_2 lambda^2", l[1], digits);
    add("l3_lambda3", "l_3 lambda^3", l[2], digits);
    add("eps_prime", "eps'", r.eps_prime, digits);
    add("delta", "delta", r.delta, digits);
    add("g", "g", r.g, digits);
    add_interval("z", "z", z, 8);

    std::vector<RationalInterval> bounds;
    for (int n = 1; n <= 3; ++n) {
        bounds.push_back(truncation_bound(z, l, n).bound);
        add_interval("bound_n" + std::to_string(n), "bound beyond order " + std::to_string(n), bounds.back(), 8);
    }

    const Rational eps2 = order_magnitude(table, 3, lam);
    add("epsilon2", "eps2", eps2, digits, "sum of the four order-3 magnitudes");
    add("a20_a1m1_lambda3", "a_{2,0} a_{1,-1} lambda^3", table.at(2, 0) * table.at(1, -1) * lam3, digits);
    add("a20_a11_lambda3", "a_{2,0} a_{1,1} lambda^3", table.at(2, 0) * table.at(1, 1) * lam3, digits);
    for (int s : {-3, -1, 1, 3}) {
        const std::string idx = s < 0 ? "m" + std::to_string(-s) : std::to_string(s);
        add("a3" + idx + "_lambda3", "a_{3," + std::to_string(s) + "} lambda^3", table.at(3, s) * lam3, digits);
    }

    const Rational tail = ceil_decimal(bounds[2].hi(), 8) + ceil_decimal(eps2, 8);
    add("tail_above_2", "tail beyond order 2", tail, 8, "empirical: rounded-up bound beyond order 3 plus eps2");
    const Rational combined = tail + eps1;
    add("combined_n1", "combined bound beyond order 1", combined, 8, "tail beyond order 2 plus eps1");

    const Rational xi_cos2 = -(table.at(1, 1) + table.at(1, -1)) * lam;
    const Rational eta_sin2 = -(table.at(1, 1) - table.at(1, -1)) * lam;
    const Rational xi_const = -table.at(2, 0) * lam2;
    const Rational xi_cos4 = -(table.at(2, 2) + table.at(2, -2)) * lam2;
    const Rational eta_sin4 = -(table.at(2, 2) - table.at(2, -2)) * lam2;
    auto rounding_error = [](const Rational& v) { return abs(v - parse_decimal_value(render_tagged(v, 5))); };

    add("xi_cos2", "xi: cos 2tau", xi_cos2, 5);
    add("eta_sin2", "eta: sin 2tau", eta_sin2, 5);
    const Rational first = combined + max(rounding_error(xi_cos2), rounding_error(eta_sin2));
    add("error_first_order", "error limit, first order", ceil_decimal(first, 5), 5,
        "bound beyond order 1 plus coefficient rounding, rounded up");

    add("xi_const", "xi: constant", xi_const, 5);
    add("xi_cos4", "xi: cos 4tau", xi_cos4, 5);
    add("eta_sin4", "eta: sin 4tau", eta_sin4, 5);
    const Rational xi_err = rounding_error(xi_const) + rounding_error(xi_cos2) + rounding_error(xi_cos4);
    const Rational eta_err = rounding_error(eta_sin2) + rounding_error(eta_sin4);
    add("error_second_order", "error limit, second order", ceil_decimal(tail + max(xi_err, eta_err), 5), 5,
        "tail beyond order 2 plus coefficient rounding, rounded up");
    return rep;
}

std::string report_to_json(const WorkedReport& r) {
    nlohmann::ordered_json j;
    j["m"] = r.m.str();
    j["lambda"] = r.lambda.str();
    j["digits"] = r.digits;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const ReportEntry& e : r.entries) {
        nlohmann::ordered_json o;
        o["key"] = e.key;
        o["label"] = e.label;
        o["value"] = {{"text", e.value.text}, {"tag", e.value.tag_symbol()}};
        if (!e.note.empty()) o["note"] = e.note;
        entries.push_back(std::move(o));
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

std::string report_to_text(const WorkedReport& r) {
    std::size_t width = 0;
    for (const ReportEntry& e : r.entries) width = std::max(width, e.label.size());
    std::ostringstream os;
    os << "m = " << r.m << ", lambda = m^2, N = 2\n";
    for (const ReportEntry& e : r.entries) {
        os << std::left << std::setw(static_cast<int>(width) + 2) << e.label << e.value.str();
        if (!e.note.empty()) os << "    " << e.note;
        os << '\n';
    }
    return os.str();
}

}  // namespace hillvar
