#include "hillvar/hill_coeffs.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hillvar {

namespace {

const Rational kHalf(1, 2);
const Rational kThreeHalves(3, 2);

// 2(4 sigma^2 - 1) - 4m + m^2
Rational hill_denominator(int sigma, const Rational& m) {
    return Rational(2 * (4 * sigma * sigma - 1)) - Rational(4) * m + m * m;
}

// Grades 1..J of p with the given orders; grade 0 stays zero.
GradedSeries series_from(const std::vector<FourierSlice>& orders, int J, bool reflected) {
    GradedSeries s(J);
    for (int j = 1; j <= J && j <= static_cast<int>(orders.size()); ++j) {
        const FourierSlice& o = orders[static_cast<std::size_t>(j - 1)];
        s.set_grade(j, reflected ? reflect(o) : o);
    }
    return s;
}

// Incremental state for (1-p)^(-1/2) and (1-q)^(-3/2). Grade n of each is
// first formed without the (still unknown) order-n coefficients; once order
// n is solved the linear term -e S_n is added.
class InverseDistanceFactors {
public:
    explicit InverseDistanceFactors(int J) : w1_(J), w2_(J) {
        w1_.set_grade(0, FourierSlice::monomial(0, Rational(1)));
        w2_.set_grade(0, FourierSlice::monomial(0, Rational(1)));
    }

    // Grade-n remainder P_n from orders 1..n-1.
    FourierSlice remainder(int n, const GradedSeries& p, const GradedSeries& q) {
        w1_.set_grade(n, partial(w1_, p, -kHalf, n));
        w2_.set_grade(n, partial(w2_, q, -kThreeHalves, n));
        FourierSlice acc(n);
        for (int i = 1; i < n; ++i) acc += slice_mul(w1_.grade(i), w2_.grade(n - i));
        // With p_n = q_n = 0 the linear parts of grade n vanish, so the whole
        // grade-n product is remainder.
        acc += w1_.grade(n);
        acc += w2_.grade(n);
        return acc;
    }

    void complete(int n, const FourierSlice& pn, const FourierSlice& qn) {
        w1_.add_to_grade(n, pn * kHalf);
        w2_.add_to_grade(n, qn * kThreeHalves);
    }

private:
    static FourierSlice partial(const GradedSeries& w, const GradedSeries& s, const Rational& e, int n) {
        FourierSlice acc(n);
        for (int k = 1; k < n; ++k) {
            const FourierSlice& sk = s.grade(k);
            const FourierSlice& wr = w.grade(n - k);
            if (sk.is_zero() || wr.is_zero()) continue;
            acc += slice_mul(sk, wr) * (Rational(n - k) - e * Rational(k));
        }
        return acc * Rational(1, n);
    }

    GradedSeries w1_;
    GradedSeries w2_;
};

}  // namespace

Rational l_of(const Rational& m) { return Rational(1) + Rational(2) * m + kThreeHalves * m * m; }

ModelParams ModelParams::make(const Rational& m) { return make(m, m * m); }

ModelParams ModelParams::make(const Rational& m, const Rational& lambda, const Rational& a) {
    ModelParams p;
    p.m = m;
    p.l = l_of(m);
    p.lambda = lambda;
    p.a = a;
    p.k = a.pow(3) * p.l;
    return p;
}

// ------------------------------------------------------------- CoeffTable

CoeffTable::CoeffTable(Rational m, std::vector<FourierSlice> orders)
    : m_(std::move(m)), l_(l_of(m_)), orders_(std::move(orders)) {
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        const int j = static_cast<int>(i) + 1;
        if (orders_[i].order() > j || (j - orders_[i].order()) % 2 != 0)
            throw std::invalid_argument("order-" + std::to_string(j) + " slice violates the support law");
        orders_[i] = orders_[i].padded(j);
    }
}

Rational CoeffTable::at(int j, int sigma) const {
    if (j < 1 || j > J()) return Rational();
    return orders_[static_cast<std::size_t>(j - 1)].at(sigma);
}

const FourierSlice& CoeffTable::order(int j) const {
    if (j < 1 || j > J()) throw std::out_of_range("order " + std::to_string(j) + " outside the table");
    return orders_[static_cast<std::size_t>(j - 1)];
}

GradedSeries CoeffTable::p_series() const { return series_from(orders_, J(), false); }
GradedSeries CoeffTable::q_series() const { return series_from(orders_, J(), true); }

CoeffTable CoeffTable::with_entry(int j, int sigma, const Rational& v) const {
    std::vector<FourierSlice> orders = orders_;
    orders.at(static_cast<std::size_t>(j - 1)).set(sigma, v);
    return CoeffTable(m_, std::move(orders));
}

CoeffTable CoeffTable::truncated(int J) const {
    if (J < 0 || J > this->J()) throw std::out_of_range("truncation beyond the table");
    return CoeffTable(m_, std::vector<FourierSlice>(orders_.begin(), orders_.begin() + J));
}

// ---------------------------------------------------------------- recursion

FirstOrder first_order(const Rational& m) {
    const Rational d = Rational(6) - Rational(4) * m + m * m;
    const Rational m2 = m * m;
    return {Rational(-9, 16) * (Rational(2) + Rational(4) * m + Rational(3) * m2) / d,
            Rational(3, 16) * (Rational(38) + Rational(28) * m + Rational(9) * m2) / d};
}

FourierSlice forcing_seed() {
    FourierSlice s(1);
    s.set(-1, -kThreeHalves);
    return s;
}

FourierSlice forcing_order(const CoeffTable& table, int r) {
    if (r < 1) throw std::invalid_argument("forcing order must be positive");
    if (r == 1) return forcing_seed();
    if (table.J() < r - 1)
        throw std::invalid_argument("forcing of order " + std::to_string(r) + " needs the table through order " +
                                    std::to_string(r - 1));
    const CoeffTable low = table.truncated(r - 1);
    auto [P, Q] = remainder_series(low.p_series().truncated(r), low.q_series().truncated(r), r);
    (void)Q;
    FourierSlice a = reflect(low.order(r - 1)).shifted(-1) * kThreeHalves;
    a += P.grade(r) * table.l();
    return a;
}

FourierSlice solve_order(const FourierSlice& forcing, const Rational& m, int r) {
    if (forcing.order() > r || (r - forcing.order()) % 2 != 0)
        throw std::invalid_argument("forcing slice does not fit order " + std::to_string(r));
    const Rational l = l_of(m);
    const Rational c = kThreeHalves * l;
    FourierSlice out(r);
    for (int sigma = -r; sigma <= r; sigma += 2) {
        if (sigma == 0) {
            out.set(0, -forcing.at(0) / (Rational(3) * l));
            continue;
        }
        const Rational s(sigma);
        const Rational diag = Rational(4) * s * s - Rational(4) * (Rational(1) + m) * s + c;
        const Rational det = Rational(2) * s * s * hill_denominator(sigma, m);
        out.set(sigma, (c * forcing.at(-sigma) - diag * forcing.at(sigma)) / det);
    }
    return out;
}

CoeffTable build_table(const Rational& m, int J) {
    if (J < 1) throw std::invalid_argument("table order must be at least 1");
    const Rational l = l_of(m);
    std::vector<FourierSlice> orders;
    orders.reserve(static_cast<std::size_t>(J));
    GradedSeries p(J), q(J);
    InverseDistanceFactors factors(J);
    for (int r = 1; r <= J; ++r) {
        FourierSlice forcing = forcing_seed();
        if (r > 1) {
            forcing = q.grade(r - 1).shifted(-1) * kThreeHalves;
            forcing += factors.remainder(r, p, q) * l;
        }
        FourierSlice a = solve_order(forcing, m, r);
        p.set_grade(r, a);
        q.set_grade(r, reflect(a));
        factors.complete(r, p.grade(r), q.grade(r));
        orders.push_back(std::move(a));
    }
    return CoeffTable(m, std::move(orders));
}

// ----------------------------------------------------------- Hill brackets

Rational hill_bracket(int j, int s, const Rational& m) {
    if (j == 0) throw std::invalid_argument("bracket index j must be nonzero");
    const Rational num = Rational(4 * s * (j - 1) + 4 * j * j + 4 * j - 2) - Rational(4 * (s - j + 1)) * m + m * m;
    return -Rational(s, j) * num / hill_denominator(j, m);
}

Rational hill_bracket_sq(int j, const Rational& m) {
    if (j == 0) throw std::invalid_argument("bracket index j must be nonzero");
    const Rational num = Rational(4 * j * j - 8 * j - 2) - Rational(4 * (j + 2)) * m - Rational(9) * m * m;
    return -Rational(3, 16 * j * j) * num / hill_denominator(j, m);
}

Rational hill_bracket_rd(int j, const Rational& m) {
    if (j == 0) throw std::invalid_argument("bracket index j must be nonzero");
    const Rational num = Rational(20 * j * j - 16 * j + 2) - Rational(4 * (5 * j - 2)) * m + Rational(9) * m * m;
    return -Rational(3, 16 * j * j) * num / hill_denominator(j, m);
}

Order2 closed_form_order2(const Rational& m) {
    const FirstOrder f = first_order(m);
    const Rational l = l_of(m);
    // Hill's alpha_{+-1,0} = -a_{1,+-1}; order-2 alphas from his brackets.
    const Rational alpha1 = -f.a11, alpha_m1 = -f.a1m1;
    const Rational alpha2 = Rational(2) * hill_bracket_sq(2, m) * alpha1 + hill_bracket(2, 1, m) * alpha1 * alpha_m1;
    const Rational alpha_m2 =
        Rational(2) * hill_bracket_rd(-2, m) * alpha1 + hill_bracket(-2, -1, m) * alpha1 * alpha_m1;
    const Rational diff = f.a1m1 - f.a11;
    Order2 out;
    out.a20 = -Rational(1, 4) * diff * diff - (Rational(2) * f.a11 + Rational(1) / (Rational(2) * l)) * f.a1m1;
    out.a22 = -alpha2;
    out.a2m2 = -alpha_m2;
    return out;
}

// ------------------------------------------------------------ evaluations

std::map<int, Rational> fourier_coefficients(const CoeffTable& table, const Rational& lambda, const Rational& a) {
    if (lambda.sign() < 0) throw std::invalid_argument("lambda must be nonnegative");
    std::map<int, Rational> out;
    Rational a0(1);
    for (int j = 2; j <= table.J(); j += 2) a0 -= table.at(j, 0) * lambda.pow(j);
    out[0] = a * a0;
    for (int sigma = 1; sigma <= table.J(); ++sigma) {
        Rational plus, minus;
        for (int j = sigma; j <= table.J(); j += 2) {
            const Rational lj = lambda.pow(j);
            plus += table.at(j, sigma) * lj;
            minus += table.at(j, -sigma) * lj;
        }
        out[sigma] = -a * plus;
        out[-sigma] = -a * minus;
    }
    return out;
}

OdeResidual ode_residual(const CoeffTable& table, int J) {
    if (J < 0 || J > table.J()) throw std::invalid_argument("residual order beyond the table");
    const Rational& m = table.m();
    const Rational& l = table.l();
    const GradedSeries p = table.p_series().truncated(J);
    const GradedSeries q = table.q_series().truncated(J);
    auto [P, Q] = remainder_series(p, q, J);

    // d/dtau E^sigma = 2 i sigma E^sigma, so
    //   p'' + 2(1+m) i p'  ->  (-4 sigma^2 - 4(1+m) sigma) on E^sigma
    //   q'' - 2(1+m) i q'  ->  (-4 sigma^2 + 4(1+m) sigma) on E^sigma
    auto differential = [&](const FourierSlice& s, int sign) {
        FourierSlice out(s.order());
        for (int sigma = -s.order(); sigma <= s.order(); sigma += 2) {
            const Rational k(sigma);
            out.set(sigma, (Rational(-4) * k * k - Rational(4 * sign) * (Rational(1) + m) * k) * s.at(sigma));
        }
        return out;
    };

    OdeResidual res{GradedSeries(J), GradedSeries(J), -1};
    for (int j = 1; j <= J; ++j) {
        const FourierSlice sum = p.grade(j) + q.grade(j);
        // Right sides: (3/2) lambda (q - 1) E^-1 + l R_p and (3/2) lambda (p - 1) E + l R_q.
        FourierSlice q_prev = j == 1 ? FourierSlice(0) : q.grade(j - 1);
        FourierSlice p_prev = j == 1 ? FourierSlice(0) : p.grade(j - 1);
        if (j == 1) {
            q_prev.set(0, Rational(-1));
            p_prev.set(0, Rational(-1));
        }
        FourierSlice rp = differential(p.grade(j), 1) - sum * (kThreeHalves * l);
        rp -= q_prev.shifted(-1) * kThreeHalves + P.grade(j) * l;
        FourierSlice rq = differential(q.grade(j), -1) - sum * (kThreeHalves * l);
        rq -= p_prev.shifted(1) * kThreeHalves + Q.grade(j) * l;
        res.p_equation.set_grade(j, rp);
        res.q_equation.set_grade(j, rq);
    }
    res.zero_through = std::min(res.p_equation.zero_through(), res.q_equation.zero_through());
    return res;
}

int defining_system_violations(const CoeffTable& table) {
    const Rational& m = table.m();
    const Rational c = kThreeHalves * table.l();
    int bad = 0;
    for (int r = 1; r <= table.J(); ++r) {
        const FourierSlice forcing = forcing_order(table, r);
        for (int sigma = -r; sigma <= r; sigma += 2) {
            const Rational s(sigma);
            const Rational lhs = (Rational(4) * s * s + Rational(4) * (Rational(1) + m) * s + c) * table.at(r, sigma) +
                                 c * table.at(r, -sigma) + forcing.at(sigma);
            if (!lhs.is_zero()) ++bad;
        }
    }
    return bad;
}

PeriodicityDeterminant periodicity_determinant(const Rational& m, const Rational& tol) {
    const Rational radicand = Rational(1) + Rational(2) * m - m * m / Rational(2);
    if (radicand.sign() < 0) throw NumericError("negative radicand 1 + 2m - m^2/2");
    PeriodicityDeterminant out;
    const Rational inner = tol / Rational(1000);
    out.chi = interval_sqrt(RationalInterval(radicand), inner);

    RationalInterval sine;
    if (out.chi.is_point()) {
        sine = sin_pi_multiple(out.chi.lo(), inner);
    } else {
        sine = sin_enclosure(out.chi * pi_enclosure(inner), inner);
    }
    RationalInterval sine_sq = sine * sine;
    if (sine.contains_zero()) sine_sq = RationalInterval(Rational(0), sine_sq.hi());

    const RationalInterval one_m(Rational(1) + m);
    const RationalInterval shifted = out.chi + RationalInterval(Rational(2)) * one_m;
    out.value = RationalInterval(Rational(-16)) * pi_enclosure(inner) * one_m * out.chi * shifted * shifted * sine_sq;

    if (sine_sq == RationalInterval(Rational(0))) {
        out.value = RationalInterval(Rational(0));
        out.status = DeterminantStatus::zero;
    } else if (out.value.strictly_negative() || out.value.strictly_positive()) {
        out.status = DeterminantStatus::nonzero;
    }
    return out;
}

// ----------------------------------------------------------------- export

std::string table_to_json(const CoeffTable& table) {
    nlohmann::ordered_json j;
    j["m"] = table.m().str();
    j["J"] = table.J();
    j["entries"] = nlohmann::ordered_json::array();
    for (int r = 1; r <= table.J(); ++r)
        for (int sigma = -r; sigma <= r; sigma += 2)
            j["entries"].push_back({{"j", r}, {"sigma", sigma}, {"value", table.at(r, sigma).str()}});
    return j.dump(2) + "\n";
}

std::string table_to_csv(const CoeffTable& table) {
    std::ostringstream os;
    os << "j,sigma,value\n";
    for (int r = 1; r <= table.J(); ++r)
        for (int sigma = -r; sigma <= r; sigma += 2) os << r << ',' << sigma << ',' << table.at(r, sigma).str() << '\n';
    return os.str();
}

}  // namespace hillvar
