#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "hillvar/hill_coeffs.hpp"

using namespace hillvar;

namespace {

const Rational kLunar = parse_rational("0.080848933808312");

std::string tagged(const Rational& x, int digits = 10) { return render_tagged(x, digits).str(); }

// Solves the 2x2 order system by Cramer's rule directly from its matrix.
std::pair<Rational, Rational> cramer(int sigma, const Rational& m, const Rational& A_plus, const Rational& A_minus) {
    const Rational l = l_of(m);
    const Rational c = Rational(3, 2) * l;
    const Rational s(sigma);
    const Rational d_plus = Rational(4) * s * s + Rational(4) * (Rational(1) + m) * s + c;
    const Rational d_minus = Rational(4) * s * s - Rational(4) * (Rational(1) + m) * s + c;
    const Rational det = d_plus * d_minus - c * c;
    return {(-A_plus * d_minus + c * A_minus) / det, (-A_minus * d_plus + c * A_plus) / det};
}

}  // namespace

TEST_CASE("model parameters") {
    const ModelParams p = ModelParams::make(Rational(1, 7));
    CHECK(p.l == Rational(1) + Rational(2, 7) + Rational(3, 98));
    CHECK(p.lambda == Rational(1, 49));
    CHECK(p.k == p.l);
    const ModelParams q = ModelParams::make(Rational(1, 7), Rational(0), Rational(2));
    CHECK(q.k == Rational(8) * q.l);
    gen::Source src(31);
    for (int i = 0; i < 50; ++i) {
        const Rational m = src.rational(40, 9);
        CHECK(Rational(6) - Rational(4) * m + m * m > Rational(0));
        for (int sigma = 1; sigma <= 6; ++sigma)
            CHECK(Rational(2 * (4 * sigma * sigma - 1)) - Rational(4) * m + m * m > Rational(0));
    }
}

TEST_CASE("first order") {
    const FirstOrder f0 = first_order(Rational(0));
    CHECK(f0.a11 == Rational(-3, 16));
    CHECK(f0.a1m1 == Rational(19, 16));

    const FirstOrder f = first_order(kLunar);
    const Rational lambda = kLunar * kLunar;
    CHECK(tagged(f.a1m1 * lambda) == "0.0086958085(-)");
    CHECK(tagged(f.a11 * lambda) == "-0.0015158492(-)");

    const FirstOrder s = first_order(Rational(1, 7));
    CHECK((s.a1m1.abs() + s.a11.abs()) * Rational(1, 49) == Rational(1227, 34888));

    // Order-1 solve reproduces the closed forms.
    gen::Source src(32);
    for (int i = 0; i < 20; ++i) {
        const Rational m = src.rational_in(Rational(0), Rational(1, 7));
        const FourierSlice a = solve_order(forcing_seed(), m, 1);
        CHECK(a.at(1) == first_order(m).a11);
        CHECK(a.at(-1) == first_order(m).a1m1);
    }
}

TEST_CASE("reflect of p1 is q1") {
    const CoeffTable t = build_table(Rational(0), 1);
    const FourierSlice q1 = t.q_series().grade(1);
    CHECK(q1.at(1) == Rational(19, 16));
    CHECK(q1.at(-1) == Rational(-3, 16));
}

TEST_CASE("solve_order against Cramer's rule") {
    gen::Source src(33);
    for (int i = 0; i < 40; ++i) {
        const Rational m = src.rational(30, 17);
        const int r = static_cast<int>(src.integer(1, 6));
        const FourierSlice A = src.slice(r);
        const FourierSlice a = solve_order(A, m, r);
        for (int sigma = -r; sigma <= r; sigma += 2) {
            if (sigma == 0) {
                CHECK(a.at(0) == -A.at(0) / (Rational(3) * l_of(m)));
                continue;
            }
            CHECK(a.at(sigma) == cramer(sigma, m, A.at(sigma), A.at(-sigma)).first);
        }
    }
}

TEST_CASE("determinant of the paired system") {
    gen::Source src(34);
    for (int i = 0; i < 100; ++i) {
        const Rational m = src.rational(30, 17);
        const int sigma = static_cast<int>(src.integer(1, 9));
        const Rational s(sigma);
        const Rational l = l_of(m);
        const Rational c = Rational(3, 2) * l;
        const Rational lhs = (Rational(4) * s * s + c).pow(2) - Rational(16) * (Rational(1) + m).pow(2) * s * s - c * c;
        const Rational rhs = Rational(2) * s * s * (Rational(2 * (4 * sigma * sigma - 1)) - Rational(4) * m + m * m);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("forcing") {
    const CoeffTable t = build_table(Rational(0), 3);
    const FourierSlice f1 = forcing_order(t, 1);
    CHECK(f1.at(-1) == Rational(-3, 2));
    CHECK(f1.at(1) == Rational(0));

    // r = 2 at m = 0 from the quadratic remainder formula.
    const FourierSlice& p1 = t.order(1);
    const FourierSlice q1 = reflect(p1);
    const FourierSlice P2 = slice_mul(p1, p1) * Rational(3, 8) + slice_mul(p1, q1) * Rational(3, 4) +
                            slice_mul(q1, q1) * Rational(15, 8);
    const FourierSlice expect = q1.shifted(-1) * Rational(3, 2) + P2 * l_of(Rational(0));
    CHECK(forcing_order(t, 2) == expect);

    // Orders at or above r do not enter A_r.
    const CoeffTable altered = t.with_entry(3, 1, Rational(77)).with_entry(2, 0, Rational(5));
    CHECK(forcing_order(altered, 2) == forcing_order(t, 2));
    CHECK(forcing_order(altered.with_entry(2, 0, t.at(2, 0)), 3) == forcing_order(t, 3));

    CHECK_THROWS(forcing_order(build_table(Rational(0), 1), 3));
}

TEST_CASE("lunar coefficients through order 3") {
    const CoeffTable t = build_table(kLunar, 3);
    const Rational lambda = kLunar * kLunar;
    const Rational l2 = lambda * lambda, l3 = l2 * lambda;
    CHECK(tagged(t.at(2, -2) * l2) == "-0.0000001637(-)");
    CHECK(tagged(t.at(2, 2) * l2) == "-0.0000058793(+)");
    // Exact value; the often-quoted -0.0000239667(+) is off in the 10th digit.
    CHECK(tagged(t.at(2, 0) * l2) == "-0.0000239661(+)");

    const Rational unit = pow10_neg(10);
    CHECK((t.at(3, -1) * l3 - parse_rational("0.0000001469")).abs() <= unit * Rational(2));
    CHECK((t.at(3, -3) * l3 - parse_rational("-0.0000000025")).abs() <= unit * Rational(2));
    CHECK((t.at(3, 3) * l3 - parse_rational("-0.0000000300")).abs() <= unit * Rational(2));
    CHECK(tagged(t.at(3, 1) * l3) == "0.0000001054(-)");
}

TEST_CASE("closed forms at order 2") {
    const Order2 z = closed_form_order2(Rational(0));
    CHECK(z.a22 == Rational(16 * 26) * Rational(19, 16) * Rational(-3, 16) / Rational(32 * 30) +
                       Rational(3 * 2) * Rational(-3, 16) / Rational(32 * 30));
    gen::Source src(35);
    for (int i = 0; i < 10; ++i) {
        const Rational m = src.rational_in(Rational(0), Rational(1, 7));
        const CoeffTable t = build_table(m, 2);
        const Order2 c = closed_form_order2(m);
        CHECK(t.at(2, 0) == c.a20);
        CHECK(t.at(2, 2) == c.a22);
        CHECK(t.at(2, -2) == c.a2m2);
    }
}

TEST_CASE("Hill brackets") {
    gen::Source src(36);
    for (int i = 0; i < 10; ++i) {
        const Rational m = src.rational(20, 13);
        for (int j : {-3, -2, -1, 1, 2, 3}) {
            CHECK(hill_bracket(j, j, m) == Rational(-1));
            CHECK(hill_bracket(j, 0, m) == Rational(0));
        }
    }
    CHECK(hill_bracket(2, 1, Rational(0)) == Rational(-13, 30));
    CHECK(hill_bracket_sq(2, Rational(0)) == Rational(1, 320));
    CHECK_THROWS(hill_bracket(0, 1, Rational(0)));
    CHECK_THROWS(hill_bracket_sq(0, Rational(0)));
    CHECK_THROWS(hill_bracket_rd(0, Rational(0)));
}

TEST_CASE("Fourier coefficients") {
    const CoeffTable t = build_table(kLunar, 5);
    const auto circle = fourier_coefficients(t, Rational(0), Rational(3));
    CHECK(circle.at(0) == Rational(3));
    for (const auto& [s, v] : circle)
        if (s != 0) CHECK(v == Rational(0));

    // Coefficient of index sigma starts at lambda^sigma.
    const Rational lambda = kLunar * kLunar;
    const auto a = fourier_coefficients(t, lambda);
    for (int sigma = 1; sigma <= 5; ++sigma) {
        CHECK(a.at(sigma) * Rational(1) == -t.at(sigma, sigma) * lambda.pow(sigma) -
                                                (sigma + 2 <= 5 ? t.at(sigma + 2, sigma) * lambda.pow(sigma + 2) : Rational(0)) -
                                                (sigma + 4 <= 5 ? t.at(sigma + 4, sigma) * lambda.pow(sigma + 4) : Rational(0)));
        CHECK_FALSE(t.at(sigma, sigma).is_zero());
        CHECK_FALSE(t.at(sigma, -sigma).is_zero());
    }
    const Rational unit = pow10_neg(10) * Rational(2);
    CHECK((a.at(-3) - parse_rational("0.0000000025")).abs() <= unit);
    CHECK((a.at(3) - parse_rational("0.0000000300")).abs() <= unit);
}

TEST_CASE("ODE residual vanishes") {
    const CoeffTable t = build_table(kLunar, 5);
    CHECK(ode_residual(t, 1).zero_through == 1);
    const OdeResidual r = ode_residual(t, 5);
    CHECK(r.zero_through == 5);
    const OdeResidual bad = ode_residual(t.with_entry(2, 0, t.at(2, 0) + Rational(1, 1000)), 5);
    CHECK(bad.zero_through == 1);
    CHECK_FALSE(bad.p_equation.grade(2).is_zero());

    gen::Source src(37);
    for (int i = 0; i < 3; ++i) {
        const Rational m = src.rational_in(Rational(0), Rational(1, 7));
        CHECK(ode_residual(build_table(m, 4), 4).zero_through == 4);
    }
}

TEST_CASE("defining system") {
    const CoeffTable t = build_table(Rational(1, 12), 6);
    CHECK(defining_system_violations(t) == 0);
    CHECK(defining_system_violations(t.with_entry(4, -2, Rational(1))) > 0);
}

TEST_CASE("structural properties of the table") {
    const CoeffTable t = build_table(Rational(1, 10), 6);
    for (int j = 1; j <= 6; ++j) {
        CHECK(t.order(j).order() == j);
        for (int sigma = -j; sigma <= j; ++sigma)
            if ((sigma + j) % 2 != 0) CHECK(t.at(j, sigma).is_zero());
    }
    CHECK(build_table(Rational(1, 10), 3).at(3, 1) == t.at(3, 1));
}

TEST_CASE("periodicity determinant") {
    const Rational tol = pow10_neg(12);
    const PeriodicityDeterminant z = periodicity_determinant(Rational(0), tol);
    CHECK(z.status == DeterminantStatus::zero);
    CHECK(z.value == RationalInterval(Rational(0)));
    CHECK(z.chi == RationalInterval(Rational(1)));

    // 1 + 2m - m^2/2 never reaches 4 for real m; m = 4 gives chi = 1 again.
    CHECK(periodicity_determinant(Rational(4), tol).status == DeterminantStatus::zero);

    const PeriodicityDeterminant lunar = periodicity_determinant(kLunar, tol);
    CHECK(lunar.status == DeterminantStatus::nonzero);
    CHECK(lunar.value.strictly_negative());
    const Rational radicand = Rational(1) + Rational(2) * kLunar - kLunar * kLunar / Rational(2);
    CHECK(lunar.chi.lo() * lunar.chi.lo() <= radicand);
    CHECK(lunar.chi.hi() * lunar.chi.hi() >= radicand);
    CHECK(std::fabs(lunar.chi.mid().to_double() - std::sqrt(radicand.to_double())) < 1e-12);
    const double chi = std::sqrt(radicand.to_double());
    const double m = kLunar.to_double();
    const double expect = -16 * M_PI * (1 + m) * chi * std::pow(chi + 2 * (1 + m), 2) * std::pow(std::sin(M_PI * chi), 2);
    CHECK(std::fabs(lunar.value.mid().to_double() - expect) < 1e-9);

    // Rational non-integer chi: m = 4/3 gives chi = 5/3.
    const PeriodicityDeterminant half = periodicity_determinant(Rational(4, 3), tol);
    CHECK(half.chi == RationalInterval(Rational(5, 3)));
    CHECK(half.status == DeterminantStatus::nonzero);

    CHECK_THROWS_AS(periodicity_determinant(Rational(10), tol), NumericError);
}

TEST_CASE("table export") {
    const CoeffTable t = build_table(Rational(1, 7), 2);
    const std::string json = table_to_json(t);
    CHECK(json.find("\"m\": \"1/7\"") != std::string::npos);
    CHECK(json.find("\"J\": 2") != std::string::npos);
    CHECK(json.find("\"sigma\": -2") != std::string::npos);
    const std::string csv = table_to_csv(t);
    CHECK(csv.rfind("j,sigma,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 + 3);
}
