#include <cmath>
#include <complex>

#include "doctest.h"
#include "generators.hpp"
#include "hillvar/hill_coeffs.hpp"
#include "hillvar/majorant_cert.hpp"
#include "hillvar/polynomial.hpp"

using namespace hillvar;

namespace {

const Rational kLunar = parse_rational("0.080848933808312");
const Rational kTol = pow10_neg(20);

double F(double eps, double h, double z) { return eps * (1 + z) + h * (3 - 2 * z) * z * z / ((1 - z) * (1 - z)) - z; }

// Plain rational bisection for the first sign change of F on a fine grid.
RationalInterval scan_root(const ConvergenceParams& p, const Rational& tol) {
    auto f = [&](const Rational& z) {
        const Rational one_minus = Rational(1) - z;
        return p.epsilon * (Rational(1) + z) + p.h * (Rational(3) - Rational(2) * z) * z * z / (one_minus * one_minus) - z;
    };
    Rational lo(0), step(1, 4096);
    while (f(lo + step).sign() > 0) lo += step;
    Rational hi = lo + step;
    while (hi - lo > tol) {
        const Rational mid = (lo + hi) / Rational(2);
        if (f(mid).sign() > 0) lo = mid;
        else hi = mid;
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("reduced parameters") {
    const ConvergenceParams lunar = reduce_params(kLunar, kLunar * kLunar);
    CHECK(render_tagged(lunar.epsilon, 10).str() == "0.0102116577(-)");
    CHECK(render_tagged(lunar.h, 10).str() == "1.2201119633(-)");

    const ConvergenceParams s = reduce_params(Rational(1, 7), Rational(1, 49));
    CHECK(s.epsilon == Rational(1227, 34888));
    CHECK(s.h == Rational(52761, 34888));

    const Rational lambda(1, 9);
    const ConvergenceParams z = reduce_params(Rational(0), lambda);
    CHECK(z.epsilon == Rational(11, 8) * lambda);
    CHECK(z.h == Rational(11, 12));
    CHECK_THROWS(reduce_params(Rational(0), Rational(-1)));

    gen::Source src(41);
    for (int i = 0; i < 30; ++i) {
        const Rational m = src.rational_in(Rational(0), Rational(1, 5));
        const Rational lam = src.positive_rational(5, 97);
        const FirstOrder f = first_order(m);
        CHECK(reduce_params(m, lam).epsilon == (f.a1m1.abs() + f.a11.abs()) * lam);
    }
}

TEST_CASE("sufficient check") {
    const Certificate c = sufficient_check(reduce_params(Rational(1, 7), Rational(1, 49)));
    CHECK(c.passed());
    CHECK(c.margin == RationalInterval(Rational(8722, 210615) - Rational(1227, 34888)));
    CHECK(sufficient_check(ConvergenceParams::reduced(Rational(0), Rational(5))).passed());
    CHECK(sufficient_check(ConvergenceParams::reduced(Rational(1), Rational(1))).verdict == Verdict::fail);
    // Boundary counts as a pass.
    CHECK(sufficient_check(ConvergenceParams::reduced(Rational(1, 18), Rational(1))).passed());
}

TEST_CASE("quadratic majorant") {
    const QuadraticMajorant zero = quadratic_majorant(ConvergenceParams::reduced(Rational(0), Rational(1)), kTol);
    CHECK(zero.cert.passed());
    REQUIRE(zero.root);
    CHECK(zero.root->contains(Rational(0)));

    const ConvergenceParams lunar = reduce_params(kLunar, kLunar * kLunar);
    const QuadraticMajorant q = quadratic_majorant(lunar, kTol);
    CHECK(q.cert.passed());
    REQUIRE(q.root);
    CHECK(q.root->lo() > lunar.epsilon);
    CHECK(q.root->hi() < Rational(1, 50));
    CHECK(q.cert.margin.lo().sign() > 0);

    // h = 1: threshold 3 / (25 + sqrt(576)) = 3/49.
    CHECK(quadratic_majorant(ConvergenceParams::reduced(Rational(3, 49), Rational(1)), kTol).cert.passed());
    const QuadraticMajorant above =
        quadratic_majorant(ConvergenceParams::reduced(Rational(3, 49) + Rational(1, 100000), Rational(1)), kTol);
    CHECK(above.cert.verdict == Verdict::fail);
    CHECK_FALSE(above.root);
    CHECK(above.cert.margin.hi().sign() < 0);
}

TEST_CASE("exact condition") {
    CHECK(exact_condition(ConvergenceParams::reduced(Rational(0), Rational(2)), kTol).passed());
    const Certificate lunar = exact_condition(reduce_params(kLunar, kLunar * kLunar), kTol);
    CHECK(lunar.passed());
    CHECK(lunar.margin.lo().sign() > 0);
    CHECK(exact_condition(reduce_params(Rational(1, 7), Rational(1, 49)), kTol).passed());
    CHECK(exact_condition(reduce_params(Rational(1, 6), Rational(1, 36)), kTol).verdict == Verdict::fail);
    CHECK_THROWS_AS(exact_condition(ConvergenceParams::reduced(Rational(1), Rational(1)), kTol), NumericError);

    // h = 0 is exact: w = 0 and the bound is 1/2.
    const Certificate h0 = exact_condition(ConvergenceParams::reduced(Rational(1, 2), Rational(0)), kTol);
    CHECK(h0.passed());
    CHECK(h0.margin == RationalInterval(Rational(0)));
    // w = 1/2 exactly when 2h / (1 - eps + 2h) = 1/8; bound there is 5/19.
    const Rational eps(5, 19);
    const Rational h = (Rational(1) - eps) / Rational(14);
    const Certificate edge = exact_condition(ConvergenceParams::reduced(eps, h), kTol);
    CHECK(edge.margin == RationalInterval(Rational(0)));
    CHECK(edge.passed());
    CHECK(exact_condition(ConvergenceParams::reduced(eps + Rational(1, 1000000), h), kTol).verdict == Verdict::fail);
}

TEST_CASE("condition hierarchy and root existence on a grid") {
    for (int i = 1; i <= 20; ++i)
        for (int k = 1; k <= 20; ++k) {
            const ConvergenceParams p = ConvergenceParams::reduced(Rational(i, 40), Rational(3 * k, 20));
            const bool s = sufficient_check(p).passed();
            const bool q = quadratic_majorant(p, kTol).cert.passed();
            const Certificate e = exact_condition(p, kTol);
            REQUIRE(e.verdict != Verdict::indeterminate);
            if (s) CHECK(q);
            if (q) CHECK(e.passed());
            CHECK(e.passed() == (roots_in_unit_interval(p) > 0));
        }
}

TEST_CASE("majorant table") {
    const MajorantTable t = majorant_table(kLunar, 3);
    const FirstOrder f = first_order(kLunar);
    CHECK(t.at(1, 1) == f.a11.abs());
    CHECK(t.at(1, -1) == f.a1m1.abs());
    CHECK_THROWS(majorant_table(Rational(0), 3));
    CHECK_THROWS(majorant_table(Rational(1, 10), 0));

    for (const Rational& m : {Rational(1, 100), Rational(1, 12), kLunar, Rational(1, 7)}) {
        const CoeffTable a = build_table(m, 6);
        const MajorantTable b = majorant_table(m, 6);
        for (int r = 1; r <= 6; ++r)
            for (int sigma = -r; sigma <= r; sigma += 2) {
                CHECK(a.at(r, sigma).abs() <= b.at(r, sigma));
                CHECK(b.at(r, sigma).sign() >= 0);
            }
    }
}

TEST_CASE("majorant row sums solve the majorant equation") {
    for (const Rational& m : {Rational(1, 12), kLunar}) {
        const MajorantTable b = majorant_table(m, 6);
        const PowerSeries z = majorant_series(m, 6);
        CHECK(z.at(0).is_zero());
        for (int r = 1; r <= 6; ++r) CHECK(b.row_sum(r) == z.at(r));
    }
    // Second coefficient is (1 + 3h) eps^2 per unit lambda.
    const ConvergenceParams u = reduce_params(kLunar, Rational(1));
    const PowerSeries z = majorant_series(kLunar, 3);
    CHECK(z.at(1) == u.epsilon);
    CHECK(z.at(2) == (Rational(1) + Rational(3) * u.h) * u.epsilon * u.epsilon);
}

TEST_CASE("majorant entries grow with m") {
    gen::Source src(42);
    for (int i = 0; i < 6; ++i) {
        Rational m1 = src.rational_in(Rational(0), Rational(2), 401);
        Rational m2 = src.rational_in(Rational(0), Rational(2), 401);
        if (m2 < m1) std::swap(m1, m2);
        const MajorantTable a = majorant_table(m1, 5), b = majorant_table(m2, 5);
        for (int r = 1; r <= 5; ++r)
            for (int sigma = -r; sigma <= r; sigma += 2) CHECK(a.at(r, sigma) <= b.at(r, sigma));
    }
}

TEST_CASE("majorant root") {
    CHECK(majorant_root(ConvergenceParams::reduced(Rational(0), Rational(1)), kTol) == RationalInterval(Rational(0)));
    const ConvergenceParams lunar = reduce_params(kLunar, kLunar * kLunar);
    const Rational tol = pow10_neg(15);
    const RationalInterval z = majorant_root(lunar, tol);
    CHECK(z.width() <= tol);
    CHECK(z.lo() >= lunar.epsilon);
    const RationalInterval oracle = scan_root(lunar, pow10_neg(18));
    CHECK(z.lo() <= oracle.hi());
    CHECK(oracle.lo() <= z.hi());
    // F(lo) >= 0 >= F(hi).
    CHECK(F(lunar.epsilon.to_double(), lunar.h.to_double(), z.lo().to_double()) > -1e-15);
    CHECK_THROWS_AS(majorant_root(reduce_params(Rational(1, 6), Rational(1, 36)), tol), NumericError);

    gen::Source src(43);
    for (int i = 0; i < 20; ++i) {
        const ConvergenceParams p = ConvergenceParams::reduced(src.rational_in(Rational(0), Rational(1, 20)),
                                                               src.rational_in(Rational(0), Rational(2)));
        if (!exact_condition(p, kTol).passed()) continue;
        const RationalInterval r = majorant_root(p, pow10_neg(12));
        const RationalInterval o = scan_root(p, pow10_neg(14));
        CHECK(r.lo() <= o.hi());
        CHECK(o.lo() <= r.hi());
        CHECK(r.hi() >= p.epsilon);
    }
}

TEST_CASE("critical m") {
    const RationalInterval c = critical_m(pow10_neg(4));
    CHECK(c.width() <= pow10_neg(4));
    CHECK(c.lo() > Rational(1, 7));
    CHECK(c.hi() < Rational(1, 6));
    CHECK(exact_condition(reduce_params(c.lo(), c.lo() * c.lo()), kTol).passed());
    CHECK(exact_condition(reduce_params(c.hi(), c.hi() * c.hi()), kTol).verdict == Verdict::fail);
}

TEST_CASE("complex disc") {
    CHECK(complex_disc_certify(parse_rational("0.45"), Rational(1, 144)).verdict == Verdict::fail);
    CHECK(complex_disc_certify(Rational(1, 12), Rational(1, 144)).passed());
    CHECK(complex_disc_certify(Rational(1, 12), Rational(1, 144)).condition == Condition::complex_disc);
    // The radius limit 1 - 1/sqrt(3) = 0.42264...
    CHECK(complex_disc_certify(parse_rational("0.4226"), Rational(0)).passed());
    CHECK(complex_disc_certify(parse_rational("0.4227"), Rational(0)).verdict == Verdict::fail);

    // sigma = 1 factor 2 sqrt(3) / (sqrt(3) + 1) exceeds one: 2 sqrt(3) > sqrt(3) + 1 iff 3 > 1.
    const RationalInterval r3 = interval_sqrt(RationalInterval(Rational(3)), pow10_neg(20));
    const RationalInterval ratio = RationalInterval(Rational(2)) * r3 / (r3 + RationalInterval(Rational(1)));
    CHECK(ratio.lo() > Rational(1));
}

TEST_CASE("quadratic modulus floor") {
    CHECK_FALSE(quadratic_modulus_floor(Rational(1), Rational(1), Rational(1), Rational(0)));
    CHECK_FALSE(quadratic_modulus_floor(Rational(-1), Rational(1), Rational(3), Rational(0)));
    gen::Source src(44);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const Rational a = src.positive_rational(20, 7), b = src.positive_rational(20, 7), c = src.positive_rational(20, 7);
        const Rational M = src.positive_rational(10, 23);
        const auto floor = quadratic_modulus_floor(a, b, c, M);
        if (!floor) continue;
        ++checked;
        CHECK(*floor == a - Rational(2) * b * M + c * M * M);
        CHECK(floor->sign() > 0);
        const double ad = a.to_double(), bd = b.to_double(), cd = c.to_double(), Md = M.to_double();
        for (int k = 0; k < 64; ++k)
            for (double rho : {Md, Md * 0.5, Md * 0.9}) {
                const std::complex<double> x = std::polar(rho, 2 * M_PI * k / 64);
                CHECK(std::abs(ad - 2 * bd * x + cd * x * x) >= floor->to_double() - 1e-9);
            }
    }
    CHECK(checked > 10);
}

TEST_CASE("Sturm counting") {
    // (z - 1/4)(z - 1/2)(z - 2)
    const Polynomial p = Polynomial{Rational(-1, 4), Rational(1)} * Polynomial{Rational(-1, 2), Rational(1)} *
                         Polynomial{Rational(-2), Rational(1)};
    CHECK(sturm_count(p, Rational(0), Rational(1)) == 2);
    CHECK(sturm_count(p, Rational(0), Rational(3)) == 3);
    CHECK(sturm_count(p * Polynomial{Rational(-1, 4), Rational(1)}, Rational(0), Rational(1)) == 2);
    CHECK(p.divided_exactly(Polynomial{Rational(-2), Rational(1)}).degree() == 2);
    CHECK_THROWS(p.divided_exactly(Polynomial{Rational(-3), Rational(1)}));
}

TEST_CASE("certificate export") {
    const std::string j = certificate_to_json(exact_condition(reduce_params(Rational(1, 7), Rational(1, 49)), kTol));
    CHECK(j.find("\"condition\": \"exact\"") != std::string::npos);
    CHECK(j.find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK(j.find("\"epsilon\": \"1227/34888\"") != std::string::npos);
    CHECK(j.find("margin_lo") != std::string::npos);
}
