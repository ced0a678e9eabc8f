#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "hillvar/orbit.hpp"

using namespace hillvar;

namespace {

const Rational kLunar = parse_rational("0.080848933808312");

bool overlap(const RationalInterval& a, const RationalInterval& b) { return a.lo() <= b.hi() && b.lo() <= a.hi(); }

// Direct sum at tau = pi/2, where cos 2 sigma tau = (-1)^sigma and the sines vanish.
Rational xi_at_quarter_turn(const CoeffTable& t, const Rational& lambda, int n_max) {
    Rational xi;
    for (int j = 1; j <= n_max; ++j)
        for (int s = -j; s <= j; s += 2) xi -= t.at(j, s) * lambda.pow(j) * Rational(s % 2 == 0 ? 1 : -1);
    return xi;
}

}  // namespace

TEST_CASE("tau = 0 and lambda = 0") {
    const CoeffTable t = build_table(kLunar, 4);
    const std::vector<XiEta> v = evaluate_xi_eta(t, kLunar * kLunar, {Rational(0)}, 4);
    CHECK(v[0].eta == RationalInterval(Rational(0)));
    const OrbitSample s = evaluate_xy(t, kLunar * kLunar, Rational(0), 4);
    CHECK(s.y == RationalInterval(Rational(0)));

    gen::Source src(5);
    for (int i = 0; i < 5; ++i) {
        const Rational tau = src.rational_in(Rational(-2), Rational(2), 24);
        const OrbitSample c = evaluate_xy(t, Rational(0), tau, 4, Rational(3));
        CHECK(c.xi == RationalInterval(Rational(0)));
        CHECK(c.eta == RationalInterval(Rational(0)));
        CHECK(c.x.contains(c.x));
        CHECK(overlap(c.x, RationalInterval(Rational(3)) * cos_pi_multiple(tau, pow10_neg(30))));
        CHECK(overlap(c.y, RationalInterval(Rational(3)) * sin_pi_multiple(tau, pow10_neg(30))));
    }
}

TEST_CASE("quarter turn against direct substitution") {
    const CoeffTable t = build_table(kLunar, 4);
    const Rational lam = kLunar * kLunar;
    for (int n = 0; n <= 4; ++n) {
        const OrbitSample s = evaluate_xy(t, lam, Rational(1, 2), n, Rational(2));
        const Rational xi = xi_at_quarter_turn(t, lam, n);
        CHECK(s.xi == RationalInterval(xi));
        CHECK(s.eta == RationalInterval(Rational(0)));
        CHECK(s.x == RationalInterval(Rational(0)));
        CHECK(s.y == RationalInterval(Rational(2) * (Rational(1) + xi)));
    }
    CHECK_THROWS(evaluate_xy(t, lam, Rational(1, 2), 5));
    CHECK_THROWS(evaluate_xi_eta(t, lam, {Rational(0)}, -1));
}

TEST_CASE("first-order lunar amplitudes") {
    const CoeffTable t = build_table(kLunar, 1);
    const std::vector<XiEta> v = evaluate_xi_eta(t, kLunar * kLunar, {Rational(0), Rational(1, 4)}, 1);
    CHECK(render_tagged(v[0].xi.lo(), 5).text == "-0.00718");
    CHECK(render_tagged(v[1].eta.lo(), 5).text == "0.01021");
}

TEST_CASE("periodicity, reflection and radius") {
    const CoeffTable t = build_table(Rational(1, 12), 5);
    const Rational lam(1, 144);
    gen::Source src(17);
    std::vector<Rational> phases;
    for (int i = 0; i < 12; ++i) phases.push_back(src.rational_in(Rational(-1), Rational(1), 60));
    phases.push_back(Rational(1, 3));
    phases.push_back(Rational(1, 4));
    std::vector<Rational> shifted, mirrored;
    for (const Rational& p : phases) {
        shifted.push_back(p + Rational(1));
        mirrored.push_back(-p);
    }
    const auto base = evaluate_xi_eta(t, lam, phases, 5);
    const auto period = evaluate_xi_eta(t, lam, shifted, 5);
    const auto mirror = evaluate_xi_eta(t, lam, mirrored, 5);
    for (std::size_t i = 0; i < phases.size(); ++i) {
        CHECK(base[i].xi == period[i].xi);
        CHECK(base[i].eta == period[i].eta);
        CHECK(base[i].xi == mirror[i].xi);
        CHECK(overlap(base[i].eta, -mirror[i].eta));

        const Rational a(7, 5);
        const OrbitSample s = evaluate_xy(t, lam, phases[i], 5, a);
        const RationalInterval one_xi = RationalInterval(Rational(1)) + s.xi;
        const RationalInterval lhs = s.x * s.x + s.y * s.y;
        const RationalInterval rhs = RationalInterval(a * a) * (one_xi * one_xi + s.eta * s.eta);
        CHECK(overlap(lhs, rhs));
    }
    // Exact phases give exact equality.
    for (const Rational& p : {Rational(0), Rational(1, 2), Rational(1), Rational(3, 2), Rational(-1, 2), Rational(5, 2)}) {
        const OrbitSample s = evaluate_xy(t, lam, p, 5, Rational(3, 2));
        REQUIRE(s.x.is_point());
        const Rational one_xi = Rational(1) + s.xi.lo();
        CHECK(s.x.lo() * s.x.lo() + s.y.lo() * s.y.lo() ==
              Rational(9, 4) * (one_xi * one_xi + s.eta.lo() * s.eta.lo()));
    }
}

TEST_CASE("export") {
    const CoeffTable t = build_table(kLunar, 2);
    const std::string circle = export_orbit(t, Rational(0), 4, 2, OrbitFormat::csv, 4);
    CHECK(circle ==
          "tau,xi,eta,x,y\n"
          "0.0000,0.0000,0.0000,1.0000,0.0000\n"
          "1.5708(-),0.0000,0.0000,0.0000,1.0000\n"
          "3.1416(-),0.0000,0.0000,-1.0000,0.0000\n"
          "4.7124(-),0.0000,0.0000,0.0000,-1.0000\n");

    const std::string csv = export_orbit(t, kLunar * kLunar, 37, 2, OrbitFormat::csv, 8);
    std::istringstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 38);

    const std::string json = export_orbit(t, kLunar * kLunar, 3, 2, OrbitFormat::json, 6);
    CHECK(json.find("\"tau_over_pi\": \"2/3\"") != std::string::npos);
    CHECK(json.find("\"eta\"") != std::string::npos);
    CHECK(json == export_orbit(t, kLunar * kLunar, 3, 2, OrbitFormat::json, 6));
}

TEST_CASE("thread count does not change results") {
    const CoeffTable t = build_table(kLunar, 6);
    setenv("HILLVAR_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    const std::string one = export_orbit(t, kLunar * kLunar, 24, 6, OrbitFormat::csv);
    setenv("HILLVAR_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    const std::string three = export_orbit(t, kLunar * kLunar, 24, 6, OrbitFormat::csv);
    CHECK(one == three);
    unsetenv("HILLVAR_THREADS");

    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::count(hits.begin(), hits.end(), 1) == 100);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}
