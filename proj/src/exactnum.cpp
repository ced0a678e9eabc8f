#include "hillvar/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <ostream>
#include <sstream>

namespace hillvar {

namespace {

mpz_class pow10z(unsigned k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

mpz_class pow2z(unsigned k) {
    mpz_class r = 1;
    r <<= k;
    return r;
}

mpz_class floor_div(const mpz_class& n, const mpz_class& d) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

mpz_class ceil_div(const mpz_class& n, const mpz_class& d) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

// Number of binary digits needed so that 2^-bits <= tol.
unsigned bits_for(const Rational& tol) {
    if (tol.sign() <= 0) throw NumericError("tolerance must be positive");
    const mpz_class inv = ceil_div(tol.denominator(), tol.numerator());
    return static_cast<unsigned>(mpz_sizeinbase(inv.get_mpz_t(), 2)) + 1;
}

// Integer k-th root of n >= 0 (floor), and whether it is exact.
std::pair<mpz_class, bool> int_root(const mpz_class& n, unsigned k) {
    mpz_class r;
    const int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    return {r, exact != 0};
}

// Exact rational k-th root of x >= 0 when it exists.
std::optional<Rational> exact_root(const Rational& x, unsigned k) {
    auto [rn, en] = int_root(x.numerator(), k);
    if (!en) return std::nullopt;
    auto [rd, ed] = int_root(x.denominator(), k);
    if (!ed) return std::nullopt;
    return Rational::from_integers(rn, rd);
}

// Bracket of the k-th root of a nonnegative rational on the grid 2^-bits.
std::pair<Rational, Rational> root_bracket(const Rational& x, unsigned k, unsigned bits) {
    if (auto e = exact_root(x, k)) return {*e, *e};
    // floor(x * 2^(k*bits)) then integer root.
    const mpz_class scaled = floor_div(x.numerator() << (k * bits), x.denominator());
    auto [r, exact] = int_root(scaled, k);
    (void)exact;
    const mpz_class scale = pow2z(bits);
    return {Rational::from_integers(r, scale), Rational::from_integers(r + 1, scale)};
}

// Enclosure of atan(1/x) for integer x >= 2, width <= tol.
RationalInterval atan_inv(long x, const Rational& tol) {
    Rational sum;
    Rational term(1, x);  // 1/((2n+1) x^(2n+1)) without the 2n+1
    const Rational x2(x * x);
    for (long n = 0;; ++n) {
        const Rational t = term / Rational(2 * n + 1);
        if (t <= tol / Rational(2)) return {sum - t, sum + t};
        sum += (n % 2 == 0) ? t : -t;
        term /= x2;
    }
}

// Taylor enclosure of sin(c) (odd = true) or cos(c) at a point.
RationalInterval taylor_trig(const Rational& c, bool odd, const Rational& tol) {
    Rational sum;
    Rational term = odd ? c : Rational(1);
    long n = odd ? 1 : 0;
    const Rational c2 = c * c;
    bool add = true;
    for (;;) {
        // Lagrange remainder after the current partial sum is bounded by the
        // magnitude of the next term once terms decrease.
        if (term.abs() <= tol / Rational(2) && Rational(n + 1) * Rational(n + 2) > c2) {
            const Rational r = term.abs();
            return {sum - r, sum + r};
        }
        sum += add ? term : -term;
        add = !add;
        term = term * c2 / Rational((n + 1) * (n + 2));
        n += 2;
    }
}

RationalInterval clamp_unit(const RationalInterval& x) {
    return {max(x.lo(), Rational(-1)), min(x.hi(), Rational(1))};
}

RationalInterval trig_enclosure(const RationalInterval& x, bool is_sin, const Rational& tol) {
    const unsigned bits = bits_for(tol) + 8;
    Rational c = round_down(x.mid(), bits);
    Rational radius = max(x.hi() - c, c - x.lo());
    // Shift c into [-4, 4] by whole turns.
    const Rational turn_approx(710, 113);  // ~2pi, only picks the integer
    const mpz_class turns = (c / turn_approx + Rational(1, 2)).floor();
    if (turns != 0) {
        const Rational k = Rational::from_integers(turns, 1);
        const RationalInterval two_pi =
            RationalInterval(Rational(2)) * pi_enclosure(tol / (Rational(8) * (k.abs() + Rational(1))));
        const RationalInterval shifted = RationalInterval(c) - RationalInterval(k) * two_pi;
        c = round_down(shifted.mid(), bits);
        radius += max(shifted.hi() - c, c - shifted.lo());
    }
    const RationalInterval core = taylor_trig(c, is_sin, tol / Rational(2));
    return clamp_unit({core.lo() - radius, core.hi() + radius});
}

// k reduced into [0, 2).
Rational mod_two(const Rational& k) {
    const mpz_class q = (k / Rational(2)).floor();
    return k - Rational(2) * Rational::from_integers(q, 1);
}

}  // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(long num, long den) {
    if (den == 0) throw NumericError("zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) {
    if (v_.get_den() == 0) throw NumericError("zero denominator");
    v_.canonicalize();
}

Rational Rational::from_integers(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw NumericError("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(std::move(q));
}

Rational Rational::abs() const {
    Rational r;
    r.v_ = ::abs(v_);
    return r;
}

Rational Rational::pow(int e) const {
    if (e < 0) return Rational(1) / pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return from_integers(n, d);
}

mpz_class Rational::floor() const { return floor_div(v_.get_num(), v_.get_den()); }

std::string Rational::str() const { return v_.get_str(); }

Rational Rational::operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw NumericError("division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.abs(); }
const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational pow10_neg(int k) { return Rational::from_integers(1, pow10z(static_cast<unsigned>(k))); }

Rational parse_rational(std::string_view text) {
    auto fail = [&](const char* why) {
        return NumericError(std::string("malformed rational '") + std::string(text) + "': " + why);
    };
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw fail("empty");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den.is_zero()) throw NumericError("zero denominator in '" + s + "'");
        return num / den;
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
    std::string digits;
    int frac_digits = 0;
    bool seen_point = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.') {
            if (seen_point) throw fail("second decimal point");
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits.push_back(s[i]);
            if (seen_point) ++frac_digits;
        } else {
            throw fail("unexpected character");
        }
    }
    if (digits.empty()) throw fail("no digits");
    long exponent = 0;
    if (i < s.size()) {
        const std::string e = s.substr(i + 1);
        if (e.empty()) throw fail("empty exponent");
        std::size_t j = 0;
        if (e[0] == '+' || e[0] == '-') ++j;
        if (j == e.size() || !std::all_of(e.begin() + static_cast<long>(j), e.end(),
                                          [](unsigned char c) { return std::isdigit(c); }))
            throw fail("bad exponent");
        if (e.size() - j > 6) throw fail("exponent out of range");
        exponent = std::stol(e);
    }
    mpz_class num(digits, 10);
    if (negative) num = -num;
    const long scale = exponent - frac_digits;
    if (scale >= 0) return Rational::from_integers(num * pow10z(static_cast<unsigned>(scale)), 1);
    return Rational::from_integers(num, pow10z(static_cast<unsigned>(-scale)));
}

// -------------------------------------------------------- RationalInterval

RationalInterval::RationalInterval(Rational point) : lo_(point), hi_(std::move(point)) {}

RationalInterval::RationalInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw NumericError("interval with lo > hi");
}

RationalInterval RationalInterval::widened_to_grid(unsigned bits) const {
    return {round_down(lo_, bits), round_up(hi_, bits)};
}

RationalInterval RationalInterval::operator-() const { return {-hi_, -lo_}; }

RationalInterval& RationalInterval::operator+=(const RationalInterval& o) {
    lo_ += o.lo_;
    hi_ += o.hi_;
    return *this;
}

RationalInterval& RationalInterval::operator-=(const RationalInterval& o) {
    Rational lo = lo_ - o.hi_;
    hi_ -= o.lo_;
    lo_ = std::move(lo);
    return *this;
}

RationalInterval& RationalInterval::operator*=(const RationalInterval& o) {
    if (is_point() && o.is_point()) {
        lo_ *= o.lo_;
        hi_ = lo_;
        return *this;
    }
    const Rational p[4] = {lo_ * o.lo_, lo_ * o.hi_, hi_ * o.lo_, hi_ * o.hi_};
    lo_ = *std::min_element(std::begin(p), std::end(p));
    hi_ = *std::max_element(std::begin(p), std::end(p));
    return *this;
}

RationalInterval& RationalInterval::operator/=(const RationalInterval& o) {
    if (o.contains_zero()) throw NumericError("interval division by an interval containing zero");
    return *this *= RationalInterval(Rational(1) / o.hi_, Rational(1) / o.lo_);
}

std::ostream& operator<<(std::ostream& os, const RationalInterval& x) {
    return os << '[' << x.lo() << ", " << x.hi() << ']';
}

RationalInterval hull(const RationalInterval& a, const RationalInterval& b) {
    return {min(a.lo(), b.lo()), max(a.hi(), b.hi())};
}

Rational round_down(const Rational& r, unsigned bits) {
    if (r.is_integer()) return r;
    return Rational::from_integers(floor_div(r.numerator() << bits, r.denominator()), pow2z(bits));
}

Rational round_up(const Rational& r, unsigned bits) {
    if (r.is_integer()) return r;
    return Rational::from_integers(ceil_div(r.numerator() << bits, r.denominator()), pow2z(bits));
}

// ------------------------------------------------------------------ roots

RationalInterval interval_sqrt(const RationalInterval& x, const Rational& tol) {
    if (x.lo().sign() < 0) throw NumericError("square root of an interval reaching below zero");
    const unsigned bits = bits_for(tol);
    const Rational lo = root_bracket(x.lo(), 2, bits).first;
    const Rational hi = root_bracket(x.hi(), 2, bits).second;
    return {lo, hi};
}

RationalInterval interval_cbrt(const RationalInterval& x, const Rational& tol) {
    const unsigned bits = bits_for(tol);
    auto lower = [&](const Rational& v) {
        return v.sign() >= 0 ? root_bracket(v, 3, bits).first : -root_bracket(-v, 3, bits).second;
    };
    auto upper = [&](const Rational& v) {
        return v.sign() >= 0 ? root_bracket(v, 3, bits).second : -root_bracket(-v, 3, bits).first;
    };
    return {lower(x.lo()), upper(x.hi())};
}

// ------------------------------------------------------------------- trig

RationalInterval pi_enclosure(const Rational& tol) {
    static std::mutex mu;
    static std::optional<RationalInterval> cached;
    {
        std::lock_guard lock(mu);
        if (cached && cached->width() <= tol) return *cached;
    }
    // Compute a little tighter than asked so nearby requests hit the cache.
    const Rational target = tol / Rational(64);
    const RationalInterval a = atan_inv(5, target / Rational(32));
    const RationalInterval b = atan_inv(239, target / Rational(8));
    const RationalInterval pi =
        (RationalInterval(Rational(16)) * a - RationalInterval(Rational(4)) * b).widened_to_grid(bits_for(target) + 4);
    std::lock_guard lock(mu);
    if (!cached || pi.width() < cached->width()) cached = pi;
    return pi;
}

RationalInterval sin_enclosure(const RationalInterval& x, const Rational& tol) {
    return trig_enclosure(x, true, tol);
}

RationalInterval cos_enclosure(const RationalInterval& x, const Rational& tol) {
    return trig_enclosure(x, false, tol);
}

RationalInterval cos_pi_multiple(const Rational& k, const Rational& tol) {
    Rational r = mod_two(k);
    if (r > Rational(1)) r = Rational(2) - r;  // cos is even about pi
    // Rational values of cos(r*pi), r in [0, 1].
    if (r.is_zero()) return Rational(1);
    if (r == Rational(1, 3)) return Rational(1, 2);
    if (r == Rational(1, 2)) return Rational(0);
    if (r == Rational(2, 3)) return Rational(-1, 2);
    if (r == Rational(1)) return Rational(-1);
    bool negate = false;
    if (r > Rational(1, 2)) {
        r = Rational(1) - r;
        negate = true;
    }
    const RationalInterval angle = RationalInterval(r) * pi_enclosure(tol / Rational(4));
    const RationalInterval c = cos_enclosure(angle, tol / Rational(4));
    return negate ? -c : c;
}

RationalInterval sin_pi_multiple(const Rational& k, const Rational& tol) {
    return cos_pi_multiple(k - Rational(1, 2), tol);
}

// ----------------------------------------------------------- TaggedDecimal

std::string TaggedDecimal::tag_symbol() const {
    switch (tag) {
        case DecimalTag::minus: return "-";
        case DecimalTag::plus: return "+";
        case DecimalTag::exact: break;
    }
    return "=";
}

std::string TaggedDecimal::str() const {
    return tag == DecimalTag::exact ? text : text + "(" + tag_symbol() + ")";
}

std::ostream& operator<<(std::ostream& os, const TaggedDecimal& d) { return os << d.str(); }

TaggedDecimal render_tagged(const Rational& x, int digits) {
    if (digits < 1) throw NumericError("render_tagged needs at least one digit");
    const mpz_class scale = pow10z(static_cast<unsigned>(digits));
    const Rational scaled = x.abs() * Rational::from_integers(scale, 1);
    mpz_class q = scaled.floor();
    if (scaled - Rational::from_integers(q, 1) >= Rational(1, 2)) q += 1;
    const Rational printed = Rational::from_integers(q, scale);

    std::string body = q.get_str();
    if (body.size() <= static_cast<std::size_t>(digits))
        body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");

    TaggedDecimal out;
    out.text = (x.sign() < 0 ? "-" : "") + body;
    const Rational ax = x.abs();
    out.tag = ax == printed ? DecimalTag::exact : (ax < printed ? DecimalTag::minus : DecimalTag::plus);
    return out;
}

std::optional<TaggedDecimal> render_tagged(const RationalInterval& x, int digits) {
    TaggedDecimal lo = render_tagged(x.lo(), digits);
    if (x.is_point()) return lo;
    TaggedDecimal hi = render_tagged(x.hi(), digits);
    if (lo.text != hi.text) return std::nullopt;
    // An interior point could equal the printed value; then no tag is certain.
    const Rational printed = parse_decimal_value(lo);
    if (x.contains(printed) || x.contains(-printed)) return std::nullopt;
    if (lo.tag != hi.tag) return std::nullopt;
    return lo;
}

Rational parse_decimal_value(const TaggedDecimal& d) { return parse_rational(d.text); }

}  // namespace hillvar
