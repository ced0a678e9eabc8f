#include "hillvar/polynomial.hpp"

#include <stdexcept>

namespace hillvar {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Polynomial::coeff(int k) const {
    return k >= 0 && k <= degree() ? c_[static_cast<std::size_t>(k)] : Rational();
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    std::vector<Rational> d;
    for (int k = 1; k <= degree(); ++k) d.push_back(c_[static_cast<std::size_t>(k)] * Rational(k));
    return Polynomial(std::move(d));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw NumericError("polynomial division by zero");
    std::vector<Rational> rem = c_;
    const int dd = divisor.degree();
    const Rational& lead = divisor.c_.back();
    std::vector<Rational> quot(degree() >= dd ? static_cast<std::size_t>(degree() - dd + 1) : 0);
    for (int k = degree(); k >= dd; --k) {
        const Rational f = rem[static_cast<std::size_t>(k)] / lead;
        if (f.is_zero()) continue;
        quot[static_cast<std::size_t>(k - dd)] = f;
        for (int i = 0; i <= dd; ++i) rem[static_cast<std::size_t>(k - dd + i)] -= f * divisor.c_[static_cast<std::size_t>(i)];
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::mod(const Polynomial& divisor) const { return divmod(divisor).second; }

Polynomial Polynomial::divided_exactly(const Polynomial& divisor) const {
    auto [q, r] = divmod(divisor);
    if (!r.is_zero()) throw NumericError("polynomial division is not exact");
    return q;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b * Rational(-1); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t k = 0; k < b.c_.size(); ++k) c[i + k] += a.c_[i] * b.c_[k];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Rational& k) {
    std::vector<Rational> c = a.c_;
    for (auto& x : c) x *= k;
    return Polynomial(std::move(c));
}

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
    std::vector<Polynomial> chain{p};
    if (p.degree() < 1) return chain;
    chain.push_back(p.derivative());
    while (chain.back().degree() > 0) {
        const Polynomial r = chain[chain.size() - 2].mod(chain.back()) * Rational(-1);
        if (r.is_zero()) break;
        chain.push_back(r);
    }
    return chain;
}

int sign_variations(const std::vector<Polynomial>& chain, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& q : chain) {
        const int s = q.eval(x).sign();
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

int sturm_count(const Polynomial& p, const Rational& a, const Rational& b) {
    if (!(a < b)) throw std::invalid_argument("sturm_count needs a < b");
    if (p.eval(a).is_zero()) throw NumericError("sturm_count needs p(a) != 0");
    const auto chain = sturm_chain(p);
    return sign_variations(chain, a) - sign_variations(chain, b);
}

}  // namespace hillvar
