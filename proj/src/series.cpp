#include "hillvar/series.hpp"

#include <stdexcept>

namespace hillvar {

namespace {

std::size_t index_of(int sigma, int order) { return static_cast<std::size_t>((sigma + order) / 2); }

}  // namespace

// ------------------------------------------------------------ FourierSlice

FourierSlice::FourierSlice(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("slice order must be nonnegative");
    coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

FourierSlice FourierSlice::monomial(int sigma, Rational c) {
    FourierSlice s(sigma < 0 ? -sigma : sigma);
    s.set(sigma, std::move(c));
    return s;
}

bool FourierSlice::in_support(int sigma) const {
    return sigma >= -order_ && sigma <= order_ && ((sigma + order_) % 2 == 0);
}

Rational FourierSlice::at(int sigma) const {
    if (!in_support(sigma)) return Rational();
    return coeffs_[index_of(sigma, order_)];
}

void FourierSlice::set(int sigma, Rational v) {
    if (!in_support(sigma))
        throw std::out_of_range("frequency " + std::to_string(sigma) + " outside slice of order " +
                                std::to_string(order_));
    coeffs_[index_of(sigma, order_)] = std::move(v);
}

bool FourierSlice::is_zero() const {
    for (const auto& c : coeffs_)
        if (!c.is_zero()) return false;
    return true;
}

FourierSlice FourierSlice::padded(int order) const {
    if (order < order_ || (order - order_) % 2 != 0)
        throw std::invalid_argument("padding must grow the order by an even amount");
    if (order == order_) return *this;
    FourierSlice out(order);
    const std::size_t offset = static_cast<std::size_t>((order - order_) / 2);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i + offset] = coeffs_[i];
    return out;
}

FourierSlice FourierSlice::shifted(int shift) const {
    const int mag = shift < 0 ? -shift : shift;
    FourierSlice out(order_ + mag);
    for (int sigma = -order_; sigma <= order_; sigma += 2) out.set(sigma + shift, at(sigma));
    return out;
}

FourierSlice& FourierSlice::operator+=(const FourierSlice& o) {
    if ((order_ - o.order_) % 2 != 0) throw std::invalid_argument("adding slices of different parity");
    if (o.order_ > order_) *this = padded(o.order_);
    const std::size_t offset = static_cast<std::size_t>((order_ - o.order_) / 2);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i + offset] += o.coeffs_[i];
    return *this;
}

FourierSlice& FourierSlice::operator-=(const FourierSlice& o) { return *this += o * Rational(-1); }

FourierSlice& FourierSlice::operator*=(const Rational& k) {
    for (auto& c : coeffs_) c *= k;
    return *this;
}

bool operator==(const FourierSlice& a, const FourierSlice& b) {
    if ((a.order_ - b.order_) % 2 != 0) return a.is_zero() && b.is_zero();
    const int order = a.order_ > b.order_ ? a.order_ : b.order_;
    for (int sigma = -order; sigma <= order; sigma += 2)
        if (a.at(sigma) != b.at(sigma)) return false;
    return true;
}

FourierSlice slice_mul(const FourierSlice& a, const FourierSlice& b) {
    FourierSlice out(a.order() + b.order());
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    std::vector<Rational> acc(out.coefficients().size());
    // index(s1) + index(s2) = index(s1 + s2) in the product's layout.
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].is_zero()) continue;
        for (std::size_t k = 0; k < cb.size(); ++k) {
            if (cb[k].is_zero()) continue;
            acc[i + k] += ca[i] * cb[k];
        }
    }
    for (int sigma = -out.order(); sigma <= out.order(); sigma += 2)
        out.set(sigma, std::move(acc[index_of(sigma, out.order())]));
    return out;
}

FourierSlice reflect(const FourierSlice& s) {
    FourierSlice out(s.order());
    for (int sigma = -s.order(); sigma <= s.order(); sigma += 2) out.set(-sigma, s.at(sigma));
    return out;
}

// ------------------------------------------------------------ GradedSeries

GradedSeries::GradedSeries(int truncation) {
    if (truncation < 0) throw std::invalid_argument("truncation must be nonnegative");
    slices_.reserve(static_cast<std::size_t>(truncation) + 1);
    for (int j = 0; j <= truncation; ++j) slices_.emplace_back(j);
}

const FourierSlice& GradedSeries::grade(int j) const {
    static const FourierSlice empty;
    if (j < 0 || j > truncation()) {
        if (j < 0) throw std::out_of_range("negative grade");
        // Zero above the truncation. Order is irrelevant for a zero slice read.
        return empty;
    }
    return slices_[static_cast<std::size_t>(j)];
}

void GradedSeries::set_grade(int j, const FourierSlice& s) {
    if (j < 0 || j > truncation()) throw std::out_of_range("grade outside truncation");
    if (s.order() > j || (j - s.order()) % 2 != 0)
        throw std::invalid_argument("grade-" + std::to_string(j) + " slice violates the support law");
    slices_[static_cast<std::size_t>(j)] = s.padded(j);
}

void GradedSeries::add_to_grade(int j, const FourierSlice& s) {
    FourierSlice sum = grade(j) + s;
    set_grade(j, sum);
}

GradedSeries GradedSeries::truncated(int truncation) const {
    GradedSeries out(truncation);
    for (int j = 0; j <= truncation && j <= this->truncation(); ++j) out.slices_[static_cast<std::size_t>(j)] = slices_[static_cast<std::size_t>(j)];
    return out;
}

int GradedSeries::zero_through() const {
    int g = -1;
    for (int j = 0; j <= truncation(); ++j) {
        if (!slices_[static_cast<std::size_t>(j)].is_zero()) break;
        g = j;
    }
    return g;
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o) {
    if (o.truncation() > truncation()) *this = truncated(o.truncation());
    for (int j = 0; j <= o.truncation(); ++j) slices_[static_cast<std::size_t>(j)] += o.slices_[static_cast<std::size_t>(j)];
    return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o) { return *this += o * Rational(-1); }

GradedSeries& GradedSeries::operator*=(const Rational& k) {
    for (auto& s : slices_) s *= k;
    return *this;
}

bool operator==(const GradedSeries& a, const GradedSeries& b) {
    const int J = a.truncation() > b.truncation() ? a.truncation() : b.truncation();
    for (int j = 0; j <= J; ++j) {
        const FourierSlice& sa = j <= a.truncation() ? a.grade(j) : FourierSlice(j);
        const FourierSlice& sb = j <= b.truncation() ? b.grade(j) : FourierSlice(j);
        if (!(sa == sb)) return false;
    }
    return true;
}

GradedSeries graded_mul(const GradedSeries& a, const GradedSeries& b, int J) {
    GradedSeries out(J);
    for (int j = 0; j <= J; ++j) {
        FourierSlice acc(j);
        for (int j1 = 0; j1 <= j; ++j1) {
            const int j2 = j - j1;
            if (j1 > a.truncation() || j2 > b.truncation()) continue;
            const FourierSlice& s1 = a.grade(j1);
            const FourierSlice& s2 = b.grade(j2);
            if (s1.is_zero() || s2.is_zero()) continue;
            acc += slice_mul(s1, s2);
        }
        out.set_grade(j, acc);
    }
    return out;
}

GradedSeries binomial_power(const GradedSeries& s, const Rational& e, int J) {
    if (!s.grade(0).is_zero()) throw std::invalid_argument("binomial_power needs a series without grade-0 part");
    GradedSeries w(J);
    w.set_grade(0, FourierSlice::monomial(0, Rational(1)));
    // n W_n = sum_{k=1..n} [(n - k) - e k] S_k W_{n-k}
    for (int n = 1; n <= J; ++n) {
        FourierSlice acc(n);
        for (int k = 1; k <= n && k <= s.truncation(); ++k) {
            const FourierSlice& sk = s.grade(k);
            const FourierSlice& wr = w.grade(n - k);
            if (sk.is_zero() || wr.is_zero()) continue;
            const Rational weight = Rational(n - k) - e * Rational(k);
            if (weight.is_zero()) continue;
            acc += slice_mul(sk, wr) * weight;
        }
        w.set_grade(n, acc * Rational(1, n));
    }
    return w;
}

std::pair<GradedSeries, GradedSeries> remainder_series(const GradedSeries& p, const GradedSeries& q, int J) {
    const GradedSeries pt = p.truncated(J);
    const GradedSeries qt = q.truncated(J);
    const Rational half(1, 2), three_halves(3, 2);

    GradedSeries one(J);
    one.set_grade(0, FourierSlice::monomial(0, Rational(1)));

    GradedSeries big_p = graded_mul(binomial_power(pt, -half, J), binomial_power(qt, -three_halves, J), J);
    big_p -= one + pt * half + qt * three_halves;

    GradedSeries big_q = graded_mul(binomial_power(pt, -three_halves, J), binomial_power(qt, -half, J), J);
    big_q -= one + pt * three_halves + qt * half;
    return {big_p, big_q};
}

// ------------------------------------------------------------- PowerSeries

Rational PowerSeries::sum() const {
    Rational s;
    for (const auto& c : c_) s += c;
    return s;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) { return *this += o * Rational(-1); }

PowerSeries& PowerSeries::operator*=(const Rational& k) {
    for (auto& c : c_) c *= k;
    return *this;
}

PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b) {
    const int n = a.truncation() < b.truncation() ? a.truncation() : b.truncation();
    PowerSeries out(n);
    for (int i = 0; i <= n; ++i) {
        if (a.at(i).is_zero()) continue;
        for (int k = 0; i + k <= n; ++k) out.set(i + k, out.at(i + k) + a.at(i) * b.at(k));
    }
    return out;
}

PowerSeries cubic_kernel(const PowerSeries& z) {
    if (!z.at(0).is_zero()) throw std::invalid_argument("cubic_kernel needs z(0) = 0");
    const int n = z.truncation();
    PowerSeries out(n);
    if (n < 2) return out;
    PowerSeries power = series_mul(z, z);
    for (int k = 2; k <= n; ++k) {
        out += power * Rational(k + 1);
        power = series_mul(power, z);
    }
    return out;
}

}  // namespace hillvar
