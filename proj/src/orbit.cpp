#include "hillvar/orbit.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace hillvar {

namespace {

// Representative of k modulo 2 in [0, 2).
Rational reduce_turn(const Rational& k) {
    const Rational half = k / Rational(2);
    return k - Rational::from_integers(half.floor(), mpz_class(1)) * Rational(2);
}

unsigned grid_bits(const Rational& tol) {
    const mpz_class inv = (tol.denominator() + tol.numerator() - 1) / tol.numerator();
    return static_cast<unsigned>(mpz_sizeinbase(inv.get_mpz_t(), 2)) + 16;
}

// c_sigma = sum_j a_{j,sigma} lambda^j for |sigma| <= n_max.
std::vector<Rational> collapsed_coefficients(const CoeffTable& table, const Rational& lambda, int n_max) {
    std::vector<Rational> c(static_cast<std::size_t>(2 * n_max + 1));
    Rational lp(1);
    for (int j = 1; j <= n_max; ++j) {
        lp *= lambda;
        for (int s = -j; s <= j; s += 2) c[static_cast<std::size_t>(s + n_max)] += table.at(j, s) * lp;
    }
    return c;
}

// cos(k pi) for every k needed, keyed by k mod 2.
class CosineCache {
public:
    CosineCache(const std::vector<Rational>& keys, const Rational& tol) {
        std::vector<Rational> uniq;
        for (const Rational& k : keys) uniq.push_back(reduce_turn(k));
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<RationalInterval> vals(uniq.size());
        parallel_for(uniq.size(), [&](std::size_t i) { vals[i] = cos_pi_multiple(uniq[i], tol); });
        for (std::size_t i = 0; i < uniq.size(); ++i) map_.emplace(uniq[i], vals[i]);
    }

    const RationalInterval& cos_pi(const Rational& k) const { return map_.at(reduce_turn(k)); }
    const RationalInterval& sin_pi(const Rational& k) const { return cos_pi(k - Rational(1, 2)); }

private:
    std::map<Rational, RationalInterval> map_;
};

std::vector<Rational> needed_turns(const std::vector<Rational>& phases, int n_max, bool with_base) {
    std::vector<Rational> keys;
    for (const Rational& t : phases) {
        for (int s = -n_max; s <= n_max; ++s) {
            const Rational k = Rational(2 * s) * t;
            keys.push_back(k);
            keys.push_back(k - Rational(1, 2));
        }
        if (with_base) {
            keys.push_back(t);
            keys.push_back(t - Rational(1, 2));
        }
    }
    return keys;
}

// Exact coefficient times a trig value; interval trig values take a gridded
// copy of the coefficient so endpoint sizes stay bounded.
RationalInterval scaled(const Rational& c, const RationalInterval& trig, unsigned bits) {
    if (trig.is_point()) return RationalInterval(c * trig.lo());
    return RationalInterval(c).widened_to_grid(bits) * trig;
}

XiEta xi_eta_at(const std::vector<Rational>& c, int n_max, const Rational& t, const CosineCache& trig, unsigned bits) {
    RationalInterval xi(Rational(0)), eta(Rational(0));
    for (int s = -n_max; s <= n_max; ++s) {
        const Rational& cs = c[static_cast<std::size_t>(s + n_max)];
        if (cs.is_zero()) continue;
        const Rational k = Rational(2 * s) * t;
        xi -= scaled(cs, trig.cos_pi(k), bits);
        eta -= scaled(cs, trig.sin_pi(k), bits);
    }
    return {xi, eta};
}

void check_order(const CoeffTable& table, int n_max) {
    if (n_max < 0 || n_max > table.J()) throw std::out_of_range("n_max outside the table");
}

std::vector<OrbitSample> evaluate_samples(const CoeffTable& table, const Rational& lambda,
                                          const std::vector<Rational>& phases, int n_max, const Rational& a,
                                          const Rational& tol) {
    check_order(table, n_max);
    if (tol.sign() <= 0) throw NumericError("tolerance must be positive");
    const std::vector<Rational> c = collapsed_coefficients(table, lambda, n_max);
    const CosineCache trig(needed_turns(phases, n_max, true), tol);
    const unsigned bits = grid_bits(tol);
    std::vector<OrbitSample> out(phases.size());
    parallel_for(phases.size(), [&](std::size_t i) {
        const Rational& t = phases[i];
        const XiEta v = xi_eta_at(c, n_max, t, trig, bits);
        const RationalInterval one_xi = RationalInterval(Rational(1)) + v.xi;
        const RationalInterval& ct = trig.cos_pi(t);
        const RationalInterval& st = trig.sin_pi(t);
        const RationalInterval scale(a);
        out[i] = {t, v.xi, v.eta, scale * (one_xi * ct - v.eta * st), scale * (one_xi * st + v.eta * ct)};
    });
    return out;
}

std::vector<Rational> sample_phases(int samples) {
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    std::vector<Rational> phases;
    for (int k = 0; k < samples; ++k) phases.push_back(Rational(2 * k, samples));
    return phases;
}

std::optional<std::vector<TaggedDecimal>> render_row(const OrbitSample& s, const RationalInterval& pi, int digits) {
    std::vector<TaggedDecimal> row;
    for (const RationalInterval& v : {RationalInterval(s.tau_over_pi) * pi, s.xi, s.eta, s.x, s.y}) {
        const std::optional<TaggedDecimal> d = render_tagged(v, digits);
        if (!d) return std::nullopt;
        row.push_back(*d);
    }
    return row;
}

}  // namespace

unsigned worker_count() {
    if (const char* env = std::getenv("HILLVAR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<XiEta> evaluate_xi_eta(const CoeffTable& table, const Rational& lambda,
                                   const std::vector<Rational>& tau_over_pi, int n_max, const Rational& tol) {
    check_order(table, n_max);
    if (tol.sign() <= 0) throw NumericError("tolerance must be positive");
    const std::vector<Rational> c = collapsed_coefficients(table, lambda, n_max);
    const CosineCache trig(needed_turns(tau_over_pi, n_max, false), tol);
    const unsigned bits = grid_bits(tol);
    std::vector<XiEta> out(tau_over_pi.size());
    parallel_for(tau_over_pi.size(),
                 [&](std::size_t i) { out[i] = xi_eta_at(c, n_max, tau_over_pi[i], trig, bits); });
    return out;
}

OrbitSample evaluate_xy(const CoeffTable& table, const Rational& lambda, const Rational& tau_over_pi, int n_max,
                        const Rational& a, const Rational& tol) {
    return evaluate_samples(table, lambda, {tau_over_pi}, n_max, a, tol).front();
}

std::vector<OrbitSample> sample_orbit(const CoeffTable& table, const Rational& lambda, int samples, int n_max,
                                      const Rational& a, const Rational& tol) {
    return evaluate_samples(table, lambda, sample_phases(samples), n_max, a, tol);
}

std::string export_orbit(const CoeffTable& table, const Rational& lambda, int samples, int n_max, OrbitFormat format,
                         int digits, const Rational& a) {
    if (digits < 1) throw std::invalid_argument("digits must be positive");
    const std::vector<Rational> phases = sample_phases(samples);
    Rational tol = pow10_neg(digits + 12);
    std::vector<OrbitSample> rows = evaluate_samples(table, lambda, phases, n_max, a, tol);
    std::vector<std::vector<TaggedDecimal>> rendered(rows.size());
    // Rows whose enclosure straddles a printed digit are recomputed tighter.
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Rational t = tol;
        for (int attempt = 0;; ++attempt) {
            const std::optional<std::vector<TaggedDecimal>> r = render_row(rows[i], pi_enclosure(t), digits);
            if (r) {
                rendered[i] = *r;
                break;
            }
            if (attempt == 4) throw NumericError("cannot decide the printed digits of orbit sample " + std::to_string(i));
            t *= pow10_neg(20);
            rows[i] = evaluate_xy(table, lambda, phases[i], n_max, a, t);
        }
    }

    static const char* const columns[] = {"tau", "xi", "eta", "x", "y"};
    std::ostringstream os;
    if (format == OrbitFormat::csv) {
        os << "tau,xi,eta,x,y\n";
        for (const auto& row : rendered) {
            for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k].str();
            os << '\n';
        }
        return os.str();
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rendered.size(); ++i) {
        nlohmann::ordered_json o;
        o["tau_over_pi"] = rows[i].tau_over_pi.str();
        for (std::size_t k = 0; k < 5; ++k)
            o[columns[k]] = {{"text", rendered[i][k].text}, {"tag", rendered[i][k].tag_symbol()}};
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

}  // namespace hillvar
