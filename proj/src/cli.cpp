#include "hillvar/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "hillvar/error_bounds.hpp"
#include "hillvar/hill_coeffs.hpp"
#include "hillvar/majorant_cert.hpp"
#include "hillvar/orbit.hpp"

namespace hillvar {

namespace {

struct RawOptions {
    std::string m, lambda = "m2", tol = "1e-12", format = "table", out, complex_radius, a = "1";
    int J = 8, N = 2, n = 2, digits = 10, samples = 360;
};

const std::map<std::string, Command> kCommands = {
    {"coeffs", Command::coeffs}, {"certify", Command::certify}, {"critical-m", Command::critical_m},
    {"bound", Command::bound},   {"orbit", Command::orbit},     {"report", Command::report},
    {"residual", Command::residual},
};

const char* describe(Command c) {
    switch (c) {
        case Command::coeffs: return "Exact coefficient table a_{j,sigma} through order J";
        case Command::certify: return "Certify convergence at (m, lambda), or on the disc |m| <= M";
        case Command::critical_m: return "Bracket the largest m with certified convergence at lambda = m^2";
        case Command::bound: return "Refined truncation-error bound beyond order n with threshold N";
        case Command::orbit: return "Sample xi, eta, x, y over one revolution";
        case Command::report: return "Full worked table at (m, lambda = m^2)";
        case Command::residual: return "Highest grade at which the truncated series solve the equations exactly";
    }
    return "";
}

void add_options(CLI::App* sub, RawOptions& o) {
    sub->add_option("--m", o.m, "Ratio of mean motions (exact rational, e.g. 1/7 or 0.0808)");
    sub->add_option("--lambda", o.lambda, "Series parameter, rational or m2")->capture_default_str();
    sub->add_option("--J", o.J, "Highest order of the coefficient table")->capture_default_str();
    sub->add_option("--N", o.N, "Threshold order for the refined bound (>= 2)")->capture_default_str();
    sub->add_option("--n", o.n, "Truncation order for the bound")->capture_default_str();
    sub->add_option("--digits", o.digits, "Fractional digits of rendered decimals")->capture_default_str();
    sub->add_option("--tol", o.tol, "Enclosure width (exact rational)")->capture_default_str();
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", o.out, "Write the artifact to this file instead of stdout");
    sub->add_option("--complex-radius", o.complex_radius, "Certify every complex m with |m| <= M");
    sub->add_option("--samples", o.samples, "Orbit samples per revolution")->capture_default_str();
    sub->add_option("--a", o.a, "Orbit scale")->capture_default_str();
}

Rational parse_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const NumericError& e) {
        throw UsageError("--" + flag + ": " + e.what());
    }
}

std::string decimal(const Rational& v, int digits) { return render_tagged(v, digits).str(); }

// Key/value artifacts share one renderer for all three formats.
using Rows = std::vector<std::pair<std::string, std::string>>;

std::string render_rows(const Rows& rows, OutputFormat f) {
    std::ostringstream os;
    if (f == OutputFormat::json) {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : rows) j[k] = v;
        return j.dump(2) + "\n";
    }
    if (f == OutputFormat::csv) {
        os << "key,value\n";
        for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
        return os.str();
    }
    std::size_t w = 0;
    for (const auto& kv : rows) w = std::max(w, kv.first.size());
    for (const auto& [k, v] : rows) os << std::left << std::setw(static_cast<int>(w) + 2) << k << v << '\n';
    return os.str();
}

RunResult run_coeffs(const RunConfig& cfg) {
    const CoeffTable t = build_table(*cfg.m, cfg.J);
    if (cfg.format == OutputFormat::json) return {0, table_to_json(t) + "\n"};
    if (cfg.format == OutputFormat::csv) return {0, table_to_csv(t)};
    const Rational lambda = cfg.resolved_lambda();
    std::ostringstream os;
    os << "m = " << *cfg.m << ", lambda = " << lambda << ", J = " << cfg.J << '\n';
    os << std::left << std::setw(4) << "j" << std::setw(7) << "sigma" << std::setw(cfg.digits + 12) << "a"
       << "a lambda^j\n";
    for (int j = 1; j <= t.J(); ++j)
        for (int s = -j; s <= j; s += 2)
            os << std::left << std::setw(4) << j << std::setw(7) << s << std::setw(cfg.digits + 12)
               << decimal(t.at(j, s), cfg.digits) << decimal(t.at(j, s) * lambda.pow(j), cfg.digits) << '\n';
    return {0, os.str()};
}

void add_certificate(Rows& rows, const Certificate& c, int digits) {
    const std::string name = to_string(c.condition);
    rows.emplace_back(name, to_string(c.verdict));
    rows.emplace_back(name + "_margin_lo", decimal(c.margin.lo(), digits));
    rows.emplace_back(name + "_margin_hi", decimal(c.margin.hi(), digits));
}

RunResult run_certify(const RunConfig& cfg) {
    // Without --m the disc check takes lambda = M^2.
    const Rational lambda = cfg.lambda || cfg.m ? cfg.resolved_lambda() : *cfg.complex_radius * *cfg.complex_radius;
    Rows rows;
    Certificate main;
    if (cfg.complex_radius) {
        main = complex_disc_certify(*cfg.complex_radius, lambda, cfg.tol);
        rows.emplace_back("M", cfg.complex_radius->str());
        rows.emplace_back("lambda", lambda.str());
        add_certificate(rows, main, cfg.digits);
    } else {
        const ConvergenceParams p = reduce_params(*cfg.m, lambda);
        rows.emplace_back("m", cfg.m->str());
        rows.emplace_back("lambda", lambda.str());
        rows.emplace_back("epsilon", p.epsilon.str());
        rows.emplace_back("h", p.h.str());
        add_certificate(rows, sufficient_check(p), cfg.digits);
        add_certificate(rows, quadratic_majorant(p, cfg.tol).cert, cfg.digits);
        main = p.epsilon < Rational(1) ? exact_condition(p, cfg.tol) : Certificate{};
        if (p.epsilon >= Rational(1)) {
            main.condition = Condition::exact;
            main.verdict = Verdict::fail;
            main.inputs = p;
        }
        add_certificate(rows, main, cfg.digits);
    }
    rows.emplace_back("verdict", to_string(main.verdict));
    return {main.passed() ? 0 : 2, render_rows(rows, cfg.format)};
}

RunResult run_critical_m(const RunConfig& cfg) {
    const RationalInterval b = critical_m(cfg.tol);
    const Rows rows = {{"lo", b.lo().str()},
                       {"hi", b.hi().str()},
                       {"lo_decimal", decimal(b.lo(), cfg.digits)},
                       {"hi_decimal", decimal(b.hi(), cfg.digits)}};
    return {0, render_rows(rows, cfg.format)};
}

RunResult run_bound(const RunConfig& cfg) {
    const Rational lambda = cfg.resolved_lambda();
    const ConvergenceParams p = reduce_params(*cfg.m, lambda);
    const CoeffTable t = build_table(*cfg.m, std::max(cfg.N, 1));
    Rows rows = {{"m", cfg.m->str()}, {"lambda", lambda.str()}, {"N", std::to_string(cfg.N)},
                 {"n", std::to_string(cfg.n)}};
    RefinedParams r;
    RationalInterval z;
    try {
        r = refined_params(t, p, cfg.N);
        z = fixed_point_root(r, cfg.tol);
    } catch (const NumericError& e) {
        rows.emplace_back("status", std::string("no certified root: ") + e.what());
        return {2, render_rows(rows, cfg.format)};
    }
    const std::vector<Rational> l = l_series(t, p, cfg.N, cfg.n);
    const ErrorBoundReport b = truncation_bound(z, l, cfg.n, cfg.N);
    rows.emplace_back("eps_prime", decimal(r.eps_prime, cfg.digits));
    rows.emplace_back("delta", decimal(r.delta, cfg.digits));
    rows.emplace_back("g", decimal(r.g, cfg.digits));
    rows.emplace_back("z_lo", decimal(z.lo(), cfg.digits));
    rows.emplace_back("z_hi", decimal(z.hi(), cfg.digits));
    for (int j = 1; j <= cfg.n; ++j)
        rows.emplace_back("l" + std::to_string(j) + "_lambda" + std::to_string(j),
                          decimal(l[static_cast<std::size_t>(j - 1)], cfg.digits));
    rows.emplace_back("bound_hi", decimal(b.bound.hi(), cfg.digits));
    if (cfg.N <= cfg.n) rows.emplace_back("note", "N <= n: the bound may be far from the true tail");
    return {0, render_rows(rows, cfg.format)};
}

RunResult run_orbit(const RunConfig& cfg) {
    const CoeffTable t = build_table(*cfg.m, cfg.J);
    const OrbitFormat f = cfg.format == OutputFormat::json ? OrbitFormat::json : OrbitFormat::csv;
    return {0, export_orbit(t, cfg.resolved_lambda(), cfg.samples, cfg.J, f, cfg.digits, cfg.a)};
}

RunResult run_report(const RunConfig& cfg) {
    const WorkedReport r = worked_report(*cfg.m, cfg.digits);
    if (cfg.format == OutputFormat::json) return {0, report_to_json(r)};
    if (cfg.format == OutputFormat::table) return {0, report_to_text(r)};
    std::ostringstream os;
    os << "key,text,tag\n";
    for (const ReportEntry& e : r.entries) os << e.key << ',' << e.value.text << ',' << e.value.tag_symbol() << '\n';
    return {0, os.str()};
}

RunResult run_residual(const RunConfig& cfg) {
    const CoeffTable t = build_table(*cfg.m, cfg.J);
    const OdeResidual res = ode_residual(t, cfg.J);
    const Rows rows = {{"m", cfg.m->str()},
                       {"J", std::to_string(cfg.J)},
                       {"zero_through", std::to_string(res.zero_through)},
                       {"system_violations", std::to_string(defining_system_violations(t))}};
    return {0, render_rows(rows, cfg.format)};
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [name, cmd] : kCommands)
        if (cmd == c) return name;
    return "";
}

Rational RunConfig::resolved_lambda() const {
    if (lambda) return *lambda;
    if (!m) throw UsageError("lambda = m2 needs --m");
    return *m * *m;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app("Coefficients, convergence certificates and error bounds for Hill's variational orbit", "hillvar");
    app.require_subcommand(1);
    RawOptions raw;
    for (const auto& [name, cmd] : kCommands) add_options(app.add_subcommand(name, describe(cmd)), raw);

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("hillvar");
    RunConfig cfg;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const std::vector<CLI::App*> subs = app.get_subcommands();
        cfg.help = subs.empty() ? app.help() : subs.front()->help();
        return cfg;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    const CLI::App* sub = app.get_subcommands().front();
    cfg.command = kCommands.at(sub->get_name());
    if (!raw.m.empty()) cfg.m = parse_flag("m", raw.m);
    const bool needs_m = cfg.command != Command::critical_m &&
                         !(cfg.command == Command::certify && !raw.complex_radius.empty());
    if (needs_m && !cfg.m) throw UsageError("--m is required for " + sub->get_name());
    if (raw.lambda != "m2") cfg.lambda = parse_flag("lambda", raw.lambda);
    if (cfg.lambda && cfg.lambda->sign() < 0) throw UsageError("--lambda must be nonnegative");
    cfg.J = raw.J;
    cfg.N = raw.N;
    cfg.n = raw.n;
    cfg.digits = raw.digits;
    cfg.samples = raw.samples;
    cfg.tol = parse_flag("tol", raw.tol);
    cfg.a = parse_flag("a", raw.a);
    cfg.out = raw.out;
    if (!raw.complex_radius.empty()) cfg.complex_radius = parse_flag("complex-radius", raw.complex_radius);
    cfg.format = raw.format == "json" ? OutputFormat::json
                                      : (raw.format == "csv" ? OutputFormat::csv : OutputFormat::table);

    if (cfg.J < 1) throw UsageError("--J must be at least 1");
    if (cfg.N < 2) throw UsageError("--N must be at least 2");
    if (cfg.n < 0) throw UsageError("--n must be nonnegative");
    if (cfg.digits < 1) throw UsageError("--digits must be at least 1");
    if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
    if (cfg.tol.sign() <= 0) throw UsageError("--tol must be positive");
    if (cfg.complex_radius && cfg.complex_radius->sign() <= 0) throw UsageError("--complex-radius must be positive");
    return cfg;
}

RunResult execute(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::coeffs: return run_coeffs(cfg);
        case Command::certify: return run_certify(cfg);
        case Command::critical_m: return run_critical_m(cfg);
        case Command::bound: return run_bound(cfg);
        case Command::orbit: return run_orbit(cfg);
        case Command::report: return run_report(cfg);
        case Command::residual: return run_residual(cfg);
    }
    throw std::logic_error("unknown command");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(static_cast<unsigned long>(std::hash<std::string>{}(path) & 0xffffff));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move output into " + path);
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = parse_config(args);
        if (cfg.help) {
            out << *cfg.help;
            return 0;
        }
        const RunResult r = execute(cfg);
        if (cfg.out.empty()) out << r.output;
        else write_file_atomic(cfg.out, r.output);
        return r.exit_code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for the available commands and flags\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace hillvar
